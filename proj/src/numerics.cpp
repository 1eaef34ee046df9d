#include "adiwkb/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace adiwkb {

std::vector<cplx> cumulative_trapezoid(std::span<const cplx> f, std::span<const double> x) {
    if (f.size() != x.size()) throw std::invalid_argument("cumulative_trapezoid: size mismatch");
    std::vector<cplx> out(f.size(), cplx(0));
    for (size_t i = 1; i < f.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
    return out;
}

std::vector<cplx> cumulative_quartic(std::span<const cplx> f, std::span<const double> x) {
    const size_t n = f.size();
    if (n != x.size()) throw std::invalid_argument("cumulative_quartic: size mismatch");
    if (n < 4) return cumulative_trapezoid(f, x);

    const double h = x[1] - x[0];
    std::vector<cplx> out(n, cplx(0));
    // first panel: cubic through f0..f3
    out[1] = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    // interior panels: cubic through the two samples on each side
    for (size_t i = 1; i + 2 < n; ++i)
        out[i + 1] = out[i] + (h / 24.0) * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
    // last panel, mirrored one-sided weights
    out[n - 1] = out[n - 2] +
                 (h / 24.0) * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
    return out;
}

std::array<cplx, 2> solve_quadratic(cplx b, cplx c) {
    const cplx s = std::sqrt(b * b - 4.0 * c);
    // pick the sign that avoids cancellation in -b -+ s
    const cplx q = (std::real(std::conj(b) * s) >= 0) ? -0.5 * (b + s) : -0.5 * (b - s);
    if (q == cplx(0)) return {cplx(0), -b};
    return {q, c / q};
}

std::array<cplx, 3> solve_cubic_depressed(double p, double q) {
    if (q == 0.0) {
        if (p == 0.0) return {cplx(0), cplx(0), cplx(0)};
        // t (t^2 + p) = 0
        const cplx s = p > 0 ? cplx(0, std::sqrt(p)) : cplx(std::sqrt(-p), 0);
        return {cplx(0), s, -s};
    }
    if (p == 0.0) {
        // t^3 = -q
        const double r = std::cbrt(-q);
        const cplx w(-0.5, 0.5 * std::sqrt(3.0));
        return {cplx(r), r * w, r * std::conj(w)};
    }

    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    if (disc > 0.0) {
        // three distinct real roots (implies p < 0): trigonometric form
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg);
        std::array<cplx, 3> out;
        for (int j = 0; j < 3; ++j)
            out[j] = cplx(m * std::cos((phi - 2.0 * M_PI * j) / 3.0), 0.0);
        return out;
    }

    // one real root plus a conjugate pair (or a double root when disc == 0):
    // Cardano with the cancellation-free cube root choice
    const double D = q * q / 4.0 + p * p * p / 27.0;  // = -disc/108 >= 0
    const double sq = std::sqrt(std::max(D, 0.0));
    const double w = (q >= 0.0) ? (-q / 2.0 - sq) : (-q / 2.0 + sq);
    const double u = std::cbrt(w);
    const double t1 = (u != 0.0) ? u - p / (3.0 * u) : 0.0;
    // remaining pair from t^2 + t1 t + (t1^2 + p) = 0
    const double half = -0.5 * t1;
    const double rad = -3.0 * t1 * t1 - 4.0 * p;  // discriminant of the quadratic
    if (rad <= 0.0) {
        const double im = 0.5 * std::sqrt(-rad);
        return {cplx(t1), cplx(half, im), cplx(half, -im)};
    }
    const double rr = 0.5 * std::sqrt(rad);
    return {cplx(t1), cplx(half + rr), cplx(half - rr)};
}

std::array<cplx, 3> solve_cubic(cplx a2, cplx a1, cplx a0) {
    // depressed form: x = t - a2/3
    const cplx shift = a2 / 3.0;
    const cplx p = a1 - a2 * a2 / 3.0;
    const cplx q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;

    std::array<cplx, 3> t;
    if (p.imag() == 0.0 && q.imag() == 0.0) {
        t = solve_cubic_depressed(p.real(), q.real());
    } else if (std::abs(p) == 0.0 && std::abs(q) == 0.0) {
        t = {cplx(0), cplx(0), cplx(0)};
    } else {
        const cplx s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        cplx ucube = -q / 2.0 + s;
        if (std::abs(ucube) < std::abs(-q / 2.0 - s)) ucube = -q / 2.0 - s;
        const cplx u = std::pow(ucube, 1.0 / 3.0);
        const cplx w(-0.5, 0.5 * std::sqrt(3.0));
        for (int j = 0; j < 3; ++j) {
            cplx uj = u;
            if (j == 1) uj *= w;
            if (j == 2) uj *= std::conj(w);
            t[j] = (std::abs(uj) > 0) ? uj - p / (3.0 * uj) : uj;
        }
    }
    for (auto& r : t) r -= shift;
    return t;
}

// ---------------------------------------------------------------------------
// Natural cubic spline
// ---------------------------------------------------------------------------

CubicSpline::CubicSpline(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const size_t n = xs_.size();
    if (n < 2 || ys_.size() != n)
        throw std::invalid_argument("CubicSpline: need matching arrays with >= 2 points");
    for (size_t i = 1; i < n; ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw std::invalid_argument("CubicSpline: x values must be strictly increasing");

    m_.assign(n, 0.0);
    if (n == 2) return;  // linear

    // tridiagonal solve for interior second derivatives (natural ends m0 = mN = 0)
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sup(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double hl = xs_[i] - xs_[i - 1];
        const double hr = xs_[i + 1] - xs_[i];
        diag[i] = 2.0 * (hl + hr);
        sup[i] = hr;
        rhs[i] = 6.0 * ((ys_[i + 1] - ys_[i]) / hr - (ys_[i] - ys_[i - 1]) / hl);
    }
    for (size_t i = 2; i + 1 < n; ++i) {
        const double hl = xs_[i] - xs_[i - 1];
        const double w = hl / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

int CubicSpline::interval(double x) const {
    // clamp to the outermost intervals; evaluation extrapolates the end cubics
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    int i = static_cast<int>(it - xs_.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(xs_.size()) - 2);
}

double CubicSpline::value(double x) const {
    const int i = interval(x);
    const double h = xs_[i + 1] - xs_[i];
    const double a = (xs_[i + 1] - x) / h;
    const double b = (x - xs_[i]) / h;
    return a * ys_[i] + b * ys_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const int i = interval(x);
    const double h = xs_[i + 1] - xs_[i];
    const double a = (xs_[i + 1] - x) / h;
    const double b = (x - xs_[i]) / h;
    return (ys_[i + 1] - ys_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

}  // namespace adiwkb
