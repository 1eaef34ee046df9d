#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "adiwkb/errors.hpp"
#include "adiwkb/types.hpp"

namespace adiwkb {

// ---------------------------------------------------------------------------
// Cumulative quadrature
// ---------------------------------------------------------------------------

// Cumulative trapezoid: out[i] = integral of f from x[0] to x[i], out[0] = 0.
// Second-order accurate on smooth integrands; handles non-uniform grids.
std::vector<cplx> cumulative_trapezoid(std::span<const cplx> f, std::span<const double> x);

// Cumulative 4th-order Newton-Cotes on a uniform grid (panel weights from the
// cubic through the four nearest samples). Falls back to the trapezoid rule
// when fewer than four samples are available.
std::vector<cplx> cumulative_quartic(std::span<const cplx> f, std::span<const double> x);

// ---------------------------------------------------------------------------
// Polynomial roots (closed form; the N <= 3 eigenproblems reduce to these)
// ---------------------------------------------------------------------------

// Roots of x^2 + b x + c with complex coefficients, cancellation-stable.
std::array<cplx, 2> solve_quadratic(cplx b, cplx c);

// Roots of t^3 + p t + q with real coefficients. Uses the trigonometric form
// when all three roots are real and stable Cardano otherwise; conjugate pairs
// come out exactly conjugate and real roots exactly real.
std::array<cplx, 3> solve_cubic_depressed(double p, double q);

// Roots of x^3 + a2 x^2 + a1 x + a0 with complex coefficients. Dispatches to
// the real fast path when all coefficients are real.
std::array<cplx, 3> solve_cubic(cplx a2, cplx a1, cplx a0);

// ---------------------------------------------------------------------------
// Natural cubic spline (tabulated potentials)
// ---------------------------------------------------------------------------

class CubicSpline {
public:
    // xs strictly increasing, size >= 2.
    CubicSpline(std::vector<double> xs, std::vector<double> ys);

    double value(double x) const;
    double derivative(double x) const;

private:
    int interval(double x) const;
    std::vector<double> xs_, ys_, m_;  // m_: second derivatives at the knots
};

// ---------------------------------------------------------------------------
// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) for small complex
// linear systems. Integrates from xs.front() to xs.back() (xs may be
// decreasing), landing exactly on every grid point.
// ---------------------------------------------------------------------------

template <int K>
using OdeRhs = std::function<std::array<cplx, K>(double, const std::array<cplx, K>&)>;

template <int K>
std::vector<std::array<cplx, K>> integrate_on_grid(const OdeRhs<K>& f, std::span<const double> xs,
                                                   std::array<cplx, K> y, double rel_tol,
                                                   double abs_tol) {
    // Dormand-Prince coefficients
    static constexpr double c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
    static constexpr double a21 = 1. / 5;
    static constexpr double a31 = 3. / 40, a32 = 9. / 40;
    static constexpr double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
    static constexpr double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561,
                            a54 = -212. / 729;
    static constexpr double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247,
                            a64 = 49. / 176, a65 = -5103. / 18656;
    static constexpr double b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192,
                            b5 = -2187. / 6784, b6 = 11. / 84;
    // y5 - y4 error weights
    static constexpr double e1 = 71. / 57600, e3 = -71. / 16695, e4 = 71. / 1920,
                            e5 = -17253. / 339200, e6 = 22. / 525, e7 = -1. / 40;

    if (xs.size() < 2) throw std::invalid_argument("integrate_on_grid: need >= 2 grid points");

    std::vector<std::array<cplx, K>> out;
    out.reserve(xs.size());
    out.push_back(y);

    const double dir = xs.back() > xs.front() ? 1.0 : -1.0;
    double x = xs.front();
    double h = dir * std::abs(xs[1] - xs[0]);
    std::array<cplx, K> k1 = f(x, y);

    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (size_t target = 1; target < xs.size(); ++target) {
        const double x_next = xs[target];
        // sub-ulp residues from landing on the target count as arrived
        while (dir * (x_next - x) > 32 * eps * std::max(1.0, std::abs(x_next))) {
            if (std::abs(h) < 16 * eps * std::max(1.0, std::abs(x)))
                throw ToleranceNotMet("step size underflow at x = " + std::to_string(x));
            if (std::abs(h) > std::abs(x_next - x)) h = x_next - x;

            std::array<cplx, K> y2, y3, y4, y5, y6;
            for (int i = 0; i < K; ++i) y2[i] = y[i] + h * a21 * k1[i];
            std::array<cplx, K> k2 = f(x + c2 * h, y2);
            for (int i = 0; i < K; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            std::array<cplx, K> k3 = f(x + c3 * h, y3);
            for (int i = 0; i < K; ++i) y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            std::array<cplx, K> k4 = f(x + c4 * h, y4);
            for (int i = 0; i < K; ++i)
                y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            std::array<cplx, K> k5 = f(x + c5 * h, y5);
            for (int i = 0; i < K; ++i)
                y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            std::array<cplx, K> k6 = f(x + h, y6);

            std::array<cplx, K> ynew;
            for (int i = 0; i < K; ++i)
                ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            std::array<cplx, K> k7 = f(x + h, ynew);

            double err = 0;
            for (int i = 0; i < K; ++i) {
                const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
                const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err = std::max(err, std::abs(e) / sc);
            }

            if (err <= 1.0) {
                x += h;
                y = ynew;
                k1 = k7;  // FSAL
            }
            const double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        }
        x = x_next;
        out.push_back(y);
    }
    return out;
}

}  // namespace adiwkb
