#include "adiwkb/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adiwkb/adiabatic.hpp"
#include "adiwkb/errors.hpp"
#include "adiwkb/numerics.hpp"

namespace adiwkb {

namespace {

constexpr double kFloorFraction = 1e-6;

// index of the grid point nearest to x; must lie within half a spacing
int grid_index_of(const Grid& grid, double x, const char* what) {
    const double h = grid.spacing();
    const int i = static_cast<int>(std::lround((x - grid.x_start) / h));
    if (i < 0 || i >= grid.count || std::abs(grid.x_start + h * i - x) > 0.5 * h * (1 + 1e-9))
        throw std::invalid_argument(std::string(what) + " must coincide with a grid point");
    return i;
}

// trapezoidal phase primitive P(x_i) = int_{x0}^{x_i} k ds, plus the value at
// an arbitrary in-span reference obtained from the same piecewise-linear rule
struct Phase {
    std::vector<cplx> at_points;
    cplx at(double x, const std::vector<double>& xs, const std::vector<cplx>& k) const {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        int i = std::clamp(static_cast<int>(it - xs.begin()) - 1, 0, static_cast<int>(xs.size()) - 2);
        const double t = x - xs[i];
        const double h = xs[i + 1] - xs[i];
        const cplx k_here = k[i] + (k[i + 1] - k[i]) * (t / h);
        return at_points[i] + 0.5 * t * (k[i] + k_here);
    }
};

}  // namespace

std::vector<double> turning_points(const PhysicalSystem& sys, double x_lo, double x_hi) {
    if (!(x_lo < x_hi)) throw std::invalid_argument("turning_points: need x_lo < x_hi");
    constexpr int kScanIntervals = 1000;
    constexpr double kBisectTol = 1e-12;

    auto f = [&](double x) { return sys.energy - sys.potential.value(x); };

    std::vector<double> roots;
    const double h = (x_hi - x_lo) / kScanIntervals;
    double a = x_lo, fa = f(a);
    for (int i = 1; i <= kScanIntervals; ++i) {
        const double b = (i == kScanIntervals) ? x_hi : x_lo + h * i;
        const double fb = f(b);
        if (fa == 0.0) roots.push_back(a);
        if (fa * fb < 0.0) {
            double lo = a, hi = b, flo = fa;
            while (hi - lo > kBisectTol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (flo * fm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    if (!roots.empty() && f(x_hi) == 0.0 && std::abs(roots.back() - x_hi) > kBisectTol)
        roots.push_back(x_hi);
    else if (roots.empty() && f(x_hi) == 0.0)
        roots.push_back(x_hi);

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double p, double q) { return std::abs(p - q) < 10 * kBisectTol; }),
                roots.end());
    return roots;
}

WkbSolution wkb_wavefunction(const PhysicalSystem& sys, const Grid& grid, int branch_sign,
                             double x_ref) {
    if (branch_sign != 1 && branch_sign != -1)
        throw std::invalid_argument("wkb_wavefunction: branch_sign must be +1 or -1");
    if (x_ref < grid.x_start || x_ref > grid.x_end)
        throw std::invalid_argument("wkb_wavefunction: x_ref outside the grid span");

    const auto xs = grid.points();
    std::vector<cplx> k(grid.count);
    double k_max = 0;
    for (int i = 0; i < grid.count; ++i) {
        k[i] = wavenumber(sys, xs[i]);
        k_max = std::max(k_max, std::abs(k[i]));
    }
    if (k_max == 0.0) throw AllSingular("k vanishes on the whole grid (E = V everywhere)");
    const double k_floor = kFloorFraction * k_max;

    Phase phase{cumulative_trapezoid(k, xs)};
    const cplx p_ref = phase.at(x_ref, xs, k);

    WkbSolution out;
    out.grid = grid;
    out.branch_sign = branch_sign;
    out.x_ref = x_ref;
    out.k_floor = k_floor;
    out.values.resize(grid.count);
    out.singular_mask.assign(grid.count, false);

    const cplx is(0, branch_sign);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < grid.count; ++i) {
        if (std::abs(k[i]) < k_floor) {
            out.singular_mask[i] = true;
            out.values[i] = cplx(nan, nan);
            continue;
        }
        out.values[i] = std::exp(is * (phase.at_points[i] - p_ref)) / std::sqrt(k[i]);
    }
    return out;
}

WkbSolution wkb_via_adiabatic(const PhysicalSystem& sys, const Grid& grid, int branch_sign,
                              double x_ref) {
    if (branch_sign != 1 && branch_sign != -1)
        throw std::invalid_argument("wkb_via_adiabatic: branch_sign must be +1 or -1");
    if (!turning_points(sys, grid.x_start, grid.x_end).empty())
        throw DegenerateSpectrum("grid interval contains a turning point (k = 0 level crossing)");

    const auto xs = grid.points();
    const MatrixFunction m2 = matrix2(sys);

    // dominant branch: the eigenvalue nearest branch_sign * i k at the grid start
    const EigenSystem e0 = eigensystem_at(m2, xs[0]);
    const cplx target = cplx(0, branch_sign) * wavenumber(sys, xs[0]);
    const int branch = std::abs(e0.eigenvalues[0] - target) <= std::abs(e0.eigenvalues[1] - target)
                           ? 0
                           : 1;

    const auto y = assemble_wavefunction(m2, xs, 1.0, branch, 1);

    const int ir = grid_index_of(grid, x_ref, "wkb_via_adiabatic: x_ref");
    const cplx k_ref = wavenumber(sys, xs[ir]);
    const cplx scale = 1.0 / (std::sqrt(k_ref) * y[ir][0]);

    WkbSolution out;
    out.grid = grid;
    out.branch_sign = branch_sign;
    out.x_ref = xs[ir];
    out.k_floor = 0;
    out.values.resize(grid.count);
    out.singular_mask.assign(grid.count, false);
    for (int i = 0; i < grid.count; ++i) out.values[i] = y[i][0] * scale;
    return out;
}

WkbErrorReport wkb_error_report(const PhysicalSystem& sys, const Grid& grid,
                                std::span<const StateVector> oracle, double exclusion_radius,
                                double x_ref) {
    if (static_cast<int>(oracle.size()) != grid.count)
        throw std::invalid_argument("wkb_error_report: oracle not sampled on this grid");
    if (exclusion_radius < 0)
        throw std::invalid_argument("wkb_error_report: exclusion_radius must be >= 0");

    const auto xs = grid.points();
    const WkbSolution plus = wkb_wavefunction(sys, grid, +1, x_ref);
    const WkbSolution minus = wkb_wavefunction(sys, grid, -1, x_ref);

    // fit c+ psi+ + c- psi- to the oracle's value and derivative at x_ref
    const int ir = grid_index_of(grid, x_ref, "wkb_error_report: x_ref");
    if (plus.singular_mask[ir])
        throw SingularCombination("x_ref lies in the singular zone (|k| < k_floor)");
    const cplx k_ref = wavenumber(sys, xs[ir]);
    const cplx kp_over_k = kk_prime(sys, xs[ir]) / (k_ref * k_ref);  // k'/k
    const cplx dlog_p = -0.5 * kp_over_k + cplx(0, 1) * k_ref;
    const cplx dlog_m = -0.5 * kp_over_k - cplx(0, 1) * k_ref;
    // 2x2 solve for (c+, c-)
    const cplx a = plus.values[ir], b = minus.values[ir];
    const cplx c = dlog_p * plus.values[ir], d = dlog_m * minus.values[ir];
    const cplx det = a * d - b * c;
    if (std::abs(det) == 0.0) throw SingularCombination("branch fit is singular at x_ref");
    const cplx cp = (oracle[ir].y0 * d - oracle[ir].y1 * b) / det;
    const cplx cm = (a * oracle[ir].y1 - c * oracle[ir].y0) / det;

    WkbErrorReport rep;
    rep.c_plus = cp;
    rep.c_minus = cm;
    rep.turning_pts = turning_points(sys, grid.x_start, grid.x_end);

    double oracle_max = 0;
    for (const auto& s : oracle) oracle_max = std::max(oracle_max, std::abs(s.y0));
    if (oracle_max == 0.0) oracle_max = 1.0;

    double linf = 0, l2 = 0;
    int used = 0;
    for (int i = 0; i < grid.count; ++i) {
        double dist = std::numeric_limits<double>::infinity();
        for (double tp : rep.turning_pts) dist = std::min(dist, std::abs(xs[i] - tp));

        const bool singular = plus.singular_mask[i];
        if (dist <= exclusion_radius || singular) {
            if (singular) {
                rep.excluded_has_singular = true;  // k^{-1/2} divergence: unbounded amplitude
            } else {
                const cplx w = cp * plus.values[i] + cm * minus.values[i];
                rep.excluded_max_abs = std::max(rep.excluded_max_abs, std::abs(w));
            }
            continue;
        }
        const cplx w = cp * plus.values[i] + cm * minus.values[i];
        const double err = std::abs(w - oracle[i].y0) / oracle_max;
        linf = std::max(linf, err);
        l2 += err * err;
        ++used;
    }
    rep.linf_rel = linf;
    rep.l2_rel = used > 0 ? std::sqrt(l2 / used) : 0.0;
    rep.points_used = used;
    return rep;
}

}  // namespace adiwkb
