#include "adiwkb/cubic_wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adiwkb/errors.hpp"
#include "adiwkb/numerics.hpp"

namespace adiwkb {

namespace {

constexpr double kCollisionTol = 1e-8;

double root_scale(const std::array<cplx, 3>& r) {
    double s = 0;
    for (const auto& z : r) s = std::max(s, std::abs(z));
    return s;
}

double min_gap(const std::array<cplx, 3>& r) {
    double g = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) g = std::min(g, std::abs(r[i] - r[j]));
    return g;
}

}  // namespace

std::array<cplx, 3> cubic_roots(double k2, double kkp, double alpha) {
    auto roots = solve_cubic_depressed(k2, 2.0 * alpha * kkp);
    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return roots;
}

CubicBranches continue_branches(const PhysicalSystem& sys, const Grid& grid,
                                const AlphaFunction& alpha) {
    const auto xs = grid.points();
    CubicBranches out;
    out.grid = xs;
    out.alpha.resize(grid.count);
    out.alpha_prime.resize(grid.count);
    for (int j = 0; j < 3; ++j) out.roots[j].resize(grid.count);

    std::array<cplx, 3> prev{};
    for (int i = 0; i < grid.count; ++i) {
        out.alpha[i] = alpha.value(xs[i]);
        out.alpha_prime[i] = alpha.derivative(xs[i]);
        auto r = cubic_roots(k_squared(sys, xs[i]), kk_prime(sys, xs[i]), out.alpha[i]);

        const double scale = std::max(root_scale(r), 1e-300);
        if (min_gap(r) <= kCollisionTol * scale)
            throw BranchCollision("roots coincide (discriminant ~ 0) at x = " +
                                  std::to_string(xs[i]));

        if (i == 0) {
            prev = r;
        } else {
            // best one-to-one assignment to the previous point's branches
            std::array<int, 3> idx{0, 1, 2}, best{0, 1, 2};
            double best_cost = std::numeric_limits<double>::infinity();
            do {
                double cost = 0;
                for (int j = 0; j < 3; ++j) cost += std::abs(r[idx[j]] - prev[j]);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = idx;
                }
            } while (std::next_permutation(idx.begin(), idx.end()));

            std::array<cplx, 3> matched{r[best[0]], r[best[1]], r[best[2]]};

            // Tracking-coarseness guard. The strict movement < gap/2 rule is
            // unattainable across a discriminant zero (the crossing step has
            // movement >= sqrt(2) half-gaps for any spacing), so the gap bound
            // is buffered by a fraction of the overall root scale: only steps
            // that move roots a large fraction of the spectrum are ambiguous
            // beyond the colliding pair itself.
            const double allowed =
                std::max(0.5 * min_gap(prev), 0.25 * std::max(root_scale(prev), scale));
            for (int j = 0; j < 3; ++j) {
                if (std::abs(matched[j] - prev[j]) > allowed)
                    throw BranchCollision(
                        "grid too coarse for branch tracking near x = " + std::to_string(xs[i]) +
                        " (root moved " + std::to_string(std::abs(matched[j] - prev[j])) +
                        ", allowed " + std::to_string(allowed) + ")");
            }
            prev = matched;
        }
        for (int j = 0; j < 3; ++j) out.roots[j][i] = prev[j];
    }
    return out;
}

std::vector<cplx> s1_cubic_integrand(const CubicBranches& branches, int branch,
                                     const PhysicalSystem& sys) {
    if (branch < 0 || branch > 2) throw std::invalid_argument("s1_cubic: branch must be 0..2");
    const auto& xs = branches.grid;
    const auto& lam = branches.roots[branch];
    const size_t n = xs.size();
    if (n < 3) throw std::invalid_argument("s1_cubic: need >= 3 grid points");

    std::vector<cplx> rate(n);
    for (size_t i = 0; i < n; ++i) {
        // lambda' by centered differences on the tracked branch (one-sided,
        // second-order at the ends)
        cplx lamp;
        if (i == 0) {
            const double h = xs[1] - xs[0];
            lamp = (-3.0 * lam[0] + 4.0 * lam[1] - lam[2]) / (2.0 * h);
        } else if (i == n - 1) {
            const double h = xs[n - 1] - xs[n - 2];
            lamp = (3.0 * lam[n - 1] - 4.0 * lam[n - 2] + lam[n - 3]) / (2.0 * h);
        } else {
            lamp = (lam[i + 1] - lam[i - 1]) / (xs[i + 1] - xs[i - 1]);
        }

        const double k2 = k_squared(sys, xs[i]);
        const double kkp = kk_prime(sys, xs[i]);
        const double a = branches.alpha[i];
        const double ap = branches.alpha_prime[i];

        cplx num = 3.0 * lam[i] * lamp + 2.0 * (1.0 - a) * kkp;
        if (ap != 0.0) {
            if (a == 0.0) throw AlphaZero("alpha'(x)/alpha(x) undefined at x = " +
                                          std::to_string(xs[i]));
            num -= (ap / a) * (lam[i] * lam[i] + k2);
        }
        const cplx den = 3.0 * lam[i] * lam[i] + k2;
        const double term_scale = 3.0 * std::norm(lam[i]) + std::abs(k2);
        if (std::abs(den) <= 1e-8 * std::max(term_scale, 1e-300))
            throw DenominatorVanishes("3 lambda^2 + k^2 ~ 0 at x = " + std::to_string(xs[i]));
        rate[i] = -num / den;
    }
    return rate;
}

std::vector<cplx> s1_cubic(const CubicBranches& branches, int branch, const PhysicalSystem& sys) {
    return cumulative_trapezoid(s1_cubic_integrand(branches, branch, sys), branches.grid);
}

FarFieldReport far_field_check(const CubicBranches& branches, const PhysicalSystem& sys,
                               const AlphaFunction& alpha) {
    const auto& xs = branches.grid;
    const size_t n = xs.size();

    // branch nearest +ik on average
    std::vector<cplx> ik(n);
    for (size_t i = 0; i < n; ++i) ik[i] = cplx(0, 1) * wavenumber(sys, xs[i]);
    int jb = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 3; ++j) {
        double d = 0;
        for (size_t i = 0; i < n; ++i) d += std::abs(branches.roots[j][i] - ik[i]);
        if (d < best) {
            best = d;
            jb = j;
        }
    }

    FarFieldReport rep;
    rep.branch = jb;
    const auto rate = s1_cubic_integrand(branches, jb, sys);
    for (size_t i = 0; i < n; ++i) {
        const cplx k = wavenumber(sys, xs[i]);
        if (!(k.real() > 0)) continue;  // far field lives in the allowed region
        if (std::abs(branches.roots[jb][i] - ik[i]) >= 0.1 * std::abs(k)) continue;
        rep.subgrid.push_back(static_cast<int>(i));

        const double a = alpha.value(xs[i]);
        const double kkp = kk_prime(sys, xs[i]);
        const double k2 = k_squared(sys, xs[i]);
        const cplx closed = -(1.0 + 2.0 * a) * kkp / (2.0 * k2);

        // substitute lambda^2 = -k^2, lambda lambda' = -kk' into the rate:
        // the alpha' term drops (lambda^2 + k^2 = 0) and the rest must equal
        // the closed form identically
        const cplx reduced = -(3.0 * (-kkp) + 2.0 * (1.0 - a) * kkp) / (3.0 * (-k2) + k2);
        rep.max_reduction_defect = std::max(
            rep.max_reduction_defect, std::abs(reduced - closed) / std::max(1.0, std::abs(closed)));

        rep.ds1dx_measured.push_back(rate[i]);
        rep.ds1dx_closed.push_back(closed);
        rep.max_abs_measured = std::max(rep.max_abs_measured, std::abs(rate[i]));
        rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(rate[i] - closed));
    }
    if (rep.subgrid.empty())
        throw NoFarField("no grid point satisfies |lambda - ik| < 0.1 |k| on the +ik branch");
    return rep;
}

CubicBasis cubic_wkb_basis(const PhysicalSystem& sys, const Grid& grid, const AlphaFunction& alpha,
                           int order) {
    if (order != 0 && order != 1)
        throw std::invalid_argument("cubic_wkb_basis: order must be 0 or 1");

    CubicBasis out;
    out.grid = grid.points();
    out.order = order;
    out.branches = continue_branches(sys, grid, alpha);
    for (int j = 0; j < 3; ++j) {
        auto phase = cumulative_trapezoid(out.branches.roots[j], out.grid);
        if (order == 1) {
            const auto corr = s1_cubic(out.branches, j, sys);
            for (size_t i = 0; i < phase.size(); ++i) phase[i] += corr[i];
        }
        out.psi[j].resize(phase.size());
        for (size_t i = 0; i < phase.size(); ++i) out.psi[j][i] = std::exp(phase[i]);
    }
    return out;
}

CubicWkbSolution combine_basis(const CubicBasis& basis, const PhysicalSystem& sys, double anchor_x,
                               const StateVector& target) {
    const auto& xs = basis.grid;
    const double h = xs.size() > 1 ? xs[1] - xs[0] : 1.0;
    const int ia = static_cast<int>(std::lround((anchor_x - xs.front()) / h));
    if (ia < 0 || ia >= static_cast<int>(xs.size()) ||
        std::abs(xs[ia] - anchor_x) > 0.5 * h * (1 + 1e-9))
        throw std::invalid_argument("combine_basis: anchor must coincide with a grid point");

    // rows: value, derivative (psi_j' = lambda_j psi_j at order 0), constraint
    CMat A(3);
    for (int j = 0; j < 3; ++j) {
        const cplx p = basis.psi[j][ia];
        const cplx lam = basis.branches.roots[j][ia];
        A(0, j) = p;
        A(1, j) = lam * p;
        A(2, j) = lam * lam * p;
    }
    const double k2a = k_squared(sys, anchor_x);
    const std::array<cplx, 3> rhs{target.y0, target.y1, -k2a * target.y0};

    // closed-form inverse + infinity-norm condition estimate
    auto cof = [&](int i, int j) {
        const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
        const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
        return A(r0, c0) * A(r1, c1) - A(r0, c1) * A(r1, c0);
    };
    const cplx det = A(0, 0) * cof(0, 0) + A(0, 1) * cof(0, 1) + A(0, 2) * cof(0, 2);
    if (std::abs(det) == 0.0) throw SingularCombination("anchor matrix is singular");
    CMat inv(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) inv(i, j) = cof(j, i) / det;
    const double cond = A.norm_inf() * inv.norm_inf();
    if (cond > 1e12)
        throw SingularCombination("anchor matrix condition estimate " + std::to_string(cond));

    CubicWkbSolution out;
    out.grid = xs;
    out.order = basis.order;
    for (int i = 0; i < 3; ++i) {
        cplx s = 0;
        for (int j = 0; j < 3; ++j) s += inv(i, j) * rhs[j];
        out.coefficients[i] = s;
    }
    out.values.resize(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        cplx s = 0;
        for (int j = 0; j < 3; ++j) s += out.coefficients[j] * basis.psi[j][i];
        out.values[i] = s;
    }
    return out;
}

}  // namespace adiwkb
