#include "adiwkb/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adiwkb/errors.hpp"

namespace adiwkb {

double Potential::value(double x) const {
    return std::visit(
        [x](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Constant>) return p.c;
            else if constexpr (std::is_same_v<T, Linear>) return p.a + p.b * x;
            else if constexpr (std::is_same_v<T, Harmonic>) return 0.5 * p.m_omega2 * x * x;
            else if constexpr (std::is_same_v<T, Quartic>) return p.g * x * x * x * x;
            else return p.value(x);
        },
        impl_);
}

double Potential::derivative(double x) const {
    return std::visit(
        [x](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Constant>) return 0.0;
            else if constexpr (std::is_same_v<T, Linear>) return p.b;
            else if constexpr (std::is_same_v<T, Harmonic>) return p.m_omega2 * x;
            else if constexpr (std::is_same_v<T, Quartic>) return 4.0 * p.g * x * x * x;
            else return p.derivative(x);
        },
        impl_);
}

double k_squared(const PhysicalSystem& sys, double x) {
    return 2.0 * sys.mass / (sys.hbar * sys.hbar) * (sys.energy - sys.potential.value(x));
}

cplx wavenumber(const PhysicalSystem& sys, double x) {
    const double k2 = k_squared(sys, x);
    if (k2 >= 0) return cplx(std::sqrt(k2), 0);
    return cplx(0, std::sqrt(-k2));
}

double kk_prime(const PhysicalSystem& sys, double x) {
    return -sys.mass / (sys.hbar * sys.hbar) * sys.potential.derivative(x);
}

MatrixFunction matrix2(const PhysicalSystem& sys) {
    MatrixFunction m;
    m.dim = 2;
    m.eval = [sys](double x) {
        CMat out(2);
        out(0, 1) = 1;
        out(1, 0) = -k_squared(sys, x);
        return out;
    };
    return m;
}

MatrixFunction matrix3(const PhysicalSystem& sys, const AlphaFunction& alpha) {
    MatrixFunction m;
    m.dim = 3;
    m.eval = [sys, value = alpha.value](double x) {
        const double a = value(x);
        if (a == 0.0) throw AlphaZero("alpha(x) = 0 at x = " + std::to_string(x));
        const double k2 = k_squared(sys, x);
        CMat out(3);
        out(0, 1) = 1;
        out(1, 0) = (a - 1.0) * k2;
        out(1, 2) = a;
        out(2, 0) = -2.0 * kk_prime(sys, x);
        out(2, 1) = -k2;
        return out;
    };
    return m;
}

namespace {

std::vector<double> maybe_reversed(const Grid& grid, IntegrateFrom from) {
    auto xs = grid.points();
    if (from == IntegrateFrom::End) std::reverse(xs.begin(), xs.end());
    return xs;
}

}  // namespace

std::vector<StateVector> exact_solve(const PhysicalSystem& sys, const Grid& grid,
                                     const StateVector& init, double rel_tol, IntegrateFrom from) {
    const auto xs = maybe_reversed(grid, from);
    OdeRhs<2> rhs = [&sys](double x, const std::array<cplx, 2>& y) {
        return std::array<cplx, 2>{y[1], -k_squared(sys, x) * y[0]};
    };
    auto raw = integrate_on_grid<2>(rhs, xs, {init.y0, init.y1}, rel_tol, 1e-14);

    const auto pts = grid.points();
    std::vector<StateVector> out(grid.count);
    for (int i = 0; i < grid.count; ++i) {
        const int src = (from == IntegrateFrom::End) ? grid.count - 1 - i : i;
        out[i] = StateVector{raw[src][0], raw[src][1], -k_squared(sys, pts[i]) * raw[src][0]};
    }
    return out;
}

std::vector<StateVector> solve_cubic_system(const PhysicalSystem& sys, const AlphaFunction& alpha,
                                            const Grid& grid, const StateVector& init,
                                            double rel_tol, IntegrateFrom from) {
    const auto xs = maybe_reversed(grid, from);
    const auto value = alpha.value;
    OdeRhs<3> rhs = [&sys, &value](double x, const std::array<cplx, 3>& y) {
        const double a = value(x);
        if (a == 0.0) throw AlphaZero("alpha(x) = 0 at x = " + std::to_string(x));
        const double k2 = k_squared(sys, x);
        return std::array<cplx, 3>{y[1], (a - 1.0) * k2 * y[0] + a * y[2],
                                   -2.0 * kk_prime(sys, x) * y[0] - k2 * y[1]};
    };
    auto raw = integrate_on_grid<3>(rhs, xs, {init.y0, init.y1, init.y2}, rel_tol, 1e-14);

    std::vector<StateVector> out(grid.count);
    for (int i = 0; i < grid.count; ++i) {
        const int src = (from == IntegrateFrom::End) ? grid.count - 1 - i : i;
        out[i] = StateVector{raw[src][0], raw[src][1], raw[src][2]};
    }
    return out;
}

cplx constraint_residual(const StateVector& s, const PhysicalSystem& sys, double x) {
    return s.y2 + k_squared(sys, x) * s.y0;
}

double conserved_quantity_check(std::span<const StateVector> trajectory, const PhysicalSystem& sys,
                                const AlphaFunction& alpha, std::span<const double> xs) {
    if (trajectory.size() != xs.size())
        throw std::invalid_argument("conserved_quantity_check: size mismatch");
    if (trajectory.empty()) return 0.0;

    auto q_at = [&](size_t i) {
        const double a = alpha.value(xs[i]);
        if (a == 0.0) throw AlphaZero("alpha(x) = 0 at x = " + std::to_string(xs[i]));
        return constraint_residual(trajectory[i], sys, xs[i]) / a;
    };
    const cplx q0 = q_at(0);
    double worst = 0;
    for (size_t i = 1; i < trajectory.size(); ++i) worst = std::max(worst, std::abs(q_at(i) - q0));
    return worst;
}

}  // namespace adiwkb
