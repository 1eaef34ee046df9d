#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "adiwkb/adiabatic.hpp"
#include "adiwkb/numerics.hpp"
#include "adiwkb/types.hpp"

namespace adiwkb {

// One-dimensional potential V(x). Built-in shapes carry analytic derivatives;
// tabulated data is interpolated by a natural cubic spline so V and V' stay
// mutually consistent.
class Potential {
public:
    Potential() : impl_(Constant{0.0}) {}

    static Potential constant(double c) { return Potential(Constant{c}); }
    static Potential linear(double a, double b) { return Potential(Linear{a, b}); }
    // V = 1/2 m omega^2 x^2; the stiffness is fixed at construction
    static Potential harmonic(double omega, double mass) {
        return Potential(Harmonic{mass * omega * omega});
    }
    static Potential quartic(double g) { return Potential(Quartic{g}); }
    static Potential tabulated(std::vector<double> xs, std::vector<double> values) {
        return Potential(CubicSpline(std::move(xs), std::move(values)));
    }

    double value(double x) const;
    double derivative(double x) const;

private:
    struct Constant {
        double c;
    };
    struct Linear {
        double a, b;  // a + b x
    };
    struct Harmonic {
        double m_omega2;  // m omega^2
    };
    struct Quartic {
        double g;  // g x^4
    };
    using Impl = std::variant<Constant, Linear, Harmonic, Quartic, CubicSpline>;

    explicit Potential(Impl impl) : impl_(std::move(impl)) {}
    Impl impl_;
};

// Particle of mass m and energy E under V(x), with explicit hbar.
struct PhysicalSystem {
    double mass = 1.0;
    double hbar = 1.0;
    double energy = 0.0;
    Potential potential;
};

// k^2(x) = (2m/hbar^2)(E - V(x)); real, negative under a barrier.
double k_squared(const PhysicalSystem& sys, double x);

// Local wavenumber. E >= V: nonnegative real sqrt(2m(E-V))/hbar;
// E < V: i sqrt(2m(V-E))/hbar (principal branch, positive imaginary part,
// chosen so exp(i int k) decays rightward under a barrier).
cplx wavenumber(const PhysicalSystem& sys, double x);

// (1/2) d(k^2)/dx = -(m/hbar^2) V'(x): equals k k' where both factors exist
// and stays finite at turning points where k' alone diverges.
double kk_prime(const PhysicalSystem& sys, double x);

// 2x2 reduction of psi'' = -k^2 psi: rows [[0, 1], [-k^2, 0]].
MatrixFunction matrix2(const PhysicalSystem& sys);

// The free gauge parameter of the 3x3 reduction, possibly x-dependent.
struct AlphaFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    static AlphaFunction constant(double a) {
        return AlphaFunction{[a](double) { return a; }, [](double) { return 0.0; }};
    }
};

// 3x3 reduction rows [[0, 1, 0], [(alpha-1)k^2, 0, alpha], [-2kk', -k^2, 0]].
// Throws AlphaZero on evaluation wherever alpha(x) == 0.
MatrixFunction matrix3(const PhysicalSystem& sys, const AlphaFunction& alpha);

// (psi, psi', psi'') samples.
struct StateVector {
    cplx y0, y1, y2;
};

enum class IntegrateFrom { Start, End };

// High-accuracy oracle: adaptive Dormand-Prince integration of
// (y0', y1') = (y1, -k^2 y0), sampled on the grid; y2 is filled as -k^2 y0
// (the Schroedinger constraint is enforced, including on the given init).
// With IntegrateFrom::End the init is taken at x_end and integration runs
// right to left (stable direction for decaying solutions).
std::vector<StateVector> exact_solve(const PhysicalSystem& sys, const Grid& grid,
                                     const StateVector& init, double rel_tol = 1e-10,
                                     IntegrateFrom from = IntegrateFrom::Start);

// Oracle-grade integration of the full 3x3 system (all three components
// evolve; no constraint is imposed).
std::vector<StateVector> solve_cubic_system(const PhysicalSystem& sys, const AlphaFunction& alpha,
                                            const Grid& grid, const StateVector& init,
                                            double rel_tol = 1e-10,
                                            IntegrateFrom from = IntegrateFrom::Start);

// y2 + k^2(x) y0: zero exactly when the 3-vector is a genuine Schroedinger state.
cplx constraint_residual(const StateVector& s, const PhysicalSystem& sys, double x);

// max_i |Q(x_i) - Q(x_0)| with Q = (y2 + k^2 y0) / alpha(x), the conserved
// quantity of the 3x3 system.
double conserved_quantity_check(std::span<const StateVector> trajectory, const PhysicalSystem& sys,
                                const AlphaFunction& alpha, std::span<const double> xs);

}  // namespace adiwkb
