#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "adiwkb/types.hpp"

namespace adiwkb {

// A first-order linear system dy/dx = M(x) y with an N x N matrix function,
// N in {2, 3}. eval must return finite entries on the domain of interest
// (including a half step beyond grid ends, for derivative couplings).
struct MatrixFunction {
    int dim = 0;
    std::function<CMat(double)> eval;
};

// Instantaneous eigensystem of M(x): eigenvalues lambda_n, right vectors |n>
// scaled so the first non-negligible component equals 1, and dual (left)
// vectors <n| with the bilinear pairing <m|n> = delta_mn.
struct EigenSystem {
    double x = 0;
    int dim = 0;
    std::array<cplx, 3> eigenvalues{};
    std::array<CVec, 3> right{};
    std::array<CVec, 3> left{};
};

// Derivative couplings tau_{n,l}(x) = <n(x)| d/dx |l(x)>.
struct CouplingMatrix {
    double x = 0;
    int dim = 0;
    CMat entries;
};

// Eigenvalues/vectors of m at x via closed-form characteristic polynomials.
// With prev given, branches are assigned by the one-to-one matching that
// minimizes total eigenvalue movement from prev; otherwise they are sorted by
// descending real part, then descending imaginary part.
//
// Throws DegenerateSpectrum when the smallest eigenvalue gap is below
// 1e-8 * max|lambda| (adiabatic breakdown / level crossing), and
// UnsupportedDimension for dim > 3.
EigenSystem eigensystem_at(const MatrixFunction& m, double x, const EigenSystem* prev = nullptr);

// Central-difference couplings, second-order accurate in step:
//   tau_{n,l} = <n(x)| (|l(x+step)> - |l(x-step)>) / (2 step)
// with the neighbor eigensystems branch-matched against eig.
CouplingMatrix coupling(const MatrixFunction& m, const EigenSystem& eig, double step);

// Expansion terms, lower integration limit fixed at xs[0] (so all terms
// vanish there). s0 returns S0 with S0/epsilon = trapezoidal int lambda1 ds;
// s1 returns -int tau_bb ds (trapezoidal); s2 returns the second-order term
//   -(1/eps) int sum_{m != b} tau_bm tau_mb / (lambda_m - lambda_b) ds.
std::vector<cplx> s0(std::span<const cplx> lambda1, std::span<const double> xs, double epsilon);
std::vector<cplx> s1(std::span<const cplx> tau11, std::span<const double> xs);
std::vector<cplx> s2(std::span<const CouplingMatrix> couplings, std::span<const EigenSystem> eigs,
                     std::span<const double> xs, double epsilon, int branch = 0);

// First-order off-branch coefficient f1(ell) = (1/eps) tau_{ell,b} / (lambda_ell - lambda_b),
// in original-x units. ell must differ from branch.
cplx f1(const CouplingMatrix& tau, const EigenSystem& eig, int ell, double epsilon, int branch = 0);

// Grid-sampled expansion through second order for one dominant branch.
// Couplings are Richardson-extrapolated central differences (step = local
// spacing and half of it) and S1 uses the 4th-order cumulative rule; S0 stays
// trapezoidal so its phase matches a trapezoidal phase integral exactly.
struct AdiabaticExpansion {
    std::vector<double> grid;
    double epsilon = 1.0;
    int branch = 0;
    int order = 0;
    std::vector<EigenSystem> eigensystems;        // branch-continuous along the grid
    std::vector<cplx> S0, S1, S2;                 // per grid point
    std::vector<std::array<cplx, 3>> f1_terms;    // per point, entry ell (0 on the branch)
    std::vector<std::array<cplx, 3>> coeff;       // assembled c_n per point
};

AdiabaticExpansion adiabatic_expansion(const MatrixFunction& m, std::span<const double> xs,
                                       double epsilon, int branch, int order);

// y(x_i) = sum_n c_n(x_i) |n(x_i)> with
//   c_b = exp(S0/eps + [order>=1] S1 + [order>=2] eps S2),
//   c_ell = [order>=2] eps f1(ell) c_b.
std::vector<CVec> assemble_wavefunction(const MatrixFunction& m, std::span<const double> xs,
                                        double epsilon, int branch, int order);

}  // namespace adiwkb
