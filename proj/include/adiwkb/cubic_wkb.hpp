#pragma once

#include <array>
#include <vector>

#include "adiwkb/schrodinger.hpp"
#include "adiwkb/types.hpp"

namespace adiwkb {

// The three roots of lambda^3 + k2 lambda + 2 alpha kkp = 0, by Cardano with
// a real-coefficient fast path, in canonical order (descending real part,
// then descending imaginary part). k2 and kkp are passed separately so the
// coefficients stay finite at turning points where k' alone diverges.
std::array<cplx, 3> cubic_roots(double k2, double kkp, double alpha);

// Continuity-tracked root branches of the cubic along a grid, with sampled
// alpha and alpha'.
struct CubicBranches {
    std::vector<double> grid;
    std::vector<double> alpha, alpha_prime;
    std::array<std::vector<cplx>, 3> roots;
};

// Per step, branches are matched by the permutation minimizing total root
// movement. Throws BranchCollision when two roots coincide within
// 1e-8 * scale at a grid point, or when a step moves a root farther than both
// half the local inter-root gap and a quarter of the root scale (grid too
// coarse for unambiguous tracking).
CubicBranches continue_branches(const PhysicalSystem& sys, const Grid& grid,
                                const AlphaFunction& alpha);

// Integrand of the first-order term dS1/dx on one tracked branch:
//   -[3 lambda lambda' + 2(1-alpha) kk' - (alpha'/alpha)(lambda^2 + k^2)]
//    / (3 lambda^2 + k^2)
// with lambda' by centered differences on the branch samples. Throws
// DenominatorVanishes where |3 lambda^2 + k^2| falls below 1e-8 of its term
// scale (cubic discriminant zero).
std::vector<cplx> s1_cubic_integrand(const CubicBranches& branches, int branch,
                                     const PhysicalSystem& sys);

// S1(x_i) = trapezoidal integral of the rate above from the first grid point.
std::vector<cplx> s1_cubic(const CubicBranches& branches, int branch, const PhysicalSystem& sys);

// Far-field verification of the alpha gauge: on the subgrid where the branch
// closest to +ik satisfies |lambda - ik| < 0.1 |k|, compares the measured
// dS1/dx with the closed form -(1+2 alpha) k'/(2k), and checks per point that
// substituting lambda^2 = -k^2, lambda lambda' = -kk' into the rate formula
// reproduces the closed form algebraically.
struct FarFieldReport {
    int branch = 0;
    std::vector<int> subgrid;  // grid indices in the far-field region
    std::vector<cplx> ds1dx_measured, ds1dx_closed;
    double max_abs_measured = 0;
    double max_abs_diff = 0;
    double max_reduction_defect = 0;  // worst pointwise defect of the substitution identity
};

FarFieldReport far_field_check(const CubicBranches& branches, const PhysicalSystem& sys,
                               const AlphaFunction& alpha);

// Basis functions psi_j(x) = exp(int_{x0}^x lambda_j ds), times exp(S1_j) at
// order 1. Finite on the whole grid, turning points included.
struct CubicBasis {
    std::vector<double> grid;
    int order = 0;
    CubicBranches branches;
    std::array<std::vector<cplx>, 3> psi;
};

CubicBasis cubic_wkb_basis(const PhysicalSystem& sys, const Grid& grid, const AlphaFunction& alpha,
                           int order);

// Linear combination of the three basis functions fixed at an anchor point:
//   sum c_j psi_j(x_a) = target.y0
//   sum c_j lambda_j psi_j(x_a) = target.y1
//   sum c_j lambda_j^2 psi_j(x_a) = -k^2(x_a) target.y0   (Schroedinger constraint row)
// The anchor must coincide with a grid point. Throws SingularCombination when
// the 3x3 system's condition estimate exceeds 1e12.
struct CubicWkbSolution {
    std::vector<double> grid;
    int order = 0;
    std::array<cplx, 3> coefficients{};
    std::vector<cplx> values;
};

CubicWkbSolution combine_basis(const CubicBasis& basis, const PhysicalSystem& sys, double anchor_x,
                               const StateVector& target);

}  // namespace adiwkb
