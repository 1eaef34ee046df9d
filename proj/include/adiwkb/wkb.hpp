#pragma once

#include <span>
#include <vector>

#include "adiwkb/schrodinger.hpp"
#include "adiwkb/types.hpp"

namespace adiwkb {

// Single-branch WKB wave function
//   psi(x) = k(x)^{-1/2} exp(s i int_{x_ref}^x k ds),  s = branch_sign,
// normalized so psi(x_ref) = k(x_ref)^{-1/2}. Points with |k| < k_floor are
// flagged singular and carry a non-finite marker, never a clamped value.
struct WkbSolution {
    Grid grid;
    int branch_sign = +1;
    double x_ref = 0;
    double k_floor = 0;
    std::vector<cplx> values;
    std::vector<bool> singular_mask;
};

// All roots of E - V(x) in [x_lo, x_hi]: sign-change scan over 1000
// subintervals, then bisection to 1e-12 absolute.
std::vector<double> turning_points(const PhysicalSystem& sys, double x_lo, double x_hi);

// Closed-form evaluation with a trapezoidal phase integral on the grid.
// Throws AllSingular when every point lies below k_floor (k identically 0).
WkbSolution wkb_wavefunction(const PhysicalSystem& sys, const Grid& grid, int branch_sign,
                             double x_ref);

// The same wave function reconstructed through the adiabatic engine: first
// component of assemble_wavefunction(matrix2, order 1) on the branch with
// lambda = branch_sign * i k, rescaled to psi(x_ref) = k(x_ref)^{-1/2}.
// x_ref must coincide with a grid point. Throws DegenerateSpectrum if the
// grid interval contains a turning point.
WkbSolution wkb_via_adiabatic(const PhysicalSystem& sys, const Grid& grid, int branch_sign,
                              double x_ref);

// Two-branch comparison against an oracle trajectory on the same grid. The
// coefficients (c+, c-) are fitted at x_ref from the oracle's value and
// derivative; errors are taken over points farther than exclusion_radius from
// every turning point (and not singular), relative to max |psi_oracle|.
struct WkbErrorReport {
    double linf_rel = 0;
    double l2_rel = 0;
    double excluded_max_abs = 0;         // largest finite |psi_wkb| in the excluded zone
    bool excluded_has_singular = false;  // zone contains masked (divergent) samples
    int points_used = 0;
    cplx c_plus, c_minus;
    std::vector<double> turning_pts;
};

WkbErrorReport wkb_error_report(const PhysicalSystem& sys, const Grid& grid,
                                std::span<const StateVector> oracle, double exclusion_radius,
                                double x_ref);

}  // namespace adiwkb
