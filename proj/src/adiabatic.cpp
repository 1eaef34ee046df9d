#include "adiwkb/adiabatic.hpp"

#include <algorithm>
#include <cmath>

#include "adiwkb/errors.hpp"
#include "adiwkb/numerics.hpp"

namespace adiwkb {

namespace {

constexpr double kDegeneracyTol = 1e-8;

// characteristic polynomial of M (monic): lambda^dim + a2 lambda^... built
// from trace, principal minors and determinant
std::array<cplx, 3> eigenvalues_of(const CMat& m) {
    if (m.dim() == 2) {
        const cplx tr = m(0, 0) + m(1, 1);
        const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        auto r = solve_quadratic(-tr, det);
        return {r[0], r[1], cplx(0)};
    }
    const cplx tr = m(0, 0) + m(1, 1) + m(2, 2);
    const cplx minors = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) +
                        (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
                        (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
    const cplx det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                     m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                     m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    return solve_cubic(-tr, minors, -det);
}

bool canonical_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

// null vector of (M - lambda I), assuming lambda is a simple eigenvalue
CVec right_vector(const CMat& m, cplx lambda) {
    const int n = m.dim();
    if (n == 2) {
        const CVec v1{m(0, 1), lambda - m(0, 0)};
        const CVec v2{lambda - m(1, 1), m(1, 0)};
        return v1.norm() >= v2.norm() ? v1 : v2;
    }
    // rows of A = M - lambda I; the bilinear cross product of two independent
    // rows is annihilated by all three
    std::array<CVec, 3> rows;
    for (int i = 0; i < 3; ++i) {
        rows[i] = CVec(3);
        for (int j = 0; j < 3; ++j) rows[i][j] = m(i, j) - (i == j ? lambda : cplx(0));
    }
    auto cross = [](const CVec& a, const CVec& b) {
        return CVec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                    a[0] * b[1] - a[1] * b[0]};
    };
    CVec best = cross(rows[0], rows[1]);
    for (auto [i, j] : {std::pair{0, 2}, std::pair{1, 2}}) {
        CVec c = cross(rows[i], rows[j]);
        if (c.norm() > best.norm()) best = c;
    }
    return best;
}

// gauge: first component with non-negligible magnitude scaled to 1
void normalize_first_component(CVec& v) {
    double vmax = 0;
    for (int i = 0; i < v.dim(); ++i) vmax = std::max(vmax, std::abs(v[i]));
    for (int i = 0; i < v.dim(); ++i) {
        if (std::abs(v[i]) > 1e-12 * vmax) {
            const cplx s = v[i];
            for (int j = 0; j < v.dim(); ++j) v[j] /= s;
            return;
        }
    }
}

// left vectors = rows of the inverse of the right-vector matrix, which makes
// <m|n> = delta_mn hold to rounding
std::array<CVec, 3> left_vectors(int n, const std::array<CVec, 3>& right, double x) {
    CMat v(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) v(i, j) = right[j][i];

    std::array<CVec, 3> left;
    if (n == 2) {
        const cplx det = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
        if (std::abs(det) == 0)
            throw DegenerateSpectrum("eigenvectors parallel at x = " + std::to_string(x));
        left[0] = CVec{v(1, 1) / det, -v(0, 1) / det};
        left[1] = CVec{-v(1, 0) / det, v(0, 0) / det};
        return left;
    }
    std::array<cplx, 9> adj;
    auto cof = [&](int i, int j) {
        const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
        const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
        return v(r0, c0) * v(r1, c1) - v(r0, c1) * v(r1, c0);
    };
    const cplx det = v(0, 0) * cof(0, 0) + v(0, 1) * cof(0, 1) + v(0, 2) * cof(0, 2);
    if (std::abs(det) == 0)
        throw DegenerateSpectrum("eigenvectors parallel at x = " + std::to_string(x));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) adj[i * 3 + j] = cof(j, i);
    for (int i = 0; i < 3; ++i) {
        left[i] = CVec(3);
        for (int j = 0; j < 3; ++j) left[i][j] = adj[i * 3 + j] / det;
    }
    return left;
}

void check_branch_index(int n, int branch) {
    if (branch < 0 || branch >= n) throw std::invalid_argument("branch index out of range");
}

}  // namespace

EigenSystem eigensystem_at(const MatrixFunction& m, double x, const EigenSystem* prev) {
    if (m.dim > 3)
        throw UnsupportedDimension("closed-form eigensolver covers N <= 3, got N = " +
                                   std::to_string(m.dim));
    if (m.dim < 2) throw std::invalid_argument("eigensystem_at: dim must be 2 or 3");

    const CMat mat = m.eval(x);
    auto lam = eigenvalues_of(mat);
    const int n = m.dim;

    double lam_max = 0;
    for (int i = 0; i < n; ++i) lam_max = std::max(lam_max, std::abs(lam[i]));
    double gap_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) gap_min = std::min(gap_min, std::abs(lam[i] - lam[j]));
    if (gap_min <= kDegeneracyTol * lam_max || lam_max == 0)
        throw DegenerateSpectrum("eigenvalue gap " + std::to_string(gap_min) + " at x = " +
                                 std::to_string(x));

    // branch assignment
    std::array<int, 3> order{0, 1, 2};
    if (prev) {
        std::array<int, 3> perm{0, 1, 2};
        double best = std::numeric_limits<double>::infinity();
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.begin() + n);
        do {
            double cost = 0;
            for (int b = 0; b < n; ++b) cost += std::abs(lam[idx[b]] - prev->eigenvalues[b]);
            if (cost < best) {
                best = cost;
                perm = idx;
            }
        } while (std::next_permutation(idx.begin(), idx.begin() + n));
        order = perm;
    } else {
        std::sort(order.begin(), order.begin() + n,
                  [&](int a, int b) { return canonical_less(lam[a], lam[b]); });
    }

    EigenSystem out;
    out.x = x;
    out.dim = n;
    for (int b = 0; b < n; ++b) {
        out.eigenvalues[b] = lam[order[b]];
        CVec v = right_vector(mat, lam[order[b]]);
        normalize_first_component(v);
        out.right[b] = v;
    }
    out.left = left_vectors(n, out.right, x);
    return out;
}

CouplingMatrix coupling(const MatrixFunction& m, const EigenSystem& eig, double step) {
    if (!(step > 0)) throw std::invalid_argument("coupling: step must be positive");
    const EigenSystem plus = eigensystem_at(m, eig.x + step, &eig);
    const EigenSystem minus = eigensystem_at(m, eig.x - step, &eig);

    CouplingMatrix tau;
    tau.x = eig.x;
    tau.dim = eig.dim;
    tau.entries = CMat(eig.dim);
    const double inv = 1.0 / (2.0 * step);
    for (int n = 0; n < eig.dim; ++n)
        for (int l = 0; l < eig.dim; ++l)
            tau.entries(n, l) = inv * dot(eig.left[n], plus.right[l] - minus.right[l]);
    return tau;
}

std::vector<cplx> s0(std::span<const cplx> lambda1, std::span<const double> xs, double epsilon) {
    if (lambda1.size() != xs.size()) throw std::invalid_argument("s0: size mismatch");
    auto integral = cumulative_trapezoid(lambda1, xs);
    for (auto& v : integral) v *= epsilon;
    return integral;
}

std::vector<cplx> s1(std::span<const cplx> tau11, std::span<const double> xs) {
    if (tau11.size() != xs.size()) throw std::invalid_argument("s1: size mismatch");
    auto integral = cumulative_trapezoid(tau11, xs);
    for (auto& v : integral) v = -v;
    return integral;
}

std::vector<cplx> s2(std::span<const CouplingMatrix> couplings, std::span<const EigenSystem> eigs,
                     std::span<const double> xs, double epsilon, int branch) {
    if (couplings.size() != xs.size() || eigs.size() != xs.size())
        throw std::invalid_argument("s2: size mismatch");
    if (xs.empty()) return {};
    check_branch_index(eigs[0].dim, branch);

    std::vector<cplx> integrand(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        const auto& e = eigs[i];
        double lam_max = 0;
        for (int j = 0; j < e.dim; ++j) lam_max = std::max(lam_max, std::abs(e.eigenvalues[j]));
        cplx sum = 0;
        for (int mth = 0; mth < e.dim; ++mth) {
            if (mth == branch) continue;
            const cplx dl = e.eigenvalues[mth] - e.eigenvalues[branch];
            if (std::abs(dl) <= kDegeneracyTol * lam_max)
                throw DegenerateSpectrum("lambda_m = lambda_b at x = " + std::to_string(xs[i]));
            sum += couplings[i].entries(branch, mth) * couplings[i].entries(mth, branch) / dl;
        }
        integrand[i] = sum;
    }
    auto integral = cumulative_trapezoid(integrand, xs);
    for (auto& v : integral) v *= -1.0 / epsilon;
    return integral;
}

cplx f1(const CouplingMatrix& tau, const EigenSystem& eig, int ell, double epsilon, int branch) {
    check_branch_index(eig.dim, branch);
    check_branch_index(eig.dim, ell);
    if (ell == branch) throw std::invalid_argument("f1: ell must differ from the dominant branch");

    double lam_max = 0;
    for (int j = 0; j < eig.dim; ++j) lam_max = std::max(lam_max, std::abs(eig.eigenvalues[j]));
    const cplx dl = eig.eigenvalues[ell] - eig.eigenvalues[branch];
    if (std::abs(dl) <= kDegeneracyTol * lam_max)
        throw DegenerateSpectrum("lambda_ell = lambda_b at x = " + std::to_string(eig.x));
    return tau.entries(ell, branch) / (dl * epsilon);
}

AdiabaticExpansion adiabatic_expansion(const MatrixFunction& m, std::span<const double> xs,
                                       double epsilon, int branch, int order) {
    if (xs.size() < 2) throw std::invalid_argument("adiabatic_expansion: need >= 2 grid points");
    if (!(epsilon > 0)) throw std::invalid_argument("adiabatic_expansion: epsilon must be > 0");
    if (order < 0 || order > 2) throw std::invalid_argument("adiabatic_expansion: order in {0,1,2}");

    const size_t n = xs.size();
    AdiabaticExpansion ex;
    ex.grid.assign(xs.begin(), xs.end());
    ex.epsilon = epsilon;
    ex.branch = branch;
    ex.order = order;

    ex.eigensystems.reserve(n);
    ex.eigensystems.push_back(eigensystem_at(m, xs[0]));
    check_branch_index(ex.eigensystems[0].dim, branch);
    for (size_t i = 1; i < n; ++i)
        ex.eigensystems.push_back(eigensystem_at(m, xs[i], &ex.eigensystems[i - 1]));

    // Richardson-extrapolated couplings: two second-order stencils at the
    // local spacing and half of it combine to fourth order, which the
    // S1-based amplitude needs (the plain stencil saturates near 1e-7).
    std::vector<CouplingMatrix> taus(n);
    for (size_t i = 0; i < n; ++i) {
        double h = (i == 0)       ? xs[1] - xs[0]
                   : (i == n - 1) ? xs[n - 1] - xs[n - 2]
                                  : std::min(xs[i] - xs[i - 1], xs[i + 1] - xs[i]);
        const CouplingMatrix full = coupling(m, ex.eigensystems[i], h);
        const CouplingMatrix half = coupling(m, ex.eigensystems[i], 0.5 * h);
        CouplingMatrix t;
        t.x = xs[i];
        t.dim = full.dim;
        t.entries = CMat(full.dim);
        for (int a = 0; a < full.dim; ++a)
            for (int b = 0; b < full.dim; ++b)
                t.entries(a, b) = (4.0 * half.entries(a, b) - full.entries(a, b)) / 3.0;
        taus[i] = t;
    }

    std::vector<cplx> lam_b(n), tau_bb(n);
    for (size_t i = 0; i < n; ++i) {
        lam_b[i] = ex.eigensystems[i].eigenvalues[branch];
        tau_bb[i] = taus[i].entries(branch, branch);
    }

    ex.S0 = s0(lam_b, xs, epsilon);
    ex.S1 = cumulative_quartic(tau_bb, xs);
    for (auto& v : ex.S1) v = -v;
    ex.S2 = s2(taus, ex.eigensystems, xs, epsilon, branch);

    ex.f1_terms.assign(n, {});
    const int dim = ex.eigensystems[0].dim;
    for (size_t i = 0; i < n; ++i)
        for (int ell = 0; ell < dim; ++ell)
            ex.f1_terms[i][ell] =
                (ell == branch) ? cplx(0) : f1(taus[i], ex.eigensystems[i], ell, epsilon, branch);

    ex.coeff.assign(n, {});
    for (size_t i = 0; i < n; ++i) {
        cplx exponent = ex.S0[i] / epsilon;
        if (order >= 1) exponent += ex.S1[i];
        if (order >= 2) exponent += epsilon * ex.S2[i];
        const cplx c1 = std::exp(exponent);
        ex.coeff[i][branch] = c1;
        if (order >= 2)
            for (int ell = 0; ell < dim; ++ell)
                if (ell != branch) ex.coeff[i][ell] = epsilon * ex.f1_terms[i][ell] * c1;
    }
    return ex;
}

std::vector<CVec> assemble_wavefunction(const MatrixFunction& m, std::span<const double> xs,
                                        double epsilon, int branch, int order) {
    const AdiabaticExpansion ex = adiabatic_expansion(m, xs, epsilon, branch, order);
    const int dim = ex.eigensystems[0].dim;
    std::vector<CVec> y(xs.size(), CVec(dim));
    for (size_t i = 0; i < xs.size(); ++i) {
        CVec acc(dim);
        for (int nn = 0; nn < dim; ++nn) {
            if (ex.coeff[i][nn] == cplx(0)) continue;
            for (int c = 0; c < dim; ++c) acc[c] += ex.coeff[i][nn] * ex.eigensystems[i].right[nn][c];
        }
        y[i] = acc;
    }
    return y;
}

}  // namespace adiwkb
