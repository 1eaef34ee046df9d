#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

namespace adiwkb {

using cplx = std::complex<double>;

// Small dense complex vector, dimension 2 or 3. Value semantics throughout;
// dimensions above 3 are rejected at construction.
class CVec {
public:
    CVec() = default;
    explicit CVec(int dim) : dim_(dim) {
        if (dim < 1 || dim > 3) throw std::invalid_argument("CVec: dim must be 1..3");
    }
    CVec(std::initializer_list<cplx> xs) : dim_(static_cast<int>(xs.size())) {
        if (dim_ < 1 || dim_ > 3) throw std::invalid_argument("CVec: dim must be 1..3");
        int i = 0;
        for (cplx x : xs) v_[i++] = x;
    }

    int dim() const { return dim_; }
    cplx& operator[](int i) { return v_[i]; }
    const cplx& operator[](int i) const { return v_[i]; }

    double norm() const {
        double s = 0;
        for (int i = 0; i < dim_; ++i) s += std::norm(v_[i]);
        return std::sqrt(s);
    }

private:
    int dim_ = 0;
    std::array<cplx, 3> v_{};
};

// Bilinear pairing <l|r> = sum_i l_i r_i (no conjugation): the dual-vector
// pairing for non-symmetric matrices, where <m|n> = delta_mn.
inline cplx dot(const CVec& l, const CVec& r) {
    cplx s = 0;
    for (int i = 0; i < l.dim(); ++i) s += l[i] * r[i];
    return s;
}

inline CVec operator-(const CVec& a, const CVec& b) {
    CVec out(a.dim());
    for (int i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline CVec operator*(cplx s, const CVec& a) {
    CVec out(a.dim());
    for (int i = 0; i < a.dim(); ++i) out[i] = s * a[i];
    return out;
}

// Small dense complex matrix, N x N with N in {2,3}, row-major.
class CMat {
public:
    CMat() = default;
    explicit CMat(int dim) : dim_(dim) {
        if (dim < 2 || dim > 3) throw std::invalid_argument("CMat: dim must be 2 or 3");
    }

    int dim() const { return dim_; }
    cplx& operator()(int i, int j) { return a_[i * 3 + j]; }
    const cplx& operator()(int i, int j) const { return a_[i * 3 + j]; }

    CVec operator*(const CVec& v) const {
        CVec out(dim_);
        for (int i = 0; i < dim_; ++i) {
            cplx s = 0;
            for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
            out[i] = s;
        }
        return out;
    }

    // max row sum of entry magnitudes
    double norm_inf() const {
        double best = 0;
        for (int i = 0; i < dim_; ++i) {
            double s = 0;
            for (int j = 0; j < dim_; ++j) s += std::abs((*this)(i, j));
            if (s > best) best = s;
        }
        return best;
    }

private:
    int dim_ = 0;
    std::array<cplx, 9> a_{};
};

// Uniform coordinate grid, x_start < x_end, count >= 2.
struct Grid {
    double x_start = 0;
    double x_end = 1;
    int count = 2;

    Grid() = default;
    Grid(double a, double b, int n) : x_start(a), x_end(b), count(n) {
        if (!(a < b)) throw std::invalid_argument("Grid: x_start must be < x_end");
        if (n < 2) throw std::invalid_argument("Grid: count must be >= 2");
    }

    double spacing() const { return (x_end - x_start) / (count - 1); }

    std::vector<double> points() const {
        std::vector<double> xs(count);
        const double h = spacing();
        for (int i = 0; i < count; ++i) xs[i] = x_start + h * i;
        xs.back() = x_end;
        return xs;
    }
};

}  // namespace adiwkb
