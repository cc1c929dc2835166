#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace photonet {

using complex = std::complex<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a matrix is too ill-conditioned to factor reliably.
/// `condition()` is +inf for an exactly zero pivot.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(double condition)
        : std::runtime_error("singular matrix (condition estimate " + std::to_string(condition) + ")"),
          condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// condition_estimate above this raises SingularMatrixError in solve/invert.
inline constexpr double singularity_threshold = 1e12;

class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t dim) : data_(dim, complex{}) {}
    ComplexVector(std::initializer_list<complex> values) : data_(values) { check_finite(); }
    explicit ComplexVector(std::vector<complex> values) : data_(std::move(values)) { check_finite(); }

    std::size_t dim() const noexcept { return data_.size(); }
    complex operator[](std::size_t i) const { return data_[i]; }
    complex& operator[](std::size_t i) { return data_[i]; }
    std::span<const complex> entries() const noexcept { return data_; }

    double norm_squared() const {
        double s = 0.0;
        for (auto v : data_) s += std::norm(v);
        return s;
    }

    friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

private:
    void check_finite() const {
        for (auto v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("ComplexVector: non-finite entry");
    }

    std::vector<complex> data_;
};

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, complex{}) {}

    /// Row-list construction; every row must have the same length.
    ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
        check_finite();
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> row_major)
        : rows_(rows), cols_(cols), data_(std::move(row_major)) {
        if (data_.size() != rows_ * cols_) throw DimensionError("ComplexMatrix: entry count != rows*cols");
        check_finite();
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const complex> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    std::span<const complex> entries() const noexcept { return data_; }

    ComplexMatrix transpose() const {
        ComplexMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
        return t;
    }

    /// Copy of the rows x cols window starting at (r0, c0).
    ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
        if (r0 + rows > rows_ || c0 + cols > cols_) throw DimensionError("ComplexMatrix::block out of range");
        ComplexMatrix b(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
        if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
            throw DimensionError("ComplexMatrix::set_block out of range");
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
    }

    double max_abs() const {
        double m = 0.0;
        for (auto v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Maximum absolute row sum.
    double norm_inf() const {
        double best = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < cols_; ++c) s += std::abs((*this)(r, c));
            best = std::max(best, s);
        }
        return best;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(),
                           [](complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    ComplexMatrix& operator*=(complex s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }
    friend ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    void check_finite() const {
        if (!all_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
    }
    void require_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("ComplexMatrix: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<complex> data_;
};

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("multiply: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " by " +
                             std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const complex aik = a(i, k);
            if (aik == complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }

inline ComplexVector multiply(const ComplexMatrix& a, const ComplexVector& x) {
    if (a.cols() != x.dim()) throw DimensionError("multiply: matrix/vector dimension mismatch");
    ComplexVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        complex s{};
        for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * x[k];
        y[i] = s;
    }
    return y;
}

inline ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& x) { return multiply(a, x); }

/// Largest entrywise |a - b|; shapes must agree.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

/// Partial-pivoting LU factorization, P·A = L·U, packed in one matrix.
class LuDecomposition {
public:
    explicit LuDecomposition(ComplexMatrix a) : lu_(std::move(a)) {
        if (!lu_.is_square()) throw DimensionError("LU: matrix is not square");
        const std::size_t n = lu_.rows();
        norm_inf_ = lu_.norm_inf();
        perm_.resize(n);
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t r = k + 1; r < n; ++r)
                if (std::abs(lu_(r, k)) > best) { best = std::abs(lu_(r, k)); p = r; }
            if (best == 0.0) { exactly_singular_ = true; continue; }
            if (p != k) {
                for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(p, c));
                std::swap(perm_[k], perm_[p]);
            }
            const complex pivot = lu_(k, k);
            for (std::size_t r = k + 1; r < n; ++r) {
                const complex f = lu_(r, k) / pivot;
                lu_(r, k) = f;
                if (f == complex{}) continue;
                for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= f * lu_(k, c);
            }
        }
    }

    std::size_t size() const noexcept { return lu_.rows(); }
    bool exactly_singular() const noexcept { return exactly_singular_; }

    /// Solves A x = b for each column of b.
    ComplexMatrix solve(const ComplexMatrix& b) const {
        const std::size_t n = size();
        if (b.rows() != n) throw DimensionError("LU solve: right-hand side has wrong row count");
        if (exactly_singular_) throw SingularMatrixError(std::numeric_limits<double>::infinity());
        ComplexMatrix x(n, b.cols());
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::vector<complex> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = b(perm_[i], j);
            forward_back(col);
            for (std::size_t i = 0; i < n; ++i) x(i, j) = col[i];
        }
        return x;
    }

    /// Estimate of ‖A‖∞·‖A⁻¹‖∞ (Hager/Higham estimator on A⁻ᴴ in the 1-norm).
    double condition_estimate() const {
        const std::size_t n = size();
        if (n == 0) return 1.0;
        if (exactly_singular_) return std::numeric_limits<double>::infinity();
        return norm_inf_ * inverse_norm_inf_estimate();
    }

private:
    void forward_back(std::vector<complex>& v) const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k) v[i] -= lu_(i, k) * v[k];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t k = i + 1; k < n; ++k) v[i] -= lu_(i, k) * v[k];
            v[i] /= lu_(i, i);
        }
    }

    // x <- A⁻¹ x
    std::vector<complex> apply_inverse(std::vector<complex> x) const {
        const std::size_t n = size();
        std::vector<complex> px(n);
        for (std::size_t i = 0; i < n; ++i) px[i] = x[perm_[i]];
        forward_back(px);
        return px;
    }

    // x <- A⁻ᴴ x.  Aᴴ = Uᴴ Lᴴ P, so solve Uᴴ y = x, Lᴴ z = y, then undo P.
    std::vector<complex> apply_inverse_adjoint(std::vector<complex> x) const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < i; ++k) x[i] -= std::conj(lu_(k, i)) * x[k];
            x[i] /= std::conj(lu_(i, i));
        }
        for (std::size_t i = n; i-- > 0;)
            for (std::size_t k = i + 1; k < n; ++k) x[i] -= std::conj(lu_(k, i)) * x[k];
        std::vector<complex> out(n);
        for (std::size_t i = 0; i < n; ++i) out[perm_[i]] = x[i];
        return out;
    }

    // ‖A⁻¹‖∞ = ‖A⁻ᴴ‖₁; estimate ‖B‖₁ for B = A⁻ᴴ using products with B and Bᴴ = A⁻¹.
    double inverse_norm_inf_estimate() const {
        const std::size_t n = size();
        auto norm1 = [](const std::vector<complex>& v) {
            double s = 0.0;
            for (auto c : v) s += std::abs(c);
            return s;
        };
        std::vector<complex> x(n, complex(1.0 / static_cast<double>(n)));
        double estimate = 0.0;
        std::size_t last_j = n;
        for (int iter = 0; iter < 5; ++iter) {
            auto y = apply_inverse_adjoint(x);
            const double ny = norm1(y);
            if (!std::isfinite(ny)) return std::numeric_limits<double>::infinity();
            if (iter > 0 && ny <= estimate) break;
            estimate = ny;
            std::vector<complex> xi(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double m = std::abs(y[i]);
                xi[i] = m > 0.0 ? y[i] / m : complex(1.0);
            }
            auto z = apply_inverse(xi);
            std::size_t j = 0;
            double zmax = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (std::abs(z[i]) > zmax) { zmax = std::abs(z[i]); j = i; }
            complex ztx{};
            for (std::size_t i = 0; i < n; ++i) ztx += std::conj(z[i]) * x[i];
            if (zmax <= ztx.real() || j == last_j) break;
            last_j = j;
            std::fill(x.begin(), x.end(), complex{});
            x[j] = 1.0;
        }
        // Higham's alternating-sign test vector guards against badly chosen iterates.
        std::vector<complex> alt(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double sign = (i % 2 == 0) ? 1.0 : -1.0;
            alt[i] = sign * (1.0 + static_cast<double>(i) / static_cast<double>(n > 1 ? n - 1 : 1));
        }
        const double alt_est = 2.0 * norm1(apply_inverse_adjoint(alt)) / (3.0 * static_cast<double>(n));
        return std::max(estimate, alt_est);
    }

    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
    double norm_inf_ = 0.0;
    bool exactly_singular_ = false;
};

inline double condition_estimate(const ComplexMatrix& a) {
    if (!a.is_square()) throw DimensionError("condition_estimate: matrix is not square");
    return LuDecomposition(a).condition_estimate();
}

namespace detail {
inline const LuDecomposition& require_well_conditioned(const LuDecomposition& lu) {
    const double cond = lu.condition_estimate();
    if (!(cond <= singularity_threshold)) throw SingularMatrixError(cond);
    return lu;
}
}  // namespace detail

inline ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square()) throw DimensionError("solve: matrix is not square");
    if (b.rows() != a.rows()) throw DimensionError("solve: right-hand side has wrong row count");
    LuDecomposition lu(a);
    return detail::require_well_conditioned(lu).solve(b);
}

inline ComplexVector solve(const ComplexMatrix& a, const ComplexVector& b) {
    ComplexMatrix rhs(b.dim(), 1);
    for (std::size_t i = 0; i < b.dim(); ++i) rhs(i, 0) = b[i];
    auto x = solve(a, rhs);
    ComplexVector out(b.dim());
    for (std::size_t i = 0; i < b.dim(); ++i) out[i] = x(i, 0);
    return out;
}

inline ComplexMatrix invert(const ComplexMatrix& a) {
    if (!a.is_square()) throw DimensionError("invert: matrix is not square");
    return solve(a, ComplexMatrix::identity(a.rows()));
}

/// True when every singular value of `m` is at most 1 + tol, i.e. (1+tol)²·I − mᴴm is
/// positive semidefinite. Checked with a Cholesky sweep.
inline bool is_passive(const ComplexMatrix& m, double tol = 1e-9) {
    const std::size_t n = m.cols();
    ComplexMatrix g = m.adjoint() * m;
    const double bound = (1.0 + tol) * (1.0 + tol);
    ComplexMatrix a = ComplexMatrix::identity(n) * complex(bound) - g;
    for (std::size_t k = 0; k < n; ++k) {
        double d = a(k, k).real();
        for (std::size_t j = 0; j < k; ++j) d -= std::norm(a(k, j));
        if (d < -1e-14) return false;
        const double l = std::sqrt(std::max(d, 0.0));
        a(k, k) = l;
        for (std::size_t i = k + 1; i < n; ++i) {
            complex s = a(i, k);
            for (std::size_t j = 0; j < k; ++j) s -= a(i, j) * std::conj(a(k, j));
            a(i, k) = l > 0.0 ? s / l : complex{};
            if (l == 0.0 && std::abs(s) > 1e-12) return false;
        }
    }
    return true;
}

}  // namespace photonet
