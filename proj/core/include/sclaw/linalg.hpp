#pragma once

// Dense complex linear algebra: storage, SVD, eigenvalues, projections.
//
// SVD: Householder bidiagonalization to a real bidiagonal, then implicit-shift
// Golub-Kahan QR sweeps. Eigenvalues: Householder reduction to upper
// Hessenberg form, then single-shift complex QR with Wilkinson shifts.
// No randomness is used here, so ties between equal singular values are broken
// deterministically by the input bits.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sclaw::linalg {

using cplx = std::complex<double>;

/// Relative tolerance used by equality contracts unless a caller overrides it.
inline constexpr double kDefaultRelTol = 1e-8;

class ComplexDenseMatrix {
public:
    ComplexDenseMatrix() = default;
    ComplexDenseMatrix(std::size_t rows, std::size_t cols);
    /// Row-major entries; throws ContractViolation on a length mismatch or a non-finite entry.
    ComplexDenseMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static ComplexDenseMatrix identity(std::size_t n);
    static ComplexDenseMatrix diagonal(std::span<const cplx> diag);
    static ComplexDenseMatrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<cplx> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const cplx> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
    std::vector<cplx> column(std::size_t j) const;

    std::span<const cplx> entries() const noexcept { return data_; }

    bool all_finite() const noexcept;
    /// Throws ContractViolation if any entry is NaN or infinite.
    void validate() const;

    ComplexDenseMatrix adjoint() const;
    ComplexDenseMatrix transpose() const;
    ComplexDenseMatrix block(std::size_t row0, std::size_t col0, std::size_t rows,
                             std::size_t cols) const;
    /// Copy with one extra row appended at the bottom.
    ComplexDenseMatrix with_row(std::span<const cplx> row) const;
    /// Copy with one extra column appended at the right.
    ComplexDenseMatrix with_column(std::span<const cplx> col) const;

    ComplexDenseMatrix& operator+=(const ComplexDenseMatrix& other);
    ComplexDenseMatrix& operator-=(const ComplexDenseMatrix& other);
    ComplexDenseMatrix& operator*=(cplx scale) noexcept;

    /// Stable hash of shape and entry bits, reported in numeric-failure errors.
    std::uint64_t content_hash() const noexcept;

    bool operator==(const ComplexDenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexDenseMatrix operator+(ComplexDenseMatrix a, const ComplexDenseMatrix& b);
ComplexDenseMatrix operator-(ComplexDenseMatrix a, const ComplexDenseMatrix& b);
ComplexDenseMatrix operator*(cplx scale, ComplexDenseMatrix a);
ComplexDenseMatrix operator*(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b);
std::vector<cplx> operator*(const ComplexDenseMatrix& a, std::span<const cplx> x);

double norm2(std::span<const cplx> x) noexcept;

struct SingularSpectrum {
    /// Descending, nonnegative; length min(rows, cols).
    std::vector<double> values;
    /// rows x k, columns are left singular vectors (present on request).
    std::optional<ComplexDenseMatrix> left;
    /// cols x k, columns are right singular vectors (present on request).
    std::optional<ComplexDenseMatrix> right;

    std::size_t size() const noexcept { return values.size(); }
    /// sigma_i with the convention sigma_i = 0 past the computed values (1-based).
    double sigma(std::size_t i) const noexcept {
        return (i >= 1 && i <= values.size()) ? values[i - 1] : 0.0;
    }
};

struct EigenSpectrum {
    std::vector<cplx> values;
};

SingularSpectrum svd(const ComplexDenseMatrix& m, bool want_vectors = false);

/// Convenience: singular values only.
std::vector<double> singular_values(const ComplexDenseMatrix& m);

EigenSpectrum eigenvalues(const ComplexDenseMatrix& m);

double hs_norm_sq(const ComplexDenseMatrix& m) noexcept;

struct ProjectionNorm {
    double value = 0.0;
    /// The singular values on either side of the h-boundary coincide, so the
    /// subspace is one valid choice among several.
    bool boundary_tie = false;
};

/// Orthonormal basis (cols x h, as columns) of the right-singular directions
/// belonging to the h smallest singular values. Wide matrices are padded with
/// zero rows, so their null directions count as singular value 0.
struct SmallSingularSubspace {
    ComplexDenseMatrix basis;
    std::vector<double> values;  // the h smallest singular values, ascending
    bool boundary_tie = false;
};

SmallSingularSubspace small_singular_subspace(const ComplexDenseMatrix& m, std::size_t h);

/// ||P x||_2 with P the orthogonal projection onto the h smallest right-singular directions.
ProjectionNorm small_singular_projection_norm(const ComplexDenseMatrix& m, std::size_t h,
                                              std::span<const cplx> x);

/// Orthonormalize the columns of a (rows >= cols) matrix by Householder QR; returns Q (rows x cols).
ComplexDenseMatrix orthonormalize_columns(const ComplexDenseMatrix& a);

}  // namespace sclaw::linalg
