#include <algorithm>
#include <bit>
#include <cstddef>
#include <cmath>
#include <string>

#include "sclaw/errors.hpp"
#include "sclaw/linalg.hpp"
#include "sclaw/rng.hpp"

namespace sclaw::linalg {

ComplexDenseMatrix::ComplexDenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexDenseMatrix::ComplexDenseMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(data_.size() == rows_ * cols_,
            "ComplexDenseMatrix: expected " + std::to_string(rows_ * cols_) + " entries, got " +
                std::to_string(data_.size()));
    validate();
}

ComplexDenseMatrix ComplexDenseMatrix::identity(std::size_t n) {
    ComplexDenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexDenseMatrix ComplexDenseMatrix::diagonal(std::span<const cplx> diag) {
    ComplexDenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexDenseMatrix ComplexDenseMatrix::diagonal(std::span<const double> diag) {
    ComplexDenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

std::vector<cplx> ComplexDenseMatrix::column(std::size_t j) const {
    std::vector<cplx> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

bool ComplexDenseMatrix::all_finite() const noexcept {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

void ComplexDenseMatrix::validate() const {
    require(all_finite(), "ComplexDenseMatrix: non-finite entry");
}

ComplexDenseMatrix ComplexDenseMatrix::adjoint() const {
    ComplexDenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexDenseMatrix ComplexDenseMatrix::transpose() const {
    ComplexDenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

ComplexDenseMatrix ComplexDenseMatrix::block(std::size_t row0, std::size_t col0, std::size_t rows,
                                             std::size_t cols) const {
    require(row0 + rows <= rows_ && col0 + cols <= cols_, "block: out of range");
    ComplexDenseMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = (*this)(row0 + i, col0 + j);
    return out;
}

ComplexDenseMatrix ComplexDenseMatrix::with_row(std::span<const cplx> row) const {
    require(row.size() == cols_, "with_row: row length must equal column count");
    ComplexDenseMatrix out(rows_ + 1, cols_);
    std::copy(data_.begin(), data_.end(), out.data_.begin());
    std::copy(row.begin(), row.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(rows_ * cols_));
    return out;
}

ComplexDenseMatrix ComplexDenseMatrix::with_column(std::span<const cplx> col) const {
    require(col.size() == rows_, "with_column: column length must equal row count");
    ComplexDenseMatrix out(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
        out(i, cols_) = col[i];
    }
    return out;
}

ComplexDenseMatrix& ComplexDenseMatrix::operator+=(const ComplexDenseMatrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "operator+=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexDenseMatrix& ComplexDenseMatrix::operator-=(const ComplexDenseMatrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "operator-=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexDenseMatrix& ComplexDenseMatrix::operator*=(cplx scale) noexcept {
    for (cplx& z : data_) z *= scale;
    return *this;
}

std::uint64_t ComplexDenseMatrix::content_hash() const noexcept {
    std::uint64_t h = mix64(rows_ * 0x9e3779b97f4a7c15ULL ^ cols_);
    for (const cplx& z : data_) {
        h = mix64(h ^ std::bit_cast<std::uint64_t>(z.real()));
        h = mix64(h ^ std::bit_cast<std::uint64_t>(z.imag()));
    }
    return h;
}

ComplexDenseMatrix operator+(ComplexDenseMatrix a, const ComplexDenseMatrix& b) { return a += b; }
ComplexDenseMatrix operator-(ComplexDenseMatrix a, const ComplexDenseMatrix& b) { return a -= b; }
ComplexDenseMatrix operator*(cplx scale, ComplexDenseMatrix a) { return a *= scale; }

ComplexDenseMatrix operator*(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b) {
    require(a.cols() == b.rows(), "operator*: inner dimensions differ");
    ComplexDenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out_row = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            auto b_row = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
        }
    }
    return out;
}

std::vector<cplx> operator*(const ComplexDenseMatrix& a, std::span<const cplx> x) {
    require(a.cols() == x.size(), "matrix-vector product: length mismatch");
    std::vector<cplx> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx acc{};
        auto r = a.row(i);
        for (std::size_t j = 0; j < x.size(); ++j) acc += r[j] * x[j];
        out[i] = acc;
    }
    return out;
}

double norm2(std::span<const cplx> x) noexcept {
    // Scaled accumulation, as in LAPACK's dznrm2, to avoid overflow.
    double scale = 0.0;
    double ssq = 1.0;
    for (const cplx& z : x) {
        for (double part : {z.real(), z.imag()}) {
            if (part == 0.0) continue;
            const double a = std::abs(part);
            if (scale < a) {
                ssq = 1.0 + ssq * (scale / a) * (scale / a);
                scale = a;
            } else {
                ssq += (a / scale) * (a / scale);
            }
        }
    }
    return scale * std::sqrt(ssq);
}

double hs_norm_sq(const ComplexDenseMatrix& m) noexcept {
    double acc = 0.0;
    for (const cplx& z : m.entries()) acc += std::norm(z);
    return acc;
}

}  // namespace sclaw::linalg
