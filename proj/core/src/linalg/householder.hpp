#pragma once

// Elementary reflectors H = I - tau v v^H with v[0] = 1, following LAPACK's zlarfg
// convention: H^H x = beta e_1 with beta real.

#include <cmath>
#include <complex>
#include <span>

#include "sclaw/linalg.hpp"

namespace sclaw::linalg::detail {

/// Overwrites x with v (x[0] = 1) and returns beta; tau is written out.
inline double make_reflector(std::span<cplx> x, cplx& tau) {
    const cplx alpha = x[0];
    const double xnorm = x.size() > 1 ? norm2(x.subspan(1)) : 0.0;
    if (xnorm == 0.0 && alpha.imag() == 0.0) {
        tau = 0.0;
        x[0] = 1.0;
        return alpha.real();
    }
    const double mag = std::hypot(std::hypot(alpha.real(), alpha.imag()), xnorm);
    const double beta = alpha.real() >= 0.0 ? -mag : mag;
    tau = cplx((beta - alpha.real()) / beta, -alpha.imag() / beta);
    const cplx scale = 1.0 / (alpha - beta);
    for (std::size_t i = 1; i < x.size(); ++i) x[i] *= scale;
    x[0] = 1.0;
    return beta;
}

/// A <- (I - conj(tau) v v^H) A on rows [row0, row0 + v.size()) and columns [col0, cols).
inline void apply_left_adjoint(ComplexDenseMatrix& a, std::span<const cplx> v, cplx tau,
                               std::size_t row0, std::size_t col0, std::vector<cplx>& work) {
    if (tau == cplx{}) return;
    const std::size_t ncols = a.cols() - col0;
    work.assign(ncols, cplx{});
    for (std::size_t i = 0; i < v.size(); ++i) {
        const cplx vc = std::conj(v[i]);
        const cplx* r = a.row(row0 + i).data() + col0;
        for (std::size_t j = 0; j < ncols; ++j) work[j] += vc * r[j];
    }
    const cplx ct = std::conj(tau);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const cplx f = ct * v[i];
        cplx* r = a.row(row0 + i).data() + col0;
        for (std::size_t j = 0; j < ncols; ++j) r[j] -= f * work[j];
    }
}

/// A <- (I - tau v v^H) A on rows [row0, row0 + v.size()) and columns [col0, cols).
inline void apply_left(ComplexDenseMatrix& a, std::span<const cplx> v, cplx tau, std::size_t row0,
                       std::size_t col0, std::vector<cplx>& work) {
    apply_left_adjoint(a, v, std::conj(tau), row0, col0, work);
}

/// A <- A (I - tau v v^H) on rows [row0, row1) and columns [col0, col0 + v.size()).
inline void apply_right(ComplexDenseMatrix& a, std::span<const cplx> v, cplx tau, std::size_t row0,
                        std::size_t row1, std::size_t col0) {
    if (tau == cplx{}) return;
    for (std::size_t i = row0; i < row1; ++i) {
        cplx* r = a.row(i).data() + col0;
        cplx s{};
        for (std::size_t j = 0; j < v.size(); ++j) s += r[j] * v[j];
        s *= tau;
        for (std::size_t j = 0; j < v.size(); ++j) r[j] -= s * std::conj(v[j]);
    }
}

}  // namespace sclaw::linalg::detail
