#include <algorithm>
#include <cmath>

#include "householder.hpp"
#include "sclaw/errors.hpp"
#include "sclaw/linalg.hpp"

namespace sclaw::linalg {

SmallSingularSubspace small_singular_subspace(const ComplexDenseMatrix& m, std::size_t h) {
    const std::size_t cols = m.cols();
    require(h >= 1 && h <= cols, "small_singular_subspace: need 1 <= h <= cols");

    SingularSpectrum s;
    if (m.rows() < cols) {
        ComplexDenseMatrix padded(cols, cols);
        for (std::size_t i = 0; i < m.rows(); ++i)
            std::copy(m.row(i).begin(), m.row(i).end(), padded.row(i).begin());
        s = svd(padded, true);
    } else {
        s = svd(m, true);
    }
    const std::size_t k = s.values.size();  // == cols
    const ComplexDenseMatrix& v = *s.right;

    SmallSingularSubspace out;
    out.basis = ComplexDenseMatrix(cols, h);
    out.values.resize(h);
    for (std::size_t c = 0; c < h; ++c) {
        const std::size_t src = k - 1 - c;
        out.values[c] = s.values[src];
        for (std::size_t i = 0; i < cols; ++i) out.basis(i, c) = v(i, src);
    }
    if (h < k) {
        const double scale = std::max(s.values.front(), 1e-300);
        out.boundary_tie = std::abs(s.values[k - h - 1] - s.values[k - h]) <= 1e-12 * scale;
    }
    return out;
}

ProjectionNorm small_singular_projection_norm(const ComplexDenseMatrix& m, std::size_t h,
                                              std::span<const cplx> x) {
    require(x.size() == m.cols(), "small_singular_projection_norm: x must have length cols");
    const SmallSingularSubspace sub = small_singular_subspace(m, h);
    std::vector<cplx> coeff(h);
    for (std::size_t c = 0; c < h; ++c) {
        cplx acc{};
        for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(sub.basis(i, c)) * x[i];
        coeff[c] = acc;
    }
    return {std::min(norm2(coeff), norm2(x)), sub.boundary_tie};
}

ComplexDenseMatrix orthonormalize_columns(const ComplexDenseMatrix& a) {
    require(a.rows() >= a.cols(), "orthonormalize_columns: need rows >= cols");
    a.validate();
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    ComplexDenseMatrix r = a;
    std::vector<std::vector<cplx>> vs(n);
    std::vector<cplx> taus(n);
    std::vector<cplx> work;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<cplx> x(m - k);
        for (std::size_t i = k; i < m; ++i) x[i - k] = r(i, k);
        detail::make_reflector(x, taus[k]);
        detail::apply_left_adjoint(r, x, taus[k], k, k, work);
        vs[k] = std::move(x);
    }
    ComplexDenseMatrix q(m, n);
    for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;
    for (std::size_t k = n; k-- > 0;) detail::apply_left(q, vs[k], taus[k], k, k, work);
    return q;
}

}  // namespace sclaw::linalg
