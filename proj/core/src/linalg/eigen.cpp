#include <algorithm>
#include <cfloat>
#include <cmath>

#include "householder.hpp"
#include "sclaw/errors.hpp"
#include "sclaw/linalg.hpp"

namespace sclaw::linalg {
namespace {

double cabs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

void reduce_to_hessenberg(ComplexDenseMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<cplx> x;
    std::vector<cplx> work;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        x.resize(n - k - 1);
        for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = a(i, k);
        cplx tau;
        const double beta = detail::make_reflector(x, tau);
        a(k + 1, k) = beta;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
        detail::apply_left_adjoint(a, x, tau, k + 1, k + 1, work);
        detail::apply_right(a, x, tau, 0, n, k + 1);
    }
}

struct ComplexGivens {
    double c = 1.0;
    cplx s{};
    cplx r{};
};

// [c s; -conj(s) c] [x; y] = [r; 0]
ComplexGivens complex_givens(cplx x, cplx y) {
    if (y == cplx{}) return {1.0, {}, x};
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ax == 0.0) return {0.0, std::conj(y) / ay, ay};
    const double norm = std::hypot(ax, ay);
    const cplx phase = x / ax;
    return {ax / norm, phase * std::conj(y) / norm, phase * norm};
}

cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    const cplx half = (a - d) / 2.0;
    const cplx disc = std::sqrt(half * half + b * c);
    const cplx mid = (a + d) / 2.0;
    const cplx l1 = mid + disc;
    const cplx l2 = mid - disc;
    return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

EigenSpectrum eigenvalues(const ComplexDenseMatrix& m) {
    require(m.rows() == m.cols(), "eigenvalues: matrix must be square");
    m.validate();
    const std::size_t n = m.rows();
    EigenSpectrum out;
    out.values.resize(n);
    if (n == 0) return out;

    ComplexDenseMatrix h = m;
    reduce_to_hessenberg(h);

    const double ulp = DBL_EPSILON;
    const double smlnum = DBL_MIN * (static_cast<double>(n) / ulp);
    const std::size_t itmax = 30 * std::max<std::size_t>(10, n);

    std::size_t ihi = n - 1;
    for (;;) {
        std::size_t its = 0;
        for (;;) {
            std::size_t l = 0;
            for (std::size_t k = ihi; k >= 1; --k) {
                const double sub = cabs1(h(k, k - 1));
                if (sub <= smlnum) {
                    l = k;
                    break;
                }
                double tst = cabs1(h(k - 1, k - 1)) + cabs1(h(k, k));
                if (tst == 0.0) {
                    if (k >= 2) tst += std::abs(h(k - 1, k - 2).real());
                    if (k + 1 <= ihi) tst += std::abs(h(k + 1, k).real());
                }
                if (sub <= ulp * tst) {
                    l = k;
                    break;
                }
            }
            if (l > 0) h(l, l - 1) = 0.0;
            if (l >= ihi) {
                out.values[ihi] = h(ihi, ihi);
                break;
            }
            if (its >= itmax)
                throw NumericFailure("eigenvalues: QR iteration did not converge", m.rows(), m.cols(),
                                     m.content_hash());

            cplx shift;
            if (its == 10) {
                shift = 0.75 * std::abs(h(l + 1, l).real()) + h(l, l);
            } else if (its == 20) {
                shift = 0.75 * std::abs(h(ihi, ihi - 1).real()) + h(ihi, ihi);
            } else {
                shift = wilkinson_shift(h(ihi - 1, ihi - 1), h(ihi - 1, ihi), h(ihi, ihi - 1),
                                        h(ihi, ihi));
            }
            ++its;

            cplx x = h(l, l) - shift;
            cplx y = h(l + 1, l);
            for (std::size_t k = l; k < ihi; ++k) {
                if (k > l) {
                    x = h(k, k - 1);
                    y = h(k + 1, k - 1);
                }
                const ComplexGivens g = complex_givens(x, y);
                const std::size_t c0 = k > l ? k - 1 : l;
                for (std::size_t j = c0; j <= ihi; ++j) {
                    const cplx a = h(k, j);
                    const cplx b = h(k + 1, j);
                    h(k, j) = g.c * a + g.s * b;
                    h(k + 1, j) = -std::conj(g.s) * a + g.c * b;
                }
                if (k > l) h(k + 1, k - 1) = 0.0;
                const std::size_t r1 = std::min(k + 2, ihi);
                for (std::size_t i = l; i <= r1; ++i) {
                    const cplx a = h(i, k);
                    const cplx b = h(i, k + 1);
                    h(i, k) = g.c * a + std::conj(g.s) * b;
                    h(i, k + 1) = -g.s * a + g.c * b;
                }
            }
        }
        if (ihi == 0) break;
        --ihi;
    }
    return out;
}

}  // namespace sclaw::linalg
