#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "householder.hpp"
#include "sclaw/errors.hpp"
#include "sclaw/linalg.hpp"

namespace sclaw::linalg {
namespace {

struct Givens {
    double c = 1.0;
    double s = 0.0;
    double r = 0.0;
};

Givens givens(double y, double z) {
    if (z == 0.0) return {1.0, 0.0, y};
    const double r = std::hypot(y, z);
    return {y / r, z / r, r};
}

// col_k <- c col_k + s col_l ; col_l <- -s col_k + c col_l
void rotate_columns(ComplexDenseMatrix* x, std::size_t k, std::size_t l, double c, double s) {
    if (x == nullptr) return;
    for (std::size_t i = 0; i < x->rows(); ++i) {
        auto r = x->row(i);
        const cplx a = r[k];
        const cplx b = r[l];
        r[k] = c * a + s * b;
        r[l] = -s * a + c * b;
    }
}

class BidiagonalQr {
public:
    BidiagonalQr(std::vector<double>& d, std::vector<double>& e, ComplexDenseMatrix* u,
                 ComplexDenseMatrix* v)
        : d_(d), e_(e), u_(u), v_(v) {}

    /// Returns false if the sweep budget ran out.
    bool run() {
        const std::size_t n = d_.size();
        if (n <= 1) return true;
        double anorm = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            anorm = std::max(anorm, std::abs(d_[i]) + (i + 1 < n ? std::abs(e_[i]) : 0.0));
        if (anorm == 0.0) return true;
        const double eps = DBL_EPSILON;
        const double tiny = eps * anorm;
        const std::size_t budget = 30 * n * n + 1000;
        std::size_t spent = 0;

        std::size_t q = n - 1;
        while (q > 0) {
            for (std::size_t i = 0; i < q; ++i) {
                if (std::abs(e_[i]) <= eps * (std::abs(d_[i]) + std::abs(d_[i + 1])) ||
                    std::abs(e_[i]) <= DBL_MIN)
                    e_[i] = 0.0;
            }
            if (e_[q - 1] == 0.0) {
                --q;
                continue;
            }
            std::size_t p = q - 1;
            while (p > 0 && e_[p - 1] != 0.0) --p;

            bool chased = false;
            for (std::size_t i = p; i <= q; ++i) {
                if (std::abs(d_[i]) > tiny) continue;
                d_[i] = 0.0;
                if (i < q)
                    chase_row(i, q);
                else
                    chase_column(p, q);
                chased = true;
                break;
            }
            if (chased) continue;

            spent += q - p + 1;
            if (spent > budget) return false;
            sweep(p, q);
        }
        return true;
    }

private:
    // d[i] == 0 with i < q: rotate row i against rows i+1..q to annihilate e[i].
    void chase_row(std::size_t i, std::size_t q) {
        double f = e_[i];
        e_[i] = 0.0;
        for (std::size_t j = i + 1; j <= q && f != 0.0; ++j) {
            const Givens g = givens(d_[j], f);
            d_[j] = g.r;
            if (j < q) {
                f = -g.s * e_[j];
                e_[j] = g.c * e_[j];
            }
            rotate_columns(u_, j, i, g.c, g.s);
        }
    }

    // d[q] == 0: rotate column q against columns q-1..p to annihilate e[q-1].
    void chase_column(std::size_t p, std::size_t q) {
        double f = e_[q - 1];
        e_[q - 1] = 0.0;
        for (std::size_t j = q; j-- > p && f != 0.0;) {
            const Givens g = givens(d_[j], f);
            d_[j] = g.r;
            if (j > p) {
                f = -g.s * e_[j - 1];
                e_[j - 1] = g.c * e_[j - 1];
            }
            rotate_columns(v_, j, q, g.c, g.s);
        }
    }

    void sweep(std::size_t p, std::size_t q) {
        // Wilkinson shift from the trailing 2x2 block of B^T B.
        const double dm = d_[q - 1];
        const double dn = d_[q];
        const double em = e_[q - 1];
        const double fm = q - 1 > p ? e_[q - 2] : 0.0;
        const double t11 = dm * dm + fm * fm;
        const double t12 = dm * em;
        const double t22 = dn * dn + em * em;
        const double half_gap = (t11 - t22) / 2.0;
        double mu = t22;
        if (t12 != 0.0) {
            const double root = std::hypot(half_gap, t12);
            mu = t22 - t12 * t12 / (half_gap + (half_gap >= 0.0 ? root : -root));
        }

        double y = d_[p] * d_[p] - mu;
        double z = d_[p] * e_[p];
        for (std::size_t k = p; k < q; ++k) {
            Givens g = givens(y, z);
            if (k > p) e_[k - 1] = g.r;
            double a = d_[k];
            double b = e_[k];
            d_[k] = g.c * a + g.s * b;
            e_[k] = -g.s * a + g.c * b;
            const double bulge = g.s * d_[k + 1];
            d_[k + 1] *= g.c;
            rotate_columns(v_, k, k + 1, g.c, g.s);

            g = givens(d_[k], bulge);
            d_[k] = g.r;
            a = e_[k];
            b = d_[k + 1];
            e_[k] = g.c * a + g.s * b;
            d_[k + 1] = -g.s * a + g.c * b;
            if (k + 1 < q) {
                y = e_[k];
                z = g.s * e_[k + 1];
                e_[k + 1] *= g.c;
            }
            rotate_columns(u_, k, k + 1, g.c, g.s);
        }
    }

    std::vector<double>& d_;
    std::vector<double>& e_;
    ComplexDenseMatrix* u_;
    ComplexDenseMatrix* v_;
};

// Tall or square input (rows >= cols).
SingularSpectrum svd_tall(const ComplexDenseMatrix& input, bool want_vectors) {
    ComplexDenseMatrix a = input;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n, 0.0);
    std::vector<std::vector<cplx>> left_v(n);
    std::vector<cplx> left_tau(n);
    std::vector<std::vector<cplx>> right_v(n);
    std::vector<cplx> right_tau(n);
    std::vector<cplx> x;
    std::vector<cplx> work;

    for (std::size_t k = 0; k < n; ++k) {
        x.resize(m - k);
        for (std::size_t i = k; i < m; ++i) x[i - k] = a(i, k);
        d[k] = detail::make_reflector(x, left_tau[k]);
        detail::apply_left_adjoint(a, x, left_tau[k], k, k + 1, work);
        if (want_vectors) left_v[k] = x;

        if (k + 1 < n) {
            x.resize(n - k - 1);
            for (std::size_t j = k + 1; j < n; ++j) x[j - k - 1] = std::conj(a(k, j));
            e[k] = detail::make_reflector(x, right_tau[k]);
            detail::apply_right(a, x, right_tau[k], k + 1, m, k + 1);
            if (want_vectors) right_v[k] = x;
        }
    }

    std::optional<ComplexDenseMatrix> u;
    std::optional<ComplexDenseMatrix> v;
    if (want_vectors) {
        u.emplace(m, n);
        for (std::size_t i = 0; i < n; ++i) (*u)(i, i) = 1.0;
        for (std::size_t k = n; k-- > 0;) detail::apply_left(*u, left_v[k], left_tau[k], k, k, work);
        v.emplace(ComplexDenseMatrix::identity(n));
        for (std::size_t k = n - 1; k-- > 0;)
            detail::apply_left(*v, right_v[k], right_tau[k], k + 1, k + 1, work);
    }

    BidiagonalQr qr(d, e, u ? &*u : nullptr, v ? &*v : nullptr);
    if (!qr.run())
        throw NumericFailure("svd: bidiagonal QR did not converge", input.rows(), input.cols(),
                             input.content_hash());

    for (std::size_t k = 0; k < n; ++k) {
        if (d[k] >= 0.0) continue;
        d[k] = -d[k];
        if (v)
            for (std::size_t i = 0; i < n; ++i) (*v)(i, k) = -(*v)(i, k);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return d[i] > d[j]; });

    SingularSpectrum out;
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
    if (want_vectors) {
        ComplexDenseMatrix us(m, n);
        ComplexDenseMatrix vs(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < m; ++i) us(i, k) = (*u)(i, order[k]);
            for (std::size_t i = 0; i < n; ++i) vs(i, k) = (*v)(i, order[k]);
        }
        out.left = std::move(us);
        out.right = std::move(vs);
    }
    return out;
}

}  // namespace

SingularSpectrum svd(const ComplexDenseMatrix& m, bool want_vectors) {
    m.validate();
    if (m.rows() >= m.cols()) return svd_tall(m, want_vectors);
    SingularSpectrum t = svd_tall(m.adjoint(), want_vectors);
    std::swap(t.left, t.right);
    return t;
}

std::vector<double> singular_values(const ComplexDenseMatrix& m) { return svd(m, false).values; }

}  // namespace sclaw::linalg
