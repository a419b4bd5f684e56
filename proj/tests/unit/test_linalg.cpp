#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "sclaw/errors.hpp"
#include "sclaw/linalg.hpp"

using namespace sclaw::linalg;

namespace {

double hs_of_reconstruction_error(const ComplexDenseMatrix& m, const SingularSpectrum& s) {
    ComplexDenseMatrix us = *s.left;
    for (std::size_t i = 0; i < us.rows(); ++i)
        for (std::size_t k = 0; k < s.size(); ++k) us(i, k) *= s.values[k];
    return std::sqrt(hs_norm_sq(m - us * s.right->adjoint()));
}

double orthonormality_defect(const ComplexDenseMatrix& q) {
    const ComplexDenseMatrix g = q.adjoint() * q;
    return std::sqrt(hs_norm_sq(g - ComplexDenseMatrix::identity(g.rows())));
}

}  // namespace

TEST_CASE("svd of the identity is all ones") {
    const auto s = svd(ComplexDenseMatrix::identity(3));
    REQUIRE(s.size() == 3);
    for (double v : s.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("svd of a real diagonal sorts descending") {
    const double diag[] = {3.0, 4.0};
    const auto s = svd(ComplexDenseMatrix::diagonal(std::span<const double>(diag)));
    CHECK(s.values[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(s.values[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("svd energy matches the entrywise HS norm") {
    const auto m = oracle::random_complex(6, 6, 11);
    const auto s = svd(m);
    double energy = 0.0;
    for (double v : s.values) energy += v * v;
    double direct = 0.0;
    for (const cplx& z : m.entries()) direct += std::norm(z);
    CHECK(std::abs(energy - direct) <= 1e-8 * direct);
}

TEST_CASE("svd values agree with an independent Jacobi SVD on assorted shapes") {
    const std::size_t shapes[][2] = {{1, 1}, {1, 5}, {5, 1}, {2, 3}, {7, 4}, {4, 7}, {12, 12}, {30, 31}, {31, 30}};
    std::uint64_t seed = 100;
    for (const auto& sh : shapes) {
        const auto m = oracle::random_complex(sh[0], sh[1], ++seed);
        const auto ours = singular_values(m);
        const auto ref = oracle::singular_values(m);
        CAPTURE(sh[0]);
        CAPTURE(sh[1]);
        CHECK(oracle::max_abs_diff(ours, ref) <= 1e-10 * (1.0 + ref.front()));
    }
}

TEST_CASE("svd determinant identity for square input") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto m = oracle::random_complex(9, 9, seed);
        const auto s = singular_values(m);
        const double prod = std::accumulate(s.begin(), s.end(), 1.0, std::multiplies<>());
        const double det = oracle::abs_det(m);
        CHECK(std::abs(prod - det) <= 1e-6 * det);
    }
}

TEST_CASE("svd reconstruction and orthonormal factors") {
    const std::size_t shapes[][2] = {{1, 1}, {3, 3}, {8, 5}, {5, 8}, {25, 25}, {40, 41}};
    std::uint64_t seed = 7;
    for (const auto& sh : shapes) {
        const auto m = oracle::random_complex(sh[0], sh[1], ++seed);
        const auto s = svd(m, true);
        REQUIRE(s.left.has_value());
        REQUIRE(s.right.has_value());
        CHECK(s.left->rows() == m.rows());
        CHECK(s.right->rows() == m.cols());
        const double scale = 1.0 + std::sqrt(hs_norm_sq(m));
        CHECK(hs_of_reconstruction_error(m, s) <= 1e-8 * scale);
        CHECK(orthonormality_defect(*s.left) <= 1e-10);
        CHECK(orthonormality_defect(*s.right) <= 1e-10);
    }
}

TEST_CASE("svd handles rank deficiency and zero blocks") {
    ComplexDenseMatrix m(6, 6);
    auto a = oracle::random_complex(6, 2, 5);
    auto b = oracle::random_complex(2, 6, 6);
    m = a * b;
    const auto s = svd(m, true);
    CHECK(s.values[2] <= 1e-12 * s.values[0]);
    CHECK(hs_of_reconstruction_error(m, s) <= 1e-10 * (1.0 + s.values[0]));

    const auto z = svd(ComplexDenseMatrix(4, 3), true);
    for (double v : z.values) CHECK(v == 0.0);

    // Bidiagonal with an interior zero on the diagonal.
    ComplexDenseMatrix j(4, 4);
    j(0, 0) = 2.0; j(0, 1) = 1.0; j(1, 1) = 0.0; j(1, 2) = 1.0; j(2, 2) = 3.0; j(2, 3) = 1.0; j(3, 3) = 0.0;
    const auto sj = svd(j, true);
    CHECK(oracle::max_abs_diff(sj.values, oracle::singular_values(j)) <= 1e-12);
    CHECK(hs_of_reconstruction_error(j, sj) <= 1e-12);
}

TEST_CASE("svd rejects non-finite input") {
    ComplexDenseMatrix m(2, 2);
    m(0, 1) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(svd(m), sclaw::ContractViolation);
}

TEST_CASE("Hoffman-Wielandt for random pairs") {
    std::uint64_t seed = 1000;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t r = 1 + static_cast<std::size_t>(trial % 12);
        const std::size_t c = 1 + static_cast<std::size_t>((trial * 7) % 12);
        const auto a = oracle::random_complex(r, c, ++seed);
        auto b = oracle::random_complex(r, c, ++seed);
        b *= 0.1 * (trial % 5);
        b += a;
        const auto sa = singular_values(a);
        const auto sb = singular_values(b);
        double lhs = 0.0;
        for (std::size_t i = 0; i < sa.size(); ++i) lhs += (sa[i] - sb[i]) * (sa[i] - sb[i]);
        CHECK(lhs <= hs_norm_sq(a - b) + 1e-8);
    }
}

TEST_CASE("singular values are invariant under a random unitary") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto q = orthonormalize_columns(oracle::random_complex(10, 10, 500 + seed));
        CHECK(orthonormality_defect(q) <= 1e-12);
        const auto m = oracle::random_complex(10, 7, seed);
        CHECK(oracle::max_abs_diff(singular_values(m), singular_values(q * m)) <= 1e-9);
    }
}

TEST_CASE("eigenvalues of small hand cases") {
    const cplx diag[] = {1.0, cplx(0.0, 2.0)};
    const auto e = eigenvalues(ComplexDenseMatrix::diagonal(std::span<const cplx>(diag)));
    CHECK(oracle::matched_distance(e.values, {1.0, cplx(0.0, 2.0)}) <= 1e-14);

    ComplexDenseMatrix rot(2, 2, {0.0, 1.0, -1.0, 0.0});
    CHECK(oracle::matched_distance(eigenvalues(rot).values, {cplx(0, 1), cplx(0, -1)}) <= 1e-12);

    CHECK_THROWS_AS(eigenvalues(ComplexDenseMatrix(2, 3)), sclaw::ContractViolation);
    CHECK(eigenvalues(ComplexDenseMatrix(1, 1, {cplx(3, 4)})).values[0] == cplx(3, 4));
}

TEST_CASE("eigenvalues sum to the trace and multiply to the determinant") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = seed % 2 ? 5 : 13;
        const auto m = oracle::random_complex(n, n, 40 + seed);
        const auto e = eigenvalues(m).values;
        cplx sum{};
        cplx prod = 1.0;
        cplx trace{};
        for (const cplx& l : e) sum += l, prod *= l;
        for (std::size_t i = 0; i < n; ++i) trace += m(i, i);
        CHECK(std::abs(sum - trace) <= 1e-8);
        const double det = oracle::abs_det(m);
        CHECK(std::abs(std::abs(prod) - det) <= 1e-6 * det);
    }
}

TEST_CASE("eigenvalues agree with an independent solver on larger inputs") {
    const auto m = oracle::random_complex(60, 60, 3);
    CHECK(oracle::matched_distance(eigenvalues(m).values, oracle::eigenvalues(m)) <= 1e-9);

    // Nilpotent shift plus identity stresses exceptional shifts.
    ComplexDenseMatrix j(8, 8);
    for (std::size_t i = 0; i + 1 < 8; ++i) j(i + 1, i) = 1.0;
    j(0, 7) = 1.0;
    const auto e = eigenvalues(j).values;
    for (const cplx& l : e) CHECK(std::abs(std::abs(l) - 1.0) <= 1e-10);
}

TEST_CASE("projection onto the smallest singular directions") {
    const double diag[] = {5.0, 1.0};
    const auto m = ComplexDenseMatrix::diagonal(std::span<const double>(diag));
    const cplx e1[] = {1.0, 0.0};
    const cplx e2[] = {0.0, 1.0};
    CHECK(small_singular_projection_norm(m, 1, e1).value == doctest::Approx(0.0));
    CHECK(small_singular_projection_norm(m, 1, e2).value == doctest::Approx(1.0));

    const double tied[] = {1.0, 1.0};
    const auto t = ComplexDenseMatrix::diagonal(std::span<const double>(tied));
    CHECK(small_singular_projection_norm(t, 1, e1).boundary_tie);
    CHECK_THROWS_AS(small_singular_projection_norm(t, 0, e1), sclaw::ContractViolation);
    CHECK_THROWS_AS(small_singular_projection_norm(t, 3, e1), sclaw::ContractViolation);
}

TEST_CASE("projection agrees with an explicit Gram projector") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto m = oracle::random_complex(8, 8, 70 + seed);
        const auto x = oracle::random_complex(8, 1, 90 + seed).column(0);
        Eigen::JacobiSVD<Eigen::MatrixXcd> ref(oracle::to_eigen(m), Eigen::ComputeFullV);
        const Eigen::MatrixXcd v3 = ref.matrixV().rightCols(3);
        const Eigen::MatrixXcd proj = v3 * v3.adjoint();
        Eigen::VectorXcd xv(8);
        for (int i = 0; i < 8; ++i) xv(i) = x[static_cast<std::size_t>(i)];
        const double expected = (proj * xv).norm();
        const auto got = small_singular_projection_norm(m, 3, x);
        CHECK(std::abs(got.value - expected) <= 1e-9);
        CHECK(got.value <= norm2(x) + 1e-15);
    }
}

TEST_CASE("wide matrices count null directions as zero singular values") {
    const auto m = oracle::random_complex(3, 5, 4);
    const auto sub = small_singular_subspace(m, 2);
    for (double v : sub.values) CHECK(v <= 1e-12);
    const auto img = m * sub.basis;
    CHECK(std::sqrt(hs_norm_sq(img)) <= 1e-10);
}

TEST_CASE("HS norm small cases") {
    CHECK(hs_norm_sq(ComplexDenseMatrix(3, 3)) == 0.0);
    CHECK(hs_norm_sq(ComplexDenseMatrix::identity(4)) == 4.0);
    CHECK(hs_norm_sq(ComplexDenseMatrix(2, 2, {cplx(1, 1), 0.0, 0.0, 2.0})) == doctest::Approx(6.0));
}

TEST_CASE("matrix construction contracts") {
    CHECK_THROWS_AS(ComplexDenseMatrix(2, 2, {1.0, 2.0, 3.0}), sclaw::ContractViolation);
    CHECK_THROWS_AS(ComplexDenseMatrix(1, 1, {cplx(INFINITY, 0)}), sclaw::ContractViolation);
    const auto a = oracle::random_complex(3, 4, 1);
    CHECK(a.with_row(a.row(0)).rows() == 4);
    CHECK(a.with_column(a.column(0)).cols() == 5);
    CHECK(a.adjoint().adjoint() == a);
    CHECK(a.content_hash() == oracle::random_complex(3, 4, 1).content_hash());
    CHECK(a.content_hash() != oracle::random_complex(3, 4, 2).content_hash());
}
