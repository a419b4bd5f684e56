#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sclaw/ball_mass.hpp"
#include "sclaw/ensemble.hpp"
#include "sclaw/errors.hpp"

using namespace sclaw;

TEST_CASE("xi laws have unit second moment") {
    const XiSpec laws[] = {XiSpec::complex_gaussian(), XiSpec::rademacher(), XiSpec::unit_circle_uniform(),
                           XiSpec::bernoulli_scaled(0.25), XiSpec::two_point(std::sqrt(2.0), 0.0, 0.5)};
    const std::size_t n = 1'000'000;
    for (const XiSpec& xi : laws) {
        StreamRng rng(3, Domain::xi_calibration);
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += std::norm(xi.draw(rng));
        CAPTURE(xi.kind_name());
        CHECK(std::abs(acc / n - 1.0) <= 3.0 / std::sqrt(double(n)) * 5.0);
        CHECK(xi.second_moment() == doctest::Approx(1.0));
    }
}

TEST_CASE("xi kinds round-trip through their names") {
    for (auto k : {XiKind::complex_gaussian, XiKind::rademacher, XiKind::unit_circle_uniform, XiKind::two_point,
                   XiKind::bernoulli_scaled}) {
        XiSpec s;
        s.kind = k;
        CHECK(XiSpec::kind_from_name(s.kind_name()) == k);
    }
    CHECK_THROWS_AS(XiSpec::kind_from_name("cauchy"), ContractViolation);
    CHECK_THROWS_AS(XiSpec::two_point(1.0, -1.0, 1.5), ContractViolation);
    CHECK_THROWS_AS(XiSpec::bernoulli_scaled(0.0), ContractViolation);
}

TEST_CASE("beta for Rademacher entries is one half") {
    // Exact: an open disc of radius beta covers at most one atom when beta <= 1, so the
    // largest mass is 1/2, and 1/2 <= 1 - beta exactly when beta <= 1/2.
    const double b = beta_of_xi(XiSpec::rademacher(), 100000, 1);
    CHECK(b >= 0.5 - 1e-12);
    CHECK(b <= 0.5 + 1e-12);
}

TEST_CASE("beta for a point mass has no admissible value") {
    CHECK_THROWS_AS(beta_of_xi(XiSpec::constant(1.0), 100000, 1), ContractViolation);
    // The remedy named in the message works.
    CHECK(beta_of_xi(XiSpec::bernoulli_scaled(0.5), 100000, 1) == doctest::Approx(0.5));
}

TEST_CASE("beta for complex Gaussian entries is stable across seeds") {
    const double b1 = beta_of_xi(XiSpec::complex_gaussian(), 100000, 1);
    const double b2 = beta_of_xi(XiSpec::complex_gaussian(), 100000, 2);
    CHECK(std::abs(b1 - b2) <= 0.05 + 1e-12);
    // |xi|^2 is Exp(1), so the disc around 0 has mass 1 - exp(-beta^2); the
    // crossing with 1 - beta lies between 0.65 and 0.70.
    CHECK(b1 == doctest::Approx(0.65).epsilon(0.08));
    CHECK_THROWS_AS(beta_of_xi(XiSpec::complex_gaussian(), 10, 1), ContractViolation);
}

TEST_CASE("ball mass finds atoms and handles radius zero") {
    std::vector<cplx> s(1000, 2.0);
    for (std::size_t k = 0; k < 300; ++k) s[k] = cplx(0, 5);
    CHECK(max_ball_mass(s, {0.0, BallKind::closed}).mass == doctest::Approx(0.7));
    CHECK(max_ball_mass(s, {0.0, BallKind::open}).mass == 0.0);
    CHECK(max_ball_mass(s, {0.1, BallKind::open}).mass == doctest::Approx(0.7));
    CHECK(max_ball_mass(s, {2.5, BallKind::open}).mass == doctest::Approx(0.7));
    CHECK(max_ball_mass(s, {5.0, BallKind::closed, 0.0}).mass == doctest::Approx(1.0));
}

TEST_CASE("sample_matrix is reproducible and bit-identical per seed") {
    const auto a = sample_matrix(50, 60, 0.1, XiSpec::complex_gaussian(), 42);
    const auto b = sample_matrix(50, 60, 0.1, XiSpec::complex_gaussian(), 42);
    CHECK(a == b);
    const auto c = sample_matrix(50, 60, 0.1, XiSpec::complex_gaussian(), 43);
    CHECK(!(a == c));
    CHECK(a.d() == doctest::Approx(5.0));
}

TEST_CASE("sample_matrix support count is binomial") {
    const auto s = sample_matrix(1000, 1000, 0.02, XiSpec::rademacher(), 7);
    const double mean = 20000.0;
    const double sd = std::sqrt(20000.0 * 0.98);
    CHECK(std::abs(double(s.nonzeros.size()) - mean) <= 5.0 * sd);
    for (std::size_t k = 1; k < s.nonzeros.size(); ++k) {
        const auto& p = s.nonzeros[k - 1];
        const auto& q = s.nonzeros[k];
        CHECK((p.i < q.i || (p.i == q.i && p.j < q.j)));
    }
}

TEST_CASE("probability preconditions") {
    const auto xi = XiSpec::rademacher();
    CHECK_THROWS_AS(sample_matrix(10, 10, 0.6, xi, 1), ContractViolation);
    CHECK_THROWS_AS(sample_matrix(10, 10, 0.0, xi, 1), ContractViolation);
    CHECK_THROWS_AS(sample_matrix(10, 10, 0.05, xi, 1), ContractViolation);  // p * n < 1
    CHECK_THROWS_AS(sample_matrix(0, 10, 0.5, xi, 1), ContractViolation);
    CHECK(sample_matrix(10, 10, 0.0, xi, 1, Precondition::relaxed).nonzeros.empty());
    CHECK(sample_matrix(4, 4, 1.0, xi, 1, Precondition::relaxed).nonzeros.size() == 16);
}

TEST_CASE("rows and columns match the matrix stream") {
    const auto xi = XiSpec::complex_gaussian();
    const auto s = sample_matrix(30, 31, 0.2, xi, 9);
    const auto dense = s.to_dense();
    for (std::size_t i : {0u, 5u, 29u}) {
        const auto row = sample_row(31, 0.2, xi, 9, i);
        for (std::size_t j = 0; j < 31; ++j) CHECK(row[j] == dense(i, j));
    }
    for (std::size_t j : {0u, 30u}) {
        const auto col = sample_col(30, 0.2, xi, 9, j);
        for (std::size_t i = 0; i < 30; ++i) CHECK(col[i] == dense(i, j));
    }
    // Leading blocks agree with smaller draws of the same seed: entries never depend on the shape.
    const auto small = sample_matrix(12, 13, 0.2, xi, 9).to_dense();
    CHECK(small == s.leading_block(12, 13));
    CHECK(s.at_time(HalfTime::from_twice(25)) == s.leading_block(12, 13));
}

TEST_CASE("sample_row hand cases and frequency") {
    const auto r = sample_row(4, 1.0, XiSpec::rademacher(), 1, 0, Domain::matrix_entry, Precondition::relaxed);
    for (const cplx& v : r) CHECK((v == cplx(1.0) || v == cplx(-1.0)));
    const auto big = sample_row(1'000'000, 0.5, XiSpec::rademacher(), 2);
    std::size_t support = 0;
    for (const cplx& v : big) support += v != cplx{};
    CHECK(std::abs(double(support) / 1e6 - 0.5) <= 0.005);
    CHECK(big == sample_row(1'000'000, 0.5, XiSpec::rademacher(), 2));
}

TEST_CASE("sample csv round-trip is bit exact") {
    for (const XiSpec& xi : {XiSpec::complex_gaussian(), XiSpec::two_point(cplx(0.3, -1.7), 2.5, 0.125),
                             XiSpec::bernoulli_scaled(0.3)}) {
        const auto s = sample_matrix(40, 41, 0.15, xi, 0xfeedbeefcafe1234ULL);
        std::stringstream buf;
        s.write_csv(buf);
        const auto back = SparseSample::read_csv(buf);
        CHECK(back == s);
    }
    std::stringstream bad("i,j,re,im\n");
    CHECK_THROWS_AS(SparseSample::read_csv(bad), ContractViolation);
    std::stringstream oob("# {\"n\":2,\"m\":2,\"p\":0.5,\"seed\":1,\"xi\":{\"kind\":\"rademacher\"}}\ni,j,re,im\n2,0,1,0\n");
    CHECK_THROWS_AS(SparseSample::read_csv(oob), ContractViolation);
}

TEST_CASE("shift and scale") {
    const auto zero = shift_and_scale(ComplexDenseMatrix(3, 3), {2.0});
    CHECK(zero == cplx(-2.0) * ComplexDenseMatrix::identity(3));
    CHECK(hs_norm_sq(shift_and_scale(ComplexDenseMatrix::identity(2), {1.0})) == 0.0);
    CHECK_THROWS_AS(shift_and_scale(ComplexDenseMatrix(3, 5), {1.0}), ContractViolation);

    // Rescaled shift equals the rescaled raw shift at z * sqrt(d).
    const auto a = oracle::random_complex(5, 6, 2);
    const double d = 7.3;
    const cplx z(0.4, -1.1);
    const auto lhs = shift_and_scale(a, {z, ScaleMode::rescaled, d});
    const auto rhs = cplx(1.0 / std::sqrt(d)) * shift_and_scale(a, {z * std::sqrt(d), ScaleMode::raw});
    CHECK(std::sqrt(hs_norm_sq(lhs - rhs)) <= 1e-12);
    CHECK(lhs(4, 4) == a(4, 4) / std::sqrt(d) - z);
    CHECK(lhs(4, 5) == a(4, 5) / std::sqrt(d));
}

TEST_CASE("rescaled unshifted energy per row is close to one") {
    const std::size_t n = 500;
    const double d = 20.0;
    const auto s = sample_matrix(n, n, d / n, XiSpec::complex_gaussian(), 5);
    const double e = hs_norm_sq(shift_and_scale(s.to_dense(), {0.0, ScaleMode::rescaled, d})) / n;
    CHECK(std::abs(e - 1.0) <= 0.1);
}
