#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sclaw/errors.hpp"
#include "sclaw/potential.hpp"

using namespace sclaw;
using linalg::SingularSpectrum;

namespace {

SingularSpectrum spectrum(std::vector<double> v) {
    SingularSpectrum s;
    s.values = std::move(v);
    return s;
}

}  // namespace

TEST_CASE("circular potential") {
    CHECK(u_circ(1.0) == 0.0);
    CHECK(u_circ(cplx(0, 1)) == 0.0);
    CHECK(u_circ(0.0) == 0.5);
    CHECK(u_circ(2.0) == doctest::Approx(-0.693147).epsilon(1e-5));
    // Continuity across the unit circle.
    CHECK(std::abs(u_circ(1.0 - 1e-9) - u_circ(1.0 + 1e-9)) <= 1e-8);
}

TEST_CASE("log potential hand cases") {
    CHECK(log_potential(spectrum({1, 1, 1}), 3).value == 0.0);
    CHECK(std::abs(log_potential(spectrum({std::exp(1.0), std::exp(-1.0)}), 2).value) <= 1e-15);
    CHECK(log_potential(spectrum({4, 3}), 2).value == doctest::Approx(-(std::log(4.0) + std::log(3.0)) / 2));
    const auto z = log_potential(spectrum({2, 0}), 2);
    CHECK(z.infinite);
    CHECK(std::isinf(z.value));
}

TEST_CASE("truncated potential") {
    CHECK(truncated_potential(spectrum({4, 3, 1e-300}), 0, 3).value == 0.0);
    CHECK(truncated_potential(spectrum({4, 3, 1e-300}), 2, 3).value ==
          doctest::Approx(-(std::log(4.0) + std::log(3.0)) / 3));
    // sigma_r = 0 past the computed length.
    CHECK(truncated_potential(spectrum({4, 3}), 3, 3).infinite);
}

TEST_CASE("truncated potential uses exactly the largest values") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(20);
        for (double& x : v) x = u(gen);
        std::sort(v.rbegin(), v.rend());
        const std::size_t r = 1 + trial % 20;
        double ref = 0.0;
        std::vector<double> shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        std::partial_sort(shuffled.begin(), shuffled.begin() + long(r), shuffled.end(), std::greater<>());
        for (std::size_t k = 0; k < r; ++k) ref -= std::log(shuffled[k]);
        CHECK(truncated_potential(spectrum(v), r, 20).value == doctest::Approx(ref / 20).epsilon(1e-12));
    }
}

TEST_CASE("delta schedule") {
    CHECK(delta_r(1000, 100.0, 1) == 0.0);
    const double expected = std::pow(std::log(100.0), 8) * std::pow(std::log(500.0), 8) / 1000.0;
    CHECK(delta_r(1000, 100.0, 999) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(delta_r(1000, 100.0, 999, 3.0) == doctest::Approx(3 * expected).epsilon(1e-12));

    const DeltaSchedule s(1000, 100.0);
    CHECK(s.high_regime_start() == 684);
    CHECK(delta_r(1000, 100.0, 683) == doctest::Approx(std::pow(std::log(1000.0 / 318.0), 2) / 1000.0));
    for (std::size_t r = 2; r <= 1000; ++r) {
        if (r == s.high_regime_start()) continue;
        CHECK(s.delta(r) >= s.delta(r - 1));
    }
    CHECK(s.log_eta(999) == doctest::Approx(-1000.0 * expected));
    CHECK(s.eta(999) == 0.0);  // underflow is why callers use log_eta
    CHECK_THROWS_AS(s.delta(0), ContractViolation);
    CHECK_THROWS_AS(s.delta(1001), ContractViolation);
    CHECK_THROWS_AS(DeltaSchedule(10, 1.0), ContractViolation);

    const DeltaSchedule acc(10, 4.0, 1.0, ScheduleMode::force_accept);
    const DeltaSchedule rej(10, 4.0, 1.0, ScheduleMode::force_reject);
    CHECK(std::isinf(acc.delta(3)));
    CHECK(acc.delta(3) > 0);
    CHECK(rej.delta(3) < 0);
}

TEST_CASE("schedule tail at large n is reported") {
    const std::size_t n = 100000;
    const double d = std::pow(std::log(double(n)), 2);
    const double eps = 0.05;
    const auto idx = truncation_indices(n, eps);
    const DeltaSchedule s(n, d);
    const double tail = s.tail_sum(idx.top, n);
    MESSAGE("tail sum of delta_r over [", idx.top, ", ", n, "] with C_sched = 1: ", tail);
    CHECK(std::isfinite(tail));
    CHECK(tail > 0.0);
    double direct = 0.0;
    for (std::size_t r = idx.top; r <= n; ++r) direct += delta_r(n, d, r);
    CHECK(tail == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("truncation indices") {
    const auto t = truncation_indices(100, 0.1);
    CHECK(t.m == 90);
    CHECK(t.top == 87);
    CHECK(t.shift == 20);
    CHECK(t.bulk_lo == 21);
    CHECK(t.bulk_hi == 90);
    CHECK(t.tail_count == 17);
    CHECK_THROWS_AS(truncation_indices(10, 0.5), ContractViolation);
    CHECK_THROWS_AS(truncation_indices(10, 1.0), ContractViolation);
    const auto z = truncation_indices(7, 0.0);
    CHECK(z.m == 7);
    CHECK(z.top == 7);
    CHECK(z.tail_count == 0);
}

TEST_CASE("T1 and T2 closed forms for a constant spectrum") {
    const double c = 1.7;
    const std::size_t n = 100;
    const auto idx = truncation_indices(n, 0.1);
    const auto pair = t1_t2(spectrum(std::vector<double>(n, c)), spectrum(std::vector<double>(idx.m, c)), n, 0.1);
    CHECK(pair.t1.value == doctest::Approx(-87.0 * std::log(c) / 100.0));
    // Bulk of 70 indices plus 17 tail copies of log c.
    CHECK(pair.t2.value == doctest::Approx(-87.0 * std::log(c) / 100.0));
}

TEST_CASE("eps = 0 makes T1 the full potential") {
    const auto m = oracle::random_complex(12, 12, 3);
    const auto s = linalg::svd(m);
    const auto pair = t1_t2(s, s, 12, 0.0);
    CHECK(pair.t1.value == doctest::Approx(log_potential(s, 12).value).epsilon(1e-14));
    CHECK(pair.t2.value == doctest::Approx(log_potential(s, 12).value).epsilon(1e-14));
}

TEST_CASE("interlacing sandwich on sampled instances") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto sample = sample_matrix(60, 60, 0.2, XiSpec::complex_gaussian(), seed);
        for (cplx z : {cplx(0.0), cplx(0.5, 0.5), cplx(1.0), cplx(2.0, -1.0)}) {
            const auto r = potential_report(sample, z, 0.1);
            CHECK(!r.any_infinite());
            CHECK(r.sandwich_holds(1e-10));
            // Independent check with the (1 - eps/4)(1 - eps) ratio where it is implied.
            CHECK(r.t_n.value <= r.t2.value + 1e-10);
        }
    }
}

TEST_CASE("T_n equals the truncated potential of the minor") {
    const auto sample = sample_matrix(40, 40, 0.25, XiSpec::rademacher(), 5);
    const auto r = potential_report(sample, cplx(0.3, 0.2), 0.1);
    const auto minor = shift_and_scale(sample.leading_block(r.m, r.m), {cplx(0.3, 0.2), ScaleMode::rescaled, sample.d()});
    const auto ref = oracle::singular_values(minor);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.top; ++i) acc -= std::log(ref[i]);
    CHECK(r.t_n.value == doctest::Approx(acc / 40.0).epsilon(1e-10));
}

TEST_CASE("zero singular values propagate as infinity flags") {
    // A = 0 and z = 0 gives the zero matrix.
    SparseSample empty{10, 10, 0.2, XiSpec::rademacher(), 1, {}};
    const auto r = potential_report(empty, 0.0, 0.1);
    CHECK(r.u_n.infinite);
    CHECK(r.t_n.infinite);
    CHECK(r.any_infinite());
    std::ostringstream out;
    write_potential_csv_header(out);
    write_potential_csv_row(out, r);
    CHECK(out.str().find("inf") != std::string::npos);
    CHECK(out.str().find("nan") == std::string::npos);
    CHECK(out.str().substr(out.str().size() - 2) == "1\n");
}
