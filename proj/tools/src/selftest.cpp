#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sclaw/anticonc.hpp"
#include "sclaw/csv.hpp"
#include "sclaw/driver.hpp"
#include "sclaw/errors.hpp"
#include "sclaw/lawcheck.hpp"
#include "sclaw/potential.hpp"
#include "sclaw/process.hpp"
#include "sclaw/quasirandom.hpp"

namespace sclaw::driver {
namespace {

namespace fs = std::filesystem;

struct CheckRow {
    std::string module;
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    bool pass = false;
};

class Catalog {
public:
    void add(const std::string& module, const std::string& name, std::function<CheckRow()> fn) {
        CheckRow row;
        try {
            row = fn();
        } catch (const std::exception& e) {
            row.value = std::numeric_limits<double>::quiet_NaN();
            row.pass = false;
            errors_.push_back(module + "/" + name + ": " + e.what());
        }
        row.module = module;
        row.name = name;
        rows_.push_back(row);
    }
    const std::vector<CheckRow>& rows() const { return rows_; }
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<CheckRow> rows_;
    std::vector<std::string> errors_;
};

CheckRow near(double value, double expected, double tol) {
    return {"", "", value, expected, std::abs(value - expected) <= tol};
}
CheckRow truth(bool ok) { return {"", "", ok ? 1.0 : 0.0, 1.0, ok}; }

// Deterministic complex Gaussian matrix for the identity checks.
ComplexDenseMatrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    ComplexDenseMatrix m(rows, cols);
    const XiSpec g = XiSpec::complex_gaussian();
    StreamRng rng(seed, Domain::trial, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = g.draw(rng);
    return m;
}

linalg::SingularSpectrum spectrum(std::vector<double> values) {
    linalg::SingularSpectrum s;
    s.values = std::move(values);
    return s;
}

template <class F>
bool throws_contract(F&& f) {
    try {
        f();
    } catch (const ContractViolation&) {
        return true;
    }
    return false;
}

void linalg_checks(Catalog& c) {
    c.add("linalg", "svd_identity", [] {
        const auto v = linalg::singular_values(ComplexDenseMatrix::identity(3));
        return truth(v.size() == 3 && std::all_of(v.begin(), v.end(), [](double x) { return std::abs(x - 1) < 1e-14; }));
    });
    c.add("linalg", "svd_diagonal", [] {
        const auto v = linalg::singular_values(ComplexDenseMatrix::diagonal(std::vector<double>{3.0, 4.0}));
        return truth(std::abs(v[0] - 4) < 1e-14 && std::abs(v[1] - 3) < 1e-14);
    });
    c.add("linalg", "svd_hs_identity", [] {
        const auto m = gaussian(6, 6, 1);
        double s = 0;
        for (double x : linalg::singular_values(m)) s += x * x;
        const double hs = linalg::hs_norm_sq(m);
        return near(s / hs, 1.0, 1e-8);
    });
    c.add("linalg", "eig_diagonal", [] {
        auto ev = linalg::eigenvalues(ComplexDenseMatrix::diagonal(std::vector<cplx>{1.0, cplx(0, 2)})).values;
        std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
        return truth(std::abs(ev[0] - cplx(1)) < 1e-12 && std::abs(ev[1] - cplx(0, 2)) < 1e-12);
    });
    c.add("linalg", "eig_rotation", [] {
        auto ev = linalg::eigenvalues(ComplexDenseMatrix(2, 2, {0.0, 1.0, -1.0, 0.0})).values;
        std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.imag() > b.imag(); });
        return truth(std::abs(ev[0] - cplx(0, 1)) < 1e-12 && std::abs(ev[1] - cplx(0, -1)) < 1e-12);
    });
    c.add("linalg", "eig_trace", [] {
        const auto m = gaussian(5, 5, 2);
        cplx s = 0, tr = 0;
        for (cplx v : linalg::eigenvalues(m).values) s += v;
        for (std::size_t i = 0; i < 5; ++i) tr += m(i, i);
        return near(std::abs(s - tr), 0.0, 1e-8);
    });
    c.add("linalg", "projection_orthogonal", [] {
        const std::vector<cplx> x = {1.0, 0.0};
        return near(linalg::small_singular_projection_norm(ComplexDenseMatrix::diagonal(std::vector<double>{5, 1}), 1, x).value,
                    0.0, 1e-14);
    });
    c.add("linalg", "projection_aligned", [] {
        const std::vector<cplx> x = {0.0, 1.0};
        return near(linalg::small_singular_projection_norm(ComplexDenseMatrix::diagonal(std::vector<double>{5, 1}), 1, x).value,
                    1.0, 1e-14);
    });
    c.add("linalg", "projection_explicit", [] {
        const auto m = gaussian(8, 8, 3);
        const auto x = gaussian(1, 8, 4);
        const auto sv = linalg::svd(m, true);
        // Gram projector from the three last right-singular vectors.
        double acc = 0;
        for (std::size_t k = 5; k < 8; ++k) {
            cplx ip = 0;
            for (std::size_t i = 0; i < 8; ++i) ip += std::conj((*sv.right)(i, k)) * x(0, i);
            acc += std::norm(ip);
        }
        const auto row = x.row(0);
        return near(linalg::small_singular_projection_norm(m, 3, row).value, std::sqrt(acc), 1e-9);
    });
    c.add("linalg", "hs_zero", [] { return near(linalg::hs_norm_sq(ComplexDenseMatrix(4, 4)), 0.0, 0.0); });
    c.add("linalg", "hs_identity", [] { return near(linalg::hs_norm_sq(ComplexDenseMatrix::identity(7)), 7.0, 0.0); });
    c.add("linalg", "hs_by_hand", [] {
        return near(linalg::hs_norm_sq(ComplexDenseMatrix(2, 2, {cplx(1, 1), 0.0, 0.0, 2.0})), 6.0, 1e-14);
    });
}

void ensemble_checks(Catalog& c) {
    c.add("ensemble", "beta_rademacher", [] {
        const double b = beta_of_xi(XiSpec::rademacher());
        return CheckRow{"", "", b, 0.5, b >= 0.5};
    });
    c.add("ensemble", "beta_constant_rejected",
          [] { return truth(throws_contract([] { beta_of_xi(XiSpec::constant(1.0)); })); });
    c.add("ensemble", "beta_gaussian_stable", [] {
        return near(beta_of_xi(XiSpec::complex_gaussian(), 100000, 1), beta_of_xi(XiSpec::complex_gaussian(), 100000, 2),
                    0.05);
    });
    c.add("ensemble", "p_zero_empty", [] {
        return near(double(sample_matrix(30, 30, 0.0, XiSpec::rademacher(), 1, Precondition::relaxed).nonzeros.size()),
                    0.0, 0.0);
    });
    c.add("ensemble", "binomial_support", [] {
        const double count = double(sample_matrix(1000, 1000, 0.02, XiSpec::rademacher(), 5).nonzeros.size());
        return near(count, 20000.0, 5 * std::sqrt(20000 * 0.98));
    });
    c.add("ensemble", "sample_deterministic", [] {
        return truth(sample_matrix(50, 40, 0.1, XiSpec::complex_gaussian(), 9) ==
                     sample_matrix(50, 40, 0.1, XiSpec::complex_gaussian(), 9));
    });
    c.add("ensemble", "dense_rademacher_row", [] {
        const auto row = sample_row(4, 1.0, XiSpec::rademacher(), 3, 0, Domain::matrix_entry, Precondition::relaxed);
        return truth(std::all_of(row.begin(), row.end(), [](cplx v) { return v == cplx(1) || v == cplx(-1); }));
    });
    c.add("ensemble", "row_support_fraction", [] {
        const auto row = sample_row(1000000, 0.5, XiSpec::rademacher(), 4);
        const double frac = double(std::count_if(row.begin(), row.end(), [](cplx v) { return v != cplx(); })) / 1e6;
        return near(frac, 0.5, 0.005);
    });
    c.add("ensemble", "shift_zero", [] {
        return truth(shift_and_scale(ComplexDenseMatrix(3, 3), {2.0, ScaleMode::raw}) ==
                     cplx(-2.0) * ComplexDenseMatrix::identity(3));
    });
    c.add("ensemble", "shift_identity", [] {
        return truth(shift_and_scale(ComplexDenseMatrix::identity(2), {1.0, ScaleMode::raw}) == ComplexDenseMatrix(2, 2));
    });
    c.add("ensemble", "rescale_identity", [] {
        const auto a = gaussian(5, 6, 7);
        const auto s = shift_and_scale(a, {cplx(0.5, 1), ScaleMode::rescaled, 4.0});
        double worst = 0;
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                worst = std::max(worst, std::abs(s(i, j) - (a(i, j) / 2.0 - (i == j ? cplx(0.5, 1) : cplx()))));
        return near(worst, 0.0, 1e-12);
    });
}

void potential_checks(Catalog& c) {
    c.add("potential", "u_circ_origin", [] { return near(u_circ(0.0), 0.5, 1e-15); });
    c.add("potential", "u_circ_boundary", [] { return near(u_circ(1.0), 0.0, 1e-15); });
    c.add("potential", "u_circ_outside", [] { return near(u_circ(2.0), -std::log(2.0), 1e-15); });
    c.add("potential", "delta_low_regime_first", [] { return near(delta_r(1000, 100, 1), 0.0, 0.0); });
    c.add("potential", "delta_high_regime", [] {
        const double expected = std::pow(std::log(100.0), 8) * std::pow(std::log(500.0), 8) / 1000.0;
        return near(delta_r(1000, 100, 999) / expected, 1.0, 1e-12);
    });
    c.add("potential", "delta_monotone_by_regime", [] {
        const DeltaSchedule s(1000, 100);
        bool ok = true;
        for (std::size_t r = 2; r <= 1000; ++r)
            if (r != s.high_regime_start()) ok = ok && s.delta(r) >= s.delta(r - 1);
        return truth(ok);
    });
    c.add("potential", "log_potential_ones", [] {
        return near(log_potential(spectrum({1.0, 1.0, 1.0}), 3).value, 0.0, 0.0);
    });
    c.add("potential", "log_potential_cancel", [] {
        return near(log_potential(spectrum({std::numbers::e, 1.0 / std::numbers::e}), 2).value, 0.0, 1e-15);
    });
    c.add("potential", "log_potential_hand", [] {
        return near(log_potential(spectrum({4.0, 3.0}), 2).value, -(std::log(4.0) + std::log(3.0)) / 2, 1e-15);
    });
    c.add("potential", "truncated_empty", [] { return near(truncated_potential(spectrum({4.0, 3.0}), 0, 2).value, 0.0, 0.0); });
    c.add("potential", "truncated_hand", [] {
        return near(truncated_potential(spectrum({4.0, 3.0, 1e-300}), 2, 3).value, -(std::log(4.0) + std::log(3.0)) / 3, 1e-15);
    });
    c.add("potential", "truncated_minor_identity", [] {
        const auto s = sample_matrix(60, 60, 0.2, XiSpec::rademacher(), 11);
        const auto rep = potential_report(s, 1.0, 0.1);
        const auto minor = linalg::svd(shift_and_scale(s.leading_block(rep.m, rep.m), {1.0, ScaleMode::rescaled, s.d()}));
        return near(rep.t_n.value, truncated_potential(minor, rep.top, 60).value, 1e-14);
    });
    c.add("potential", "no_truncation", [] {
        const auto rep = potential_report(sample_matrix(60, 60, 0.2, XiSpec::rademacher(), 12), 1.0, 0.0);
        return near(rep.t1.value, rep.u_n.value, 1e-12);
    });
    c.add("potential", "sandwich_instance", [] {
        return truth(potential_report(sample_matrix(60, 60, 0.2, XiSpec::rademacher(), 13), cplx(0.7, 0.4), 0.1)
                         .sandwich_holds());
    });
    c.add("potential", "equal_spectrum", [] {
        const auto full = spectrum(std::vector<double>(40, 2.0));
        const auto minor = spectrum(std::vector<double>(36, 2.0));
        const auto pair = t1_t2(full, minor, 40, 0.1);
        const double expected = -double(pair.idx.top) * std::log(2.0) / 40.0;
        return near(pair.t1.value, expected, 1e-14);
    });
    c.add("potential", "schedule_tail_reported", [] {
        const std::size_t n = 100000;
        const double d = std::pow(std::log(double(n)), 2);
        const auto idx = truncation_indices(n, 0.05);
        const double tail = DeltaSchedule(n, d).tail_sum(idx.top, n);
        // Recorded, not asserted against the asymptotic claim.
        return CheckRow{"", "", tail, 0.2, std::isfinite(tail)};
    });
}

void quasirandom_checks(Catalog& c) {
    c.add("quasirandom", "identity_neighborhood_empty", [] {
        const std::vector<std::size_t> s = {0};
        return near(double(unique_neighborhood(ComplexDenseMatrix::identity(3), s, 0.5).size()), 0.0, 0.0);
    });
    c.add("quasirandom", "zero_column_inside", [] {
        ComplexDenseMatrix b(3, 3);
        b(0, 1) = b(1, 2) = b(2, 1) = 1.0;
        const std::vector<std::size_t> s = {0};
        const auto u = unique_neighborhood(b, s, 0.5);
        return truth(u.inside == std::vector<std::size_t>{0} && u.outside.empty());
    });
    c.add("quasirandom", "neighborhood_brute_force", [] {
        const auto b = sample_matrix(12, 12, 0.25, XiSpec::rademacher(), 3).to_dense();
        StreamRng rng(3, Domain::subset);
        bool ok = true;
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<std::size_t> s;
            for (std::size_t j = 0; j < 12; ++j)
                if (rng.uniform() < 0.3) s.push_back(j);
            const auto u = unique_neighborhood(b, s, 0.5);
            std::vector<std::size_t> inside, outside;
            for (std::size_t i = 0; i < 12; ++i) {
                const bool in_s = std::find(s.begin(), s.end(), i) != s.end();
                std::size_t nz = 0;
                double mod = 0;
                for (std::size_t j : s)
                    if (b(i, j) != cplx()) {
                        ++nz;
                        mod = std::abs(b(i, j));
                    }
                if (in_s && nz == 0) inside.push_back(i);
                if (!in_s && nz == 1 && mod >= 0.5) outside.push_back(i);
            }
            ok = ok && u.inside == inside && u.outside == outside;
        }
        return truth(ok);
    });
    c.add("quasirandom", "alpha_log_one", [] { return near(alpha(1000, 1000 / std::numbers::e), 1.0, 1e-12); });
    c.add("quasirandom", "alpha_log_two", [] {
        return near(alpha(1000, 1000 / (std::numbers::e * std::numbers::e)), 0.25, 1e-12);
    });
    c.add("quasirandom", "alpha_arithmetic", [] { return near(alpha(1000, 10), 0.04716, 1e-5); });
    c.add("quasirandom", "tau_trivial", [] {
        const double target = spread_target(1000, 20);
        return near(double(g_and_tau(1000, 20, std::size_t(target) + 1, 8).tau), 0.0, 0.0);
    });
    c.add("quasirandom", "g_at_least_one", [] {
        bool ok = true;
        for (double x = 1; x < 1000; x *= 1.7) ok = ok && g_step(1000, 20, x, 8) >= 1;
        return truth(ok);
    });
    c.add("quasirandom", "tau_finite_increasing", [] {
        const auto g = g_and_tau(1e4, 50, 10, 8);
        bool ok = g.tau > 0 && double(g.k.back()) > g.target;
        for (std::size_t i = 1; i < g.k.size(); ++i) ok = ok && g.k[i] > g.k[i - 1];
        return truth(ok);
    });
    c.add("quasirandom", "vacuous_range", [] {
        CertificateConfig cfg;
        const auto r = check_unique_expansion(ComplexDenseMatrix(10, 10), 10, 5, 5, 4, cfg);
        return truth(r.verdict == Verdict::vacuous_pass);
    });
    c.add("quasirandom", "row_degree_zero_matrix", [] {
        return truth(passed(check_event_B(ComplexDenseMatrix(50, 50), 50, 10, CertificateConfig{}).verdict));
    });
    c.add("quasirandom", "large_entries_bounded", [] {
        const auto a = sample_matrix(200, 200, 0.1, XiSpec::rademacher(), 2).to_dense();
        return truth(passed(check_event_Q(a, 200, 20, 0.5).verdict));
    });
    c.add("quasirandom", "large_entries_planted", [] {
        auto a = sample_matrix(100, 100, 0.1, XiSpec::rademacher(), 2).to_dense();
        a(3, 4) = std::pow(100.0, 4);
        return truth(check_event_Q(a, 100, 10, 0.5).verdict == Verdict::fail);
    });
    c.add("quasirandom", "heavy_rows_zero_matrix", [] {
        return truth(passed(check_event_R(ComplexDenseMatrix(50, 50), 50, 10, CertificateConfig{}).verdict));
    });
    c.add("quasirandom", "lambda_zero", [] {
        const std::vector<cplx> v(5);
        return near(double(lambda_count(v, 0.0)), 5.0, 0.0);
    });
    c.add("quasirandom", "lambda_hand", [] {
        const std::vector<cplx> v = {3.0, 1.0, 0.5};
        return near(double(lambda_count(v, 1.0)), 2.0, 0.0);
    });
    c.add("quasirandom", "lambda_monotone", [] {
        const auto v = gaussian(1, 50, 5);
        const auto row = v.row(0);
        bool ok = lambda_count(row, 0.0) == 50;
        for (double x = 0.01; x < 4; x += 0.05) ok = ok && lambda_count(row, x + 0.05) <= lambda_count(row, x);
        return truth(ok);
    });
}

void anticonc_checks(Catalog& c) {
    c.add("anticonc", "levy_point_mass", [] {
        return near(levy_estimate([](StreamRng&) { return cplx(2.0); }, 0.0, 10000, 1).estimate, 1.0, 0.0);
    });
    c.add("anticonc", "levy_bernoulli", [] {
        return near(DiscreteLaw({{0.0, 0.5}, {1.0, 0.5}}).concentration(0.4), 0.5, 1e-15);
    });
    c.add("anticonc", "lkr_single_rademacher", [] {
        const std::vector<DiscreteLaw> terms = {DiscreteLaw::from_xi(XiSpec::rademacher())};
        const std::vector<double> radii = {0.5};
        return near(lkr_check(terms, radii, 0.5).c_achieved, 0.5 * std::sqrt(0.5 * 0.25) / 0.5, 1e-12);
    });
    c.add("anticonc", "lkr_degenerate", [] {
        const std::vector<DiscreteLaw> terms = {DiscreteLaw::point(1.0)};
        const std::vector<double> radii = {0.5};
        return truth(!lkr_check(terms, radii, 0.5).applicable);
    });
    c.add("anticonc", "flat_full_space", [] {
        const std::size_t n = 16;
        ComplexDenseMatrix f(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                f(i, k) = std::polar(1.0 / std::sqrt(double(n)), 2 * std::numbers::pi * double(i * k) / double(n));
        const auto b = flat_basis(f, 0.25);
        return truth(b.achieved_flatness >= b.required_flatness);
    });
    c.add("anticonc", "flat_unit_vector", [] {
        ComplexDenseMatrix e(10, 1);
        e(0, 0) = 1.0;
        const auto b = flat_basis(e, 0.25);
        return truth(b.attempts == 1 && b.achieved_flatness == 1.0);
    });
    c.add("anticonc", "projection_zero_row", [] {
        const std::size_t n = 10;
        const double p = 0.1;
        const std::vector<cplx> w(n);
        const auto f = projection_frequency(ComplexDenseMatrix::identity(n), w, std::log(1e-9), p, XiSpec::rademacher(),
                                            20000, 1);
        const double exact = std::pow(1 - p, double(n));
        return near(f.freq, exact, 5 * std::sqrt(exact * (1 - exact) / 20000));
    });
    c.add("anticonc", "projection_far_shift", [] {
        const std::vector<cplx> w(10, cplx(100.0));
        return near(projection_frequency(ComplexDenseMatrix::identity(10), w, std::log(1.0), 0.1, XiSpec::rademacher(),
                                         2000, 1)
                        .freq,
                    0.0, 0.0);
    });
}

ProcessParams small_process(ScheduleMode mode) {
    ProcessParams p;
    p.n = 40;
    p.p = 0.2;
    p.xi = XiSpec::rademacher();
    p.z = 1.0;
    p.seed = 1;
    p.config.eps = 0.2;
    p.config.schedule_mode = mode;
    return p;
}

void process_checks(Catalog& c) {
    c.add("process", "forced_accept", [] {
        const auto t = run_process(small_process(ScheduleMode::force_accept));
        return near(t.summary.h_n, 0.0, 0.0);
    });
    c.add("process", "forced_reject", [] {
        const auto t = run_process(small_process(ScheduleMode::force_reject));
        return near(double(t.summary.accepted_steps), 0.0, 0.0);
    });
    c.add("process", "acceptance_desk_scale", [] {
        auto p = small_process(ScheduleMode::formula);
        p.n = 60;
        p.p = 0.25;
        p.seed = 3;
        const double f = run_process(p).summary.acceptance_frequency;
        return CheckRow{"", "", f, 0.8, f >= 0.8};
    });
    c.add("process", "interlacing_zero", [] {
        const ComplexDenseMatrix z(3, 3);
        const std::vector<cplx> row = {1.0, cplx(0, 2), 2.0};
        return truth(interlacing_check(z, z.with_row(row)) <= 0.0);
    });
    c.add("process", "interlacing_hand", [] {
        const auto m = ComplexDenseMatrix::diagonal(std::vector<double>{3.0, 1.0});
        const std::vector<cplx> row = {0.0, 2.0};
        const auto v = linalg::singular_values(m.with_row(row));
        return truth(std::abs(v[0] - 3) < 1e-12 && std::abs(v[1] - std::sqrt(5.0)) < 1e-12 &&
                     interlacing_check(m, m.with_row(row)) <= 1e-15);
    });
    c.add("process", "walk_row_zero", [] {
        const std::vector<cplx> x(2);
        return near(walk_row_bound_check(ComplexDenseMatrix::diagonal(std::vector<double>{2.0, 1.0}), x, 1).rhs, 0.0, 0.0);
    });
    c.add("process", "walk_row_hand", [] {
        const std::vector<cplx> x = {0.0, 3.0};
        const auto b = walk_row_bound_check(ComplexDenseMatrix::diagonal(std::vector<double>{2.0, 1.0}), x, 1);
        return truth(std::abs(b.rhs - 6.0) < 1e-12 && b.holds);
    });
    c.add("process", "drift_no_failures", [] {
        DriftWalkParams p;
        p.q = 0.0;
        p.trials = 500;
        return near(simulate_drift_walk(p, make_policy(WalkAdversary::always_up)).p_zero, 1.0, 0.0);
    });
}

void lawcheck_checks(Catalog& c) {
    c.add("lawcheck", "quadrant_quarter", [] { return near(disc_quadrant_mass(0.0, 0.0), 0.25, 1e-15); });
    c.add("lawcheck", "zero_matrix_disk_mass", [] {
        SparseSample zero;
        zero.n_rows = zero.n_cols = 10;
        zero.p = 0.5;
        const auto e = esd_summary(zero);
        return truth(e.disk_mass == 1.0 && std::abs(e.discrepancy - 0.75) < 1e-12);
    });
    c.add("lawcheck", "ginibre_quantiles", [] {
        const auto g = ginibre_reference(100, 1.0, 1);
        bool ok = g.tau(0.0) == g.values.front() && g.values.front() >= 0.0 && g.values.front() < 0.1;
        for (int k = 1; k <= 100; ++k) ok = ok && g.quantile(k / 100.0) >= g.quantile((k - 1) / 100.0);
        return truth(ok);
    });
    c.add("lawcheck", "no_truncation", [] {
        const auto r = truncated_convergence_experiment(50, 0.2, 0.0, 1.0, XiSpec::rademacher(), 1);
        return near(r.rows[0].t1, r.rows[0].u_n, 1e-12);
    });
}

void cli_checks(Catalog& c) {
    c.add("cli", "empty_grid_rejected", [] {
        try {
            parse_config("kind: law\nseeds: [1]\ngrid: {}\n");
        } catch (const ConfigError&) {
            return truth(true);
        }
        return truth(false);
    });
    c.add("cli", "unknown_key_rejected", [] {
        try {
            parse_config("kind: law\nseeds: [1]\ngrid: {n: [50], d: [5], epsilon: [0.1]}\n");
        } catch (const ConfigError&) {
            return truth(true);
        }
        return truth(false);
    });
}

struct MiniRun {
    std::string name;
    std::string yaml;
};

const std::vector<MiniRun>& mini_runs() {
    static const std::vector<MiniRun> runs = {
        {"law", "kind: law\nseeds: [1]\ngrid:\n  n: [200]\n  d: [20]\n  eps: [0.1]\n  z: [1, 1.5]\n"},
        {"potential",
         "kind: potential\nseeds: {base: 1, count: 3}\ngrid:\n  n: [100]\n  d: [10]\n  eps: [0.1]\n  z: [1, [0.5, 0.5]]\n"},
        {"process", "kind: process\nseeds: [1, 2]\ngrid:\n  n: [60]\n  d: [15]\n  eps: [0.2]\n  z: [1]\n"},
        {"certify", "kind: certify\nseeds: [1, 2]\ngrid:\n  n: [200]\n  d: [20]\noptions:\n  subset_trials: 100\n"},
        {"anticonc", "kind: anticonc\nseeds: [1]\ngrid:\n  n: [200]\n  d: [25]\n  z: [1]\noptions:\n  trials: 500\n"},
        {"walk",
         "kind: walk\nseeds: [1]\ngrid:\n  q: [9.5367431640625e-07, 0]\n  adversary: [always-up, random]\noptions:\n  "
         "trials: 2000\n"},
    };
    return runs;
}

}  // namespace

int selftest(const fs::path& out_dir, std::size_t jobs, std::ostream& out) {
    Catalog c;
    linalg_checks(c);
    ensemble_checks(c);
    potential_checks(c);
    quasirandom_checks(c);
    anticonc_checks(c);
    process_checks(c);
    lawcheck_checks(c);
    cli_checks(c);

    fs::create_directories(out_dir);
    std::ostringstream csv;
    csv << "module,check,value,expected,pass\n";
    std::size_t passed_checks = 0;
    for (const auto& r : c.rows()) {
        passed_checks += r.pass;
        csv << r.module << ',' << r.name << ',' << csv::num(r.value) << ',' << csv::num(r.expected) << ','
            << csv::flag(r.pass) << '\n';
        out << (r.pass ? "PASS " : "FAIL ") << r.module << '/' << r.name << '\n';
    }
    for (const auto& e : c.errors()) out << "  error: " << e << '\n';
    {
        std::ofstream f(out_dir / "selftest.csv", std::ios::binary | std::ios::trunc);
        f << csv.str();
    }

    bool runs_ok = true;
    std::ostringstream quiet;
    for (const auto& run : mini_runs()) {
        const ExperimentConfig cfg = parse_config(run.yaml);
        const RunSummary s = run_experiment(cfg, out_dir / "runs" / run.name, jobs, quiet);
        const bool ok = s.exit_code == kExitPass;
        runs_ok = runs_ok && ok;
        out << (ok ? "PASS " : "FAIL ") << "run/" << run.name << " (" << s.passed << "/" << s.tasks << " tasks)\n";
    }
    out << "selftest: " << passed_checks << "/" << c.rows().size() << " checks passed, runs "
        << (runs_ok ? "passed" : "failed") << '\n';
    return passed_checks == c.rows().size() && runs_ok ? kExitPass : kExitAssertion;
}

}  // namespace sclaw::driver
