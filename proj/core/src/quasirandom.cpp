#include "sclaw/quasirandom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "sclaw/csv.hpp"
#include "sclaw/errors.hpp"
#include "sclaw/rng.hpp"

namespace sclaw {
namespace {

using linalg::ComplexDenseMatrix;
using linalg::cplx;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Nonzero entries of each column: (row, modulus).
struct ColumnSupport {
    std::vector<std::vector<std::pair<std::size_t, double>>> cols;

    explicit ColumnSupport(const ComplexDenseMatrix& b) : cols(b.cols()) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (b(i, j) != cplx{}) cols[j].emplace_back(i, std::abs(b(i, j)));
    }
};

class NeighborhoodCounter {
public:
    NeighborhoodCounter(const ComplexDenseMatrix& b, double beta)
        : support_(b), rows_(b.rows()), beta_(beta), hits_(b.rows(), 0), last_(b.rows(), 0.0),
          in_s_(std::max(b.rows(), b.cols()), 0) {}

    UniqueNeighborhood compute(std::span<const std::size_t> s) {
        touched_.clear();
        for (std::size_t j : s) {
            in_s_[j] = 1;
            for (const auto& [i, mod] : support_.cols[j]) {
                if (hits_[i]++ == 0) touched_.push_back(i);
                last_[i] = mod;
            }
        }
        UniqueNeighborhood out;
        for (std::size_t i : touched_)
            if (hits_[i] == 1 && !in_s_[i] && last_[i] >= beta_) out.outside.push_back(i);
        for (std::size_t j : s)
            if (j < rows_ && hits_[j] == 0) out.inside.push_back(j);
        for (std::size_t i : touched_) hits_[i] = 0;
        for (std::size_t j : s) in_s_[j] = 0;
        std::sort(out.outside.begin(), out.outside.end());
        std::sort(out.inside.begin(), out.inside.end());
        return out;
    }

    std::size_t support_size(std::size_t j) const { return support_.cols[j].size(); }

private:
    ColumnSupport support_;
    std::size_t rows_;
    double beta_;
    std::vector<std::uint32_t> hits_;
    std::vector<double> last_;
    std::vector<std::uint8_t> in_s_;
    std::vector<std::size_t> touched_;
};

double log_binomial(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Advance a sorted k-combination of [0, n); false after the last one.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> random_subset(std::size_t universe, std::size_t size, StreamRng& rng) {
    std::vector<std::size_t> pool(universe);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < size; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(universe - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(size);
    std::sort(pool.begin(), pool.end());
    return pool;
}

double expansion_need(double n, double d, std::size_t s) {
    return alpha(n, static_cast<double>(s)) * d * static_cast<double>(s);
}

std::vector<double> mask_sums(const ComplexDenseMatrix& a, bool columns) {
    std::vector<double> out(columns ? a.cols() : a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != cplx{}) out[columns ? j : i] += 1.0;
    return out;
}

std::vector<double> abs_sums(const ComplexDenseMatrix& a, bool columns) {
    std::vector<double> out(columns ? a.cols() : a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[columns ? j : i] += std::abs(a(i, j));
    return out;
}

double degree_bound(double n, double d, double b, std::size_t s) {
    return b * (d + std::log(n / static_cast<double>(s)));
}

double heavy_threshold(double n, double d, double beta, double ell) {
    return std::pow(d * n / (beta * ell), 5) / beta;
}

double heavy_allowance(double n, double d, double ell) { return alpha(n, ell) * d * ell / 4.0; }

std::vector<double> default_ells(double n) {
    std::vector<double> out;
    for (double ell = 1.0; ell <= n / 2.0; ell *= 2.0) out.push_back(ell);
    return out;
}

}  // namespace

void CertificateConfig::validate() const {
    require(c_star > 0.0 && C_prime > 0.0 && B_big_O > 0.0 && beta > 0.0,
            "CertificateConfig: constants must be positive");
    require(subset_trials >= 100, "CertificateConfig: subset_trials must be >= 100");
    require(exhaustive_limit >= 1.0, "CertificateConfig: exhaustive_limit must be >= 1");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::sampled_pass: return "sampled-pass";
        case Verdict::vacuous_pass: return "vacuous-pass";
        case Verdict::fail: return "fail";
        case Verdict::not_applicable: return "not-applicable";
    }
    return "unknown";
}

std::string to_string(EventKind e) {
    switch (e) {
        case EventKind::unique_expansion: return "U_r";
        case EventKind::row_degree: return "B";
        case EventKind::large_entries: return "Q";
        case EventKind::heavy_rows: return "R";
    }
    return "unknown";
}

UniqueNeighborhood unique_neighborhood(const ComplexDenseMatrix& b, std::span<const std::size_t> s, double beta) {
    std::vector<std::size_t> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "unique_neighborhood: S has duplicates");
    require(sorted.empty() || sorted.back() < b.cols(), "unique_neighborhood: S must index columns of B");
    NeighborhoodCounter counter(b, beta);
    return counter.compute(sorted);
}

double alpha(double n, double x) {
    require(x > 0.0 && x < n, "alpha: need 0 < x < n");
    const double l = std::log(n / x);
    return 1.0 / (l * l);
}

std::size_t g_step(double n, double d, double x, double c_prime) {
    const double raw = d * alpha(n, x) * x / (c_prime * (d + std::log(n / x)));
    return static_cast<std::size_t>(std::max(1.0, std::ceil(raw)));
}

double spread_target(double n, double d) {
    require(d > std::numbers::e, "spread_target: need d > e so that log log d > 0");
    return n / (2.0 * d) * std::log(std::log(d));
}

GrowthSequence g_and_tau(double n, double d, std::size_t start, double c_prime) {
    require(start >= 1 && static_cast<double>(start) < n, "g_and_tau: need 1 <= k < n");
    GrowthSequence out;
    out.target = spread_target(n, d);
    out.k.push_back(start);
    while (static_cast<double>(out.k.back()) <= out.target) {
        const std::size_t k = out.k.back();
        out.k.push_back(k + g_step(n, d, static_cast<double>(k), c_prime));
    }
    out.tau = out.k.size() - 1;
    const double l = std::log(n / static_cast<double>(start));
    out.k_achieved = static_cast<double>(out.tau) / std::pow(l, 4);
    return out;
}

EventResult check_unique_expansion(const ComplexDenseMatrix& b, double n, double d, std::size_t size_lo,
                                   std::size_t size_hi, const CertificateConfig& config) {
    config.validate();
    EventResult res;
    res.event = EventKind::unique_expansion;
    res.witness_is_columns = true;
    const std::size_t ell = b.cols();
    size_lo = std::max<std::size_t>(size_lo, 1);
    size_hi = std::min(size_hi, ell);
    if (size_lo > size_hi) {
        res.verdict = Verdict::vacuous_pass;
        res.detail = "empty size range";
        return res;
    }

    NeighborhoodCounter counter(b, config.beta);
    bool complete = true;
    auto fails = [&](const std::vector<std::size_t>& s) {
        ++res.trials;
        return static_cast<double>(counter.compute(s).size()) < expansion_need(n, d, s.size());
    };
    auto record = [&](std::vector<std::size_t> s) {
        res.verdict = Verdict::fail;
        res.scale = static_cast<double>(s.size());
        res.detail = "|U(S)| below alpha(|S|) d |S|";
        res.witness = std::move(s);
        return res;
    };

    std::vector<std::size_t> grid;
    for (std::size_t s = size_lo; s <= size_hi; s *= 2) grid.push_back(s);
    if (grid.back() != size_hi) grid.push_back(size_hi);

    // Columns ordered by support size: the sparsest ones are the natural suspects.
    std::vector<std::size_t> by_degree(ell);
    std::iota(by_degree.begin(), by_degree.end(), std::size_t{0});
    std::stable_sort(by_degree.begin(), by_degree.end(), [&](std::size_t x, std::size_t y) {
        return counter.support_size(x) < counter.support_size(y);
    });

    for (std::size_t s = size_lo; s <= size_hi; ++s) {
        const bool exhaustive = log_binomial(double(ell), double(s)) <= std::log(config.exhaustive_limit) + 1e-9;
        if (exhaustive) {
            std::vector<std::size_t> c(s);
            std::iota(c.begin(), c.end(), std::size_t{0});
            do {
                if (fails(c)) return record(c);
            } while (next_combination(c, ell));
            continue;
        }
        complete = false;
        if (std::find(grid.begin(), grid.end(), s) == grid.end()) continue;
        std::vector<std::size_t> sparse(by_degree.begin(), by_degree.begin() + static_cast<std::ptrdiff_t>(s));
        std::sort(sparse.begin(), sparse.end());
        if (fails(sparse)) return record(sparse);
        for (std::size_t trial = 0; trial < config.subset_trials; ++trial) {
            StreamRng rng(config.seed, Domain::subset, s, trial);
            auto c = random_subset(ell, s, rng);
            if (fails(c)) return record(c);
        }
    }
    res.verdict = complete ? Verdict::pass : Verdict::sampled_pass;
    return res;
}

EventResult check_event_U_r(const ComplexDenseMatrix& a_t, HalfTime t, std::size_t r, double n, double d,
                            const CertificateConfig& config) {
    require(static_cast<double>(r) >= t.value() - n / std::pow(d, 0.25),
            "check_event_U_r: need r >= t - n / d^{1/4}");
    const double span = static_cast<double>(t.ceil()) - static_cast<double>(r) + 1.0;
    const double lo = std::ceil(config.c_star * std::max(span, 0.0));
    const double hi = std::floor(spread_target(n, d));
    if (hi < 1.0 || lo > hi) {
        EventResult res;
        res.verdict = Verdict::vacuous_pass;
        res.detail = "empty size range";
        return res;
    }
    return check_unique_expansion(a_t, n, d, static_cast<std::size_t>(std::max(lo, 1.0)),
                                  static_cast<std::size_t>(hi), config);
}

EventResult check_event_B(const ComplexDenseMatrix& a_t, double n, double d, const CertificateConfig& config) {
    config.validate();
    EventResult res;
    res.event = EventKind::row_degree;
    for (bool columns : {false, true}) {
        const std::vector<double> sums = mask_sums(a_t, columns);
        std::vector<std::size_t> order(sums.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sums[x] > sums[y]; });
        double prefix = 0.0;
        for (std::size_t s = 1; s <= order.size(); ++s) {
            prefix += sums[order[s - 1]];
            ++res.trials;
            if (prefix / static_cast<double>(s) > degree_bound(n, d, config.B_big_O, s)) {
                res.verdict = Verdict::fail;
                res.witness.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s));
                std::sort(res.witness.begin(), res.witness.end());
                res.witness_is_columns = columns;
                res.scale = static_cast<double>(s);
                res.detail = columns ? "heaviest columns exceed the degree bound" : "heaviest rows exceed the degree bound";
                return res;
            }
        }
    }
    return res;
}

EventResult check_event_Q(const ComplexDenseMatrix& a_t, double n, double d, double beta) {
    require(beta > 0.0, "check_event_Q: beta must be positive");
    EventResult res;
    res.event = EventKind::large_entries;
    const auto entries = a_t.entries();
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> mod(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) mod[k] = std::abs(entries[k]);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return mod[x] > mod[y]; });

    if (!order.empty() && mod[order[0]] > n * n * n) {
        res.verdict = Verdict::fail;
        res.witness = {order[0]};
        res.scale = 0.0;
        res.detail = "maximum entry exceeds n^3";
        return res;
    }
    const double log_n = std::log(n);
    for (double h = 1.0; h <= n * n * n * n; h *= 2.0) {
        ++res.trials;
        const double thr = 8.0 * h / beta;
        std::size_t count = 0;
        while (count < order.size() && mod[order[count]] > thr) ++count;
        const double allowed = 2.0 * d * n / (h * h) + log_n * log_n;
        if (static_cast<double>(count) > allowed) {
            res.verdict = Verdict::fail;
            res.witness.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
            std::sort(res.witness.begin(), res.witness.end());
            res.scale = h;
            res.detail = "too many entries above 8H/beta";
            return res;
        }
    }
    return res;
}

EventResult check_event_R(const ComplexDenseMatrix& a_t, double n, double d, const CertificateConfig& config,
                          std::span<const double> ells) {
    config.validate();
    EventResult res;
    res.event = EventKind::heavy_rows;
    std::vector<double> grid = ells.empty() ? default_ells(n) : std::vector<double>(ells.begin(), ells.end());
    bool any_checked = false;
    for (double ell : grid) {
        require(ell >= 1.0, "check_event_R: l must be >= 1");
        if (ell > n / 2.0) continue;
        any_checked = true;
        const double thr = heavy_threshold(n, d, config.beta, ell);
        const double allowed = heavy_allowance(n, d, ell);
        for (bool columns : {false, true}) {
            ++res.trials;
            const std::vector<double> sums = abs_sums(a_t, columns);
            std::vector<std::size_t> heavy;
            for (std::size_t k = 0; k < sums.size(); ++k)
                if (sums[k] > thr) heavy.push_back(k);
            if (static_cast<double>(heavy.size()) > allowed) {
                res.verdict = Verdict::fail;
                res.witness = std::move(heavy);
                res.witness_is_columns = columns;
                res.scale = ell;
                res.detail = columns ? "too many heavy columns" : "too many heavy rows";
                return res;
            }
        }
    }
    if (!any_checked) {
        res.verdict = Verdict::vacuous_pass;
        res.detail = "every l exceeds n/2";
    }
    return res;
}

bool reverify(const ComplexDenseMatrix& a_t, double n, double d, const CertificateConfig& config,
              const EventResult& result) {
    if (result.verdict != Verdict::fail || result.witness.empty()) return false;
    const auto& w = result.witness;
    switch (result.event) {
        case EventKind::unique_expansion: {
            const auto u = unique_neighborhood(a_t, w, config.beta);
            return static_cast<double>(u.size()) < expansion_need(n, d, w.size());
        }
        case EventKind::row_degree: {
            const auto sums = mask_sums(a_t, result.witness_is_columns);
            double total = 0.0;
            for (std::size_t k : w) total += sums.at(k);
            return total / static_cast<double>(w.size()) > degree_bound(n, d, config.B_big_O, w.size());
        }
        case EventKind::large_entries: {
            const auto entries = a_t.entries();
            if (result.scale == 0.0) return std::abs(entries[w.at(0)]) > n * n * n;
            const double thr = 8.0 * result.scale / config.beta;
            for (std::size_t k : w)
                if (!(std::abs(entries[k]) > thr)) return false;
            return static_cast<double>(w.size()) > 2.0 * d * n / (result.scale * result.scale) + std::pow(std::log(n), 2);
        }
        case EventKind::heavy_rows: {
            const auto sums = abs_sums(a_t, result.witness_is_columns);
            const double thr = heavy_threshold(n, d, config.beta, result.scale);
            for (std::size_t k : w)
                if (!(sums.at(k) > thr)) return false;
            return static_cast<double>(w.size()) > heavy_allowance(n, d, result.scale);
        }
    }
    return false;
}

CertificateReport certify(const SparseSample& sample, HalfTime t, std::size_t r, const CertificateConfig& config,
                          bool adjoint) {
    ComplexDenseMatrix a = sample.at_time(t);
    if (adjoint) a = a.adjoint();
    const double n = static_cast<double>(sample.n_rows);
    const double d = sample.d();
    CertificateReport rep;
    rep.unique_expansion = check_event_U_r(a, t, r, n, d, config);
    rep.row_degree = check_event_B(a, n, d, config);
    rep.large_entries = check_event_Q(a, n, d, config.beta);
    rep.heavy_rows = check_event_R(a, n, d, config);
    return rep;
}

void write_certificate_csv_header(std::ostream& out) { out << "seed,n,d,t,r,event,verdict,witness_size,trials\n"; }

void write_certificate_csv_rows(std::ostream& out, std::uint64_t seed, std::size_t n, double d, HalfTime t,
                                std::size_t r, const CertificateReport& report) {
    for (const EventResult* e : {&report.unique_expansion, &report.row_degree, &report.large_entries, &report.heavy_rows})
        out << seed << ',' << n << ',' << csv::num(d) << ',' << csv::num(t.value()) << ',' << r << ','
            << to_string(e->event) << ',' << to_string(e->verdict) << ',' << e->witness.size() << ',' << e->trials
            << '\n';
}

std::size_t lambda_count(std::span<const cplx> v, double x) {
    require(x >= 0.0, "lambda_count: x must be >= 0");
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](cplx c) { return std::abs(c) >= x; }));
}

std::size_t lambda_count_log(std::span<const cplx> v, double log_x) {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](cplx c) {
        const double a = std::abs(c);
        return (a == 0.0 ? kNegInf : std::log(a)) >= log_x;
    }));
}

SpreadVerdict spread_check(const ComplexDenseMatrix& m, cplx z, std::span<const cplx> v, HalfTime t, std::size_t r,
                           const DeltaSchedule& schedule, const CertificateConfig& config) {
    config.validate();
    require(v.size() == m.cols(), "spread_check: v must have length cols(M)");
    SpreadVerdict out;
    const double n = static_cast<double>(schedule.n());
    const double d = schedule.d();
    auto not_applicable = [&](std::string why) {
        out.verdict = Verdict::not_applicable;
        out.reason = std::move(why);
        return out;
    };
    if (d <= std::numbers::e) return not_applicable("d <= e");
    const double az = std::abs(z);
    if (az < 1.0 || az > d) return not_applicable("|z| outside [1, d]");
    if (static_cast<double>(r) > t.value() || static_cast<double>(r) < n * (1.0 - std::pow(d, -0.25)))
        return not_applicable("r outside [n(1 - d^{-1/4}), t]");
    out.k = config.c_star * (static_cast<double>(t.ceil()) - static_cast<double>(r) + 1.0);
    const double log_eta = schedule.log_eta(r);
    const double residual = linalg::norm2(m * v);
    const double log_residual = residual == 0.0 ? kNegInf : std::log(residual);
    if (log_residual > 0.5 * std::log(d) + log_eta) return not_applicable("||M v|| exceeds d^{1/2} eta_r");
    if (static_cast<double>(lambda_count(v, out.k * out.k * std::pow(n, -2.5))) < out.k)
        return not_applicable("fewer than k coordinates above k^2 n^{-5/2}");

    out.required = spread_target(n, d);
    out.count = lambda_count_log(v, log_eta + 0.5 * std::log(d) - 0.5 * std::log(out.k));
    out.margin = static_cast<double>(out.count) - out.required;
    out.verdict = out.margin >= 0.0 ? Verdict::pass : Verdict::fail;

    std::vector<double> star(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) star[i] = std::abs(v[i]);
    std::sort(star.begin(), star.end(), std::greater<>());
    auto log_star = [&](std::size_t k) {
        if (k < 1 || k > star.size() || star[k - 1] == 0.0) return kNegInf;
        return std::log(star[k - 1]);
    };
    const std::size_t k0 = static_cast<std::size_t>(std::max(1.0, std::ceil(out.k)));
    if (static_cast<double>(k0) < n && static_cast<double>(k0) <= out.required) {
        const GrowthSequence seq = g_and_tau(n, d, k0, config.C_prime);
        const double log_delta = 7.0 * std::log(config.beta * out.k / (d * n));
        for (std::size_t i = 1; i < seq.k.size(); ++i) {
            DecayStep step;
            step.k_prev = seq.k[i - 1];
            step.k = seq.k[i];
            const double a = log_star(step.k);
            const double b = log_star(step.k_prev);
            step.log_ratio = (b == kNegInf) ? 0.0 : a - b;
            step.log_bound = log_delta;
            step.holds = b == kNegInf || a >= b + log_delta;
            out.decay.push_back(step);
        }
    }
    return out;
}

}  // namespace sclaw
