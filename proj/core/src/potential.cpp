#include "sclaw/potential.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "sclaw/csv.hpp"
#include "sclaw/errors.hpp"

namespace sclaw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -(1/n) * sum of log sigma_j for j in [lo, hi] (1-based, inclusive).
PotentialValue neg_log_sum(const linalg::SingularSpectrum& s, std::size_t lo, std::size_t hi, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
        const double v = s.sigma(j);
        if (v == 0.0) return {kInf, true};
        acc += std::log(v);
    }
    return {-acc / static_cast<double>(n), false};
}

}  // namespace

double u_circ(cplx z) noexcept {
    const double r = std::abs(z);
    return r >= 1.0 ? -std::log(r) : (1.0 - r * r) / 2.0;
}

PotentialValue log_potential(const linalg::SingularSpectrum& spectrum, std::size_t n) {
    require(n >= 1, "log_potential: n must be >= 1");
    return neg_log_sum(spectrum, 1, spectrum.size(), n);
}

PotentialValue truncated_potential(const linalg::SingularSpectrum& spectrum, std::size_t r, std::size_t n) {
    require(n >= 1, "truncated_potential: n must be >= 1");
    return neg_log_sum(spectrum, 1, r, n);
}

double delta_r(std::size_t n, double d, std::size_t r, double c_sched) {
    return DeltaSchedule(n, d, c_sched).delta(r);
}

DeltaSchedule::DeltaSchedule(std::size_t n, double d, double c_sched, ScheduleMode mode)
    : n_(n), d_(d), c_sched_(c_sched), mode_(mode) {
    require(n >= 1, "DeltaSchedule: n must be >= 1");
    require(d > 1.0 && std::isfinite(d), "DeltaSchedule: d must be > 1");
    require(c_sched > 0.0 && std::isfinite(c_sched), "DeltaSchedule: C_sched must be positive");
}

std::size_t DeltaSchedule::high_regime_start() const noexcept {
    const double x = static_cast<double>(n_) * (1.0 - std::pow(d_, -0.25));
    return static_cast<std::size_t>(std::max(1.0, std::ceil(x)));
}

double DeltaSchedule::delta(std::size_t r) const {
    require(r >= 1 && r <= n_, "delta_r: need 1 <= r <= n");
    if (mode_ == ScheduleMode::force_accept) return kInf;
    if (mode_ == ScheduleMode::force_reject) return -kInf;
    const double nn = static_cast<double>(n_);
    const double l = std::log(nn / static_cast<double>(n_ - r + 1));
    if (r < high_regime_start()) return l * l / nn;
    return c_sched_ * std::pow(std::log(d_), 8) * std::pow(l, 8) / nn;
}

double DeltaSchedule::log_eta(std::size_t r) const { return -static_cast<double>(n_) * delta(r); }

double DeltaSchedule::eta(std::size_t r) const { return std::exp(log_eta(r)); }

double DeltaSchedule::tail_sum(std::size_t from, std::size_t to) const {
    double acc = 0.0;
    for (std::size_t r = std::max<std::size_t>(from, 1); r <= to && r <= n_; ++r) acc += delta(r);
    return acc;
}

TruncationIndices truncation_indices(std::size_t n, double eps) {
    require(n >= 1, "truncation_indices: n must be >= 1");
    require(eps >= 0.0 && eps < 1.0, "truncation_indices: eps must lie in [0, 1)");
    TruncationIndices t;
    t.n = n;
    t.m = static_cast<std::size_t>(std::floor((1.0 - eps) * static_cast<double>(n)));
    t.top = static_cast<std::size_t>(std::floor((1.0 - eps / 4.0) * static_cast<double>(t.m)));
    require(t.m >= 1 && t.top >= 1, "truncation_indices: eps too large for n (empty minor)");
    t.shift = 2 * (n - t.m);
    require(t.m >= t.shift,
            "truncation_indices: index collision, 2(n - m) = " + std::to_string(t.shift) + " exceeds m = " +
                std::to_string(t.m) + "; decrease eps or increase n");
    t.bulk_lo = t.shift + 1;
    t.bulk_hi = t.m;
    require(t.top >= t.m - t.shift, "truncation_indices: truncation index below the interlacing range");
    t.tail_count = t.top - (t.m - t.shift);
    return t;
}

TruncatedPair t1_t2(const linalg::SingularSpectrum& full, const linalg::SingularSpectrum& minor, std::size_t n,
                    double eps) {
    const TruncationIndices idx = truncation_indices(n, eps);
    require(full.size() == n, "t1_t2: full spectrum must have length n");
    require(minor.size() == idx.m, "t1_t2: minor spectrum must have length m = floor((1-eps)n)");
    TruncatedPair out;
    out.idx = idx;
    out.t1 = neg_log_sum(full, 1, idx.top, n);
    PotentialValue bulk = neg_log_sum(full, idx.bulk_lo, idx.bulk_hi, n);
    if (idx.tail_count > 0) {
        const double s = minor.sigma(idx.top);
        if (s == 0.0) {
            bulk = {kInf, true};
        } else if (!bulk.infinite) {
            bulk.value -= static_cast<double>(idx.tail_count) / static_cast<double>(n) * std::log(s);
        }
    }
    out.t2 = bulk;
    return out;
}

bool PotentialReport::sandwich_holds(double tol) const {
    const bool upper = t_n.infinite ? t2.infinite : (t2.infinite || t_n.value <= t2.value + tol);
    bool lower = true;
    if (!t1.infinite) {
        const double scaled = t1.value * static_cast<double>(n) / static_cast<double>(top);
        lower = u_n.infinite || u_n.value >= scaled - tol;
    } else {
        lower = u_n.infinite;
    }
    return upper && lower;
}

PotentialReport potential_report(const SparseSample& sample, cplx z, double eps) {
    require(sample.n_rows == sample.n_cols, "potential_report: sample must be square");
    const std::size_t n = sample.n_rows;
    const TruncationIndices idx = truncation_indices(n, eps);
    const double d = sample.d();
    const ShiftSpec spec{z, ScaleMode::rescaled, d};
    const auto full = linalg::svd(shift_and_scale(sample.to_dense(), spec));
    const auto minor = linalg::svd(shift_and_scale(sample.leading_block(idx.m, idx.m), spec));

    PotentialReport r;
    r.seed = sample.seed;
    r.n = n;
    r.m = idx.m;
    r.top = idx.top;
    r.d = d;
    r.eps = eps;
    r.z = z;
    r.u_n = log_potential(full, n);
    r.t_n = truncated_potential(minor, idx.top, n);
    const TruncatedPair pair = t1_t2(full, minor, n, eps);
    r.t1 = pair.t1;
    r.t2 = pair.t2;
    r.u_circ = u_circ(z);
    return r;
}

void write_potential_csv_header(std::ostream& out) {
    out << "seed,n,d,eps,z_re,z_im,U_n,T_n,T1,T2,U_circ,inf_flag\n";
}

void write_potential_csv_row(std::ostream& out, const PotentialReport& r) {
    out << r.seed << ',' << r.n << ',' << csv::num(r.d) << ',' << csv::num(r.eps) << ',' << csv::num(r.z.real())
        << ',' << csv::num(r.z.imag()) << ',' << csv::num(r.u_n.value) << ',' << csv::num(r.t_n.value) << ','
        << csv::num(r.t1.value) << ',' << csv::num(r.t2.value) << ',' << csv::num(r.u_circ) << ','
        << csv::flag(r.any_infinite()) << '\n';
}

}  // namespace sclaw
