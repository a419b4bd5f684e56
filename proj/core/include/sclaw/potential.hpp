#pragma once

// Logarithmic potentials computed from singular values, their truncations, and
// the per-step slack schedule used by the singular-value process.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "sclaw/ensemble.hpp"
#include "sclaw/linalg.hpp"

namespace sclaw {

/// Potential of the uniform measure on the unit disc.
double u_circ(cplx z) noexcept;

/// A potential value; `infinite` is set when a zero singular value entered the sum
/// (the value is then +infinity rather than NaN).
struct PotentialValue {
    double value = 0.0;
    bool infinite = false;
};

/// -(1/n) * sum_{j <= len} log sigma_j.
PotentialValue log_potential(const linalg::SingularSpectrum& spectrum, std::size_t n);
/// -(1/n) * sum_{j <= r} log sigma_j, with sigma_j = 0 for j past the spectrum length.
PotentialValue truncated_potential(const linalg::SingularSpectrum& spectrum, std::size_t r, std::size_t n);

/// Slack added at each accepted step of the process.
double delta_r(std::size_t n, double d, std::size_t r, double c_sched = 1.0);

enum class ScheduleMode {
    formula,
    force_accept,  // delta = +infinity: every comparison passes
    force_reject,  // delta = -infinity: every comparison fails
};

class DeltaSchedule {
public:
    DeltaSchedule(std::size_t n, double d, double c_sched = 1.0, ScheduleMode mode = ScheduleMode::formula);

    std::size_t n() const noexcept { return n_; }
    double d() const noexcept { return d_; }
    double c_sched() const noexcept { return c_sched_; }
    ScheduleMode mode() const noexcept { return mode_; }

    /// First index of the high regime: smallest r with r >= n(1 - d^{-1/4}).
    std::size_t high_regime_start() const noexcept;

    double delta(std::size_t r) const;
    /// log eta_r = -n * delta_r; eta_r itself underflows for most inputs of interest.
    double log_eta(std::size_t r) const;
    double eta(std::size_t r) const;
    /// sum_{r = from}^{to} delta_r (inclusive); 0 when from > to.
    double tail_sum(std::size_t from, std::size_t to) const;

private:
    std::size_t n_;
    double d_;
    double c_sched_;
    ScheduleMode mode_;
};

/// Index bookkeeping shared by the truncated-sum comparison. All fractional
/// indices round down.
struct TruncationIndices {
    std::size_t n = 0;
    std::size_t m = 0;        // floor((1 - eps) n)
    std::size_t top = 0;      // floor((1 - eps/4) m)
    std::size_t shift = 0;    // 2 (n - m): rows plus columns removed from the full matrix
    std::size_t bulk_lo = 0;  // first full-spectrum index of the bulk sum (shift + 1)
    std::size_t bulk_hi = 0;  // last full-spectrum index of the bulk sum (m)
    std::size_t tail_count = 0;  // top - (m - shift): indices bounded by sigma_top of the minor
};

/// Throws ContractViolation when eps is outside [0, 1) or the indices collide (3m < 2n).
TruncationIndices truncation_indices(std::size_t n, double eps);

struct TruncatedPair {
    PotentialValue t1;
    PotentialValue t2;
    TruncationIndices idx;
};

/// T1 uses the top `idx.top` singular values of the full matrix; T2 is the upper
/// bound for the minor's truncated potential obtained by interlacing.
TruncatedPair t1_t2(const linalg::SingularSpectrum& full, const linalg::SingularSpectrum& minor,
                    std::size_t n, double eps);

struct PotentialReport {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t top = 0;
    double d = 0.0;
    double eps = 0.0;
    cplx z{};
    PotentialValue u_n;
    PotentialValue t_n;
    PotentialValue t1;
    PotentialValue t2;
    double u_circ = 0.0;

    bool any_infinite() const noexcept { return u_n.infinite || t_n.infinite || t1.infinite || t2.infinite; }
    /// T_n <= T2 and U_n >= T1 * n / top, each up to `tol`.
    bool sandwich_holds(double tol = 1e-10) const;
};

/// Potentials of d^{-1/2} A - z I for the full sample and its m x m leading minor.
PotentialReport potential_report(const SparseSample& sample, cplx z, double eps);

void write_potential_csv_header(std::ostream& out);
void write_potential_csv_row(std::ostream& out, const PotentialReport& r);

}  // namespace sclaw
