#pragma once

// The incremental singular-value process: starting from the leading m x m block,
// columns and rows are appended alternately up to n x n, and at each half-step one
// more singular value is taken into the running truncated sum when the acceptance
// inequality allows it. Also: the linear-algebra facts the process relies on, and
// the abstract drift walk that models its height.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sclaw/ensemble.hpp"
#include "sclaw/half_time.hpp"
#include "sclaw/linalg.hpp"
#include "sclaw/potential.hpp"
#include "sclaw/quasirandom.hpp"

namespace sclaw {

enum class StepKind { init, column, row };
std::string to_string(StepKind k);

struct ProcessConfig {
    double eps = 0.1;
    double c_sched = 1.0;
    ScheduleMode schedule_mode = ScheduleMode::formula;
    /// Log certificate verdicts for the block that the next step exposes.
    bool log_certificates = false;
    CertificateConfig certificates;
    /// Certificates only matter while h* >= floor((n - t) / divisor).
    double certificate_divisor = 8.0;

    void validate() const;
};

struct ProcessParams {
    std::size_t n = 0;
    double p = 0.0;
    XiSpec xi;
    cplx z{1.0, 0.0};
    std::uint64_t seed = 0;
    ProcessConfig config;
};

struct StepRecord {
    HalfTime t;
    std::size_t r = 0;
    double h = 0.0;
    double h_star = 0.0;
    bool accepted = false;
    /// r + 1 did not exceed the number of singular values of the new block.
    bool eligible = false;
    StepKind kind = StepKind::init;
    /// delta_{r_old + 1} used in the comparison (0 for the initial record).
    double delta_used = 0.0;
    /// sigma_r of the current rescaled shifted block.
    double sigma_r = 0.0;
    /// T_{r,t}: -(1/n) sum_{j <= r} log sigma_j of the current block.
    double t_value = 0.0;
    /// T_{r_old, t_old}, the running value before the step; kept so replays need no recomputation.
    double previous_t_value = 0.0;
    /// T_{r_old, t} on the new block: the candidate without the extra value.
    double stay_value = 0.0;
    /// pass / fail / not-applicable / "" when certificates are off.
    std::string certificate;
    bool certificate_required = false;
};

struct ProcessSummary {
    double h_n = 0.0;
    double u_n = 0.0;
    double t_n = 0.0;
    bool u_n_infinite = false;
    double sum_delta = 0.0;
    /// T_n + sum of deltas - U_n; NaN when h(n) != 0.
    double chain_slack = 0.0;
    std::size_t eligible_steps = 0;
    std::size_t accepted_steps = 0;
    double acceptance_frequency = 0.0;
    /// |z| lies outside [d^{-1/2}, d^{1/2}].
    bool outside_regime = false;
};

struct ProcessTrace {
    ProcessParams params;
    std::size_t m = 0;
    double d = 0.0;
    std::vector<StepRecord> records;
    ProcessSummary summary;
    /// Set when a numeric failure stopped the run; records hold everything up to it.
    std::optional<std::string> failure;

    void write_csv(std::ostream& out) const;
};

/// Mutable state of one run. The raw block grows by vectors drawn from the matrix
/// stream, so every block equals the corresponding leading block of sample_matrix.
class ProcessState {
public:
    ProcessState(const ProcessParams& params);

    HalfTime t() const noexcept { return t_; }
    std::size_t r() const noexcept { return r_; }
    double h() const noexcept { return t_.value() - static_cast<double>(r_); }
    double h_star() const noexcept { return h() == 0.5 ? 0.0 : h(); }
    const ComplexDenseMatrix& block() const noexcept { return block_; }
    const linalg::SingularSpectrum& spectrum() const noexcept { return spectrum_; }
    const DeltaSchedule& schedule() const noexcept { return schedule_; }
    double t_value() const noexcept { return t_value_; }
    std::size_t n() const noexcept { return params_.n; }
    std::size_t m() const noexcept { return m_; }
    double d() const noexcept { return d_; }
    bool done() const noexcept { return t_ == HalfTime::integer(static_cast<long long>(params_.n)); }

    StepRecord initial_record() const;
    /// Appends a column (integer t) or a row (half-integer t) and applies the acceptance rule.
    StepRecord step();

private:
    ComplexDenseMatrix shifted() const;
    void refresh_spectrum();
    std::string certificate_verdict(bool& required) const;

    ProcessParams params_;
    DeltaSchedule schedule_;
    std::size_t m_ = 0;
    double d_ = 0.0;
    HalfTime t_;
    std::size_t r_ = 0;
    ComplexDenseMatrix block_;
    linalg::SingularSpectrum spectrum_;
    double t_value_ = 0.0;
};

ProcessTrace run_process(const ProcessParams& params);

/// Recheck every step of a trace from its recorded values: accepted steps satisfy
/// the acceptance inequality, other steps did not increase T. Violations are
/// measured relative to max(1, |T|).
struct ChainReplay {
    std::size_t steps_checked = 0;
    double worst_violation = 0.0;
    bool holds = false;
};
ChainReplay replay_chain(const ProcessTrace& trace, double tol = 1e-10);

/// Cauchy interlacing for appending one row: the worst signed violation relative to
/// sigma_1 of the larger matrix (<= 0 when interlacing holds).
double interlacing_check(const ComplexDenseMatrix& m, const ComplexDenseMatrix& m_plus_row);

struct WalkRowBound {
    double lhs = 0.0;     // prod_{i <= r+1} sigma_i(M')
    double rhs = 0.0;     // ||P X^H|| prod_{i <= r} sigma_i(M)
    double margin = 0.0;  // lhs - rhs
    bool holds = false;   // lhs >= rhs (1 - 1e-9)
};
/// M is n x m, X a row of length m, r < m; P projects onto the m - r smallest right-singular directions.
WalkRowBound walk_row_bound_check(const ComplexDenseMatrix& m, std::span<const cplx> x, std::size_t r);

// ---------------------------------------------------------------------------
// Drift walk

/// What an adversary sees. Heights are stored doubled (Y = twice / 2).
struct WalkView {
    std::size_t s = 0;
    std::size_t horizon = 0;
    long long twice_y = 0;
    bool forced = false;  // the step is the adversary's because the good branch failed
};

/// Returns the move in half units; must be <= 2 and keep the height >= 0.
using WalkPolicy = std::function<long long(const WalkView&, StreamRng&)>;

enum class WalkAdversary { always_up, random, stay };
WalkPolicy make_policy(WalkAdversary a);
WalkAdversary adversary_from_name(const std::string& name);
std::string to_string(WalkAdversary a);

struct DriftWalkParams {
    std::size_t horizon = 200;
    double q = 0.0;
    double y0 = 25.0;
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
    double divisor = 16.0;
};

struct DriftWalkResult {
    std::size_t trials = 0;
    double p_zero = 0.0;
    double p_zero_std_error = 0.0;
    double guaranteed_floor = 0.0;   // 1 - 4 q^{1/8}
    double mean_z_final = 0.0;  // empirical E[Z_T]
    double z_std_error = 0.0;
    double max_mean_z = 0.0;    // max over s of the empirical E[Z_s]
};

DriftWalkResult simulate_drift_walk(const DriftWalkParams& params, const WalkPolicy& policy);

}  // namespace sclaw
