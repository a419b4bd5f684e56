#include "sclaw/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "json.hpp"
#include "sclaw/csv.hpp"
#include "sclaw/errors.hpp"

namespace sclaw {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double value_of(const PotentialValue& v) { return v.infinite ? kInf : v.value; }

// JSON has no infinities; non-finite values go out as their CSV spelling.
json number(double v) {
    if (std::isfinite(v)) return v;
    return csv::num(v);
}

}  // namespace

std::string to_string(StepKind k) {
    switch (k) {
        case StepKind::init: return "init";
        case StepKind::column: return "col";
        case StepKind::row: return "row";
    }
    return "unknown";
}

void ProcessConfig::validate() const {
    require(eps > 0.0 && eps < 1.0, "process: eps must lie in (0, 1)");
    require(c_sched > 0.0, "process: C_sched must be positive");
    require(certificate_divisor > 0.0, "process: certificate divisor must be positive");
    certificates.validate();
}

ProcessState::ProcessState(const ProcessParams& params)
    : params_(params),
      schedule_(params.n, params.p * static_cast<double>(params.n), params.config.c_sched,
                params.config.schedule_mode) {
    params_.config.validate();
    require(params.n >= 2, "process: n must be >= 2");
    require(params.p > 0.0 && params.p <= 0.5, "process: p must lie in (0, 1/2]");
    require(params.z != cplx{}, "process: z must be nonzero");
    const TruncationIndices idx = truncation_indices(params.n, params.config.eps);
    m_ = idx.m;
    require(m_ < params.n, "process: eps too small for n, the run would have no steps");
    d_ = params.p * static_cast<double>(params.n);
    t_ = HalfTime::integer(static_cast<long long>(m_));
    r_ = idx.top;
    block_ = sample_matrix(m_, m_, params.p, params.xi, params.seed, Precondition::relaxed).to_dense();
    refresh_spectrum();
    t_value_ = value_of(truncated_potential(spectrum_, r_, params.n));
}

ComplexDenseMatrix ProcessState::shifted() const {
    return shift_and_scale(block_, {params_.z, ScaleMode::rescaled, d_});
}

void ProcessState::refresh_spectrum() { spectrum_ = linalg::svd(shifted()); }

std::string ProcessState::certificate_verdict(bool& required) const {
    const double n = static_cast<double>(params_.n);
    required = h_star() >= std::floor((n - t_.value()) / params_.config.certificate_divisor);
    if (!params_.config.log_certificates) return "";
    const std::size_t r = r_ + 1;
    if (static_cast<double>(r) < t_.value() - n / std::pow(d_, 0.25) || r > static_cast<std::size_t>(t_.ceil()) ||
        d_ <= std::numbers::e)
        return to_string(Verdict::not_applicable);
    // Adding a column is adding a row to the adjoint.
    const ComplexDenseMatrix a = t_.is_integral() ? block_.adjoint() : block_;
    const auto& cfg = params_.config.certificates;
    const bool ok = passed(check_event_U_r(a, t_, r, n, d_, cfg).verdict) &&
                    passed(check_event_B(a, n, d_, cfg).verdict) &&
                    passed(check_event_Q(a, n, d_, cfg.beta).verdict) &&
                    passed(check_event_R(a, n, d_, cfg).verdict);
    return to_string(ok ? Verdict::pass : Verdict::fail);
}

StepRecord ProcessState::initial_record() const {
    StepRecord rec;
    rec.t = t_;
    rec.r = r_;
    rec.h = h();
    rec.h_star = h_star();
    rec.kind = StepKind::init;
    rec.sigma_r = spectrum_.sigma(r_);
    rec.t_value = t_value_;
    rec.previous_t_value = t_value_;
    rec.stay_value = t_value_;
    return rec;
}

StepRecord ProcessState::step() {
    require(!done(), "process: already at t = n");
    StepRecord rec;
    rec.certificate = certificate_verdict(rec.certificate_required);
    const std::size_t old_r = r_;
    const double old_value = t_value_;
    const auto rows = static_cast<std::size_t>(t_.floor());
    const auto cols = static_cast<std::size_t>(t_.ceil());

    if (t_.is_integral()) {
        const auto col = sample_col(rows, params_.p, params_.xi, params_.seed, cols, Domain::matrix_entry,
                                    Precondition::relaxed);
        block_ = block_.with_column(col);
        rec.kind = StepKind::column;
    } else {
        const auto row = sample_row(cols, params_.p, params_.xi, params_.seed, rows, Domain::matrix_entry,
                                    Precondition::relaxed);
        block_ = block_.with_row(row);
        rec.kind = StepKind::row;
    }
    t_ = t_.next();
    refresh_spectrum();

    const double delta = schedule_.delta(old_r + 1);
    const PotentialValue candidate = truncated_potential(spectrum_, old_r + 1, params_.n);
    const PotentialValue stay = truncated_potential(spectrum_, old_r, params_.n);
    rec.eligible = old_r + 1 <= spectrum_.size();
    rec.accepted = rec.eligible && !candidate.infinite && candidate.value <= old_value + delta;
    r_ = rec.accepted ? old_r + 1 : old_r;
    t_value_ = rec.accepted ? candidate.value : value_of(stay);

    rec.t = t_;
    rec.r = r_;
    rec.h = h();
    rec.h_star = h_star();
    rec.delta_used = delta;
    rec.sigma_r = spectrum_.sigma(r_);
    rec.t_value = t_value_;
    rec.previous_t_value = old_value;
    rec.stay_value = value_of(stay);
    return rec;
}

ProcessTrace run_process(const ProcessParams& params) {
    ProcessState state(params);
    ProcessTrace trace;
    trace.params = params;
    trace.m = state.m();
    trace.d = state.d();
    trace.records.push_back(state.initial_record());
    auto& s = trace.summary;
    s.t_n = state.t_value();
    s.outside_regime = std::abs(params.z) < std::pow(trace.d, -0.5) || std::abs(params.z) > std::pow(trace.d, 0.5);
    try {
        while (!state.done()) trace.records.push_back(state.step());
    } catch (const NumericFailure& e) {
        trace.failure = e.what();
    }
    for (const auto& rec : trace.records) {
        if (rec.kind == StepKind::init) continue;
        s.eligible_steps += rec.eligible;
        if (rec.accepted) {
            ++s.accepted_steps;
            s.sum_delta += rec.delta_used;
        }
    }
    s.acceptance_frequency =
        s.eligible_steps == 0 ? 0.0 : static_cast<double>(s.accepted_steps) / static_cast<double>(s.eligible_steps);
    s.h_n = state.h();
    const PotentialValue u = log_potential(state.spectrum(), params.n);
    s.u_n = value_of(u);
    s.u_n_infinite = u.infinite;
    s.chain_slack = (!trace.failure && s.h_n == 0.0) ? s.t_n + s.sum_delta - s.u_n : kNaN;
    return trace;
}

void ProcessTrace::write_csv(std::ostream& out) const {
    out << "t,r,h_star,accepted,step_kind,delta_used,sigma_r,T_value,cert\n";
    for (const auto& r : records)
        out << csv::num(r.t.value()) << ',' << r.r << ',' << csv::num(r.h_star) << ',' << csv::flag(r.accepted) << ','
            << to_string(r.kind) << ',' << csv::num(r.delta_used) << ',' << csv::num(r.sigma_r) << ','
            << csv::num(r.t_value) << ',' << r.certificate << '\n';
    json j = {{"n", params.n},
              {"m", m},
              {"d", number(d)},
              {"eps", number(params.config.eps)},
              {"seed", params.seed},
              {"z_re", number(params.z.real())},
              {"z_im", number(params.z.imag())},
              {"h_n", number(summary.h_n)},
              {"U_n", number(summary.u_n)},
              {"T_n", number(summary.t_n)},
              {"sum_delta", number(summary.sum_delta)},
              {"chain_slack", number(summary.chain_slack)},
              {"eligible_steps", summary.eligible_steps},
              {"accepted_steps", summary.accepted_steps},
              {"acceptance_frequency", number(summary.acceptance_frequency)},
              {"outside_regime", summary.outside_regime},
              {"failure", failure ? json(*failure) : json(nullptr)}};
    out << "# summary " << j.dump() << '\n';
}

ChainReplay replay_chain(const ProcessTrace& trace, double tol) {
    ChainReplay out;
    out.worst_violation = -kInf;
    for (const auto& rec : trace.records) {
        if (rec.kind == StepKind::init) continue;
        ++out.steps_checked;
        const double before = rec.previous_t_value;
        if (std::isinf(before)) continue;
        // Accepted: T_{r+1,t+1/2} <= T_{r,t} + delta. Otherwise interlacing gives T_{r,t+1/2} <= T_{r,t}.
        const double bound = rec.accepted ? before + rec.delta_used : before;
        const double excess = rec.t_value - bound;
        out.worst_violation = std::max(out.worst_violation, excess / std::max(1.0, std::abs(before)));
    }
    if (out.steps_checked == 0) out.worst_violation = 0.0;
    out.holds = out.worst_violation <= tol;
    return out;
}

double interlacing_check(const ComplexDenseMatrix& m, const ComplexDenseMatrix& m_plus_row) {
    require(m_plus_row.rows() == m.rows() + 1 && m_plus_row.cols() == m.cols(),
            "interlacing_check: second matrix must have exactly one more row");
    require(m_plus_row.block(0, 0, m.rows(), m.cols()) == m, "interlacing_check: second matrix must extend the first");
    const auto a = linalg::svd(m);
    const auto b = linalg::svd(m_plus_row);
    const std::size_t k = m.cols();
    const double scale = std::max(b.sigma(1), std::numeric_limits<double>::min());
    double worst = -kInf;
    for (std::size_t i = 1; i <= k; ++i) {
        worst = std::max(worst, (a.sigma(i) - b.sigma(i)) / scale);
        if (i < k) worst = std::max(worst, (b.sigma(i + 1) - a.sigma(i)) / scale);
    }
    return k == 0 ? 0.0 : worst;
}

WalkRowBound walk_row_bound_check(const ComplexDenseMatrix& m, std::span<const cplx> x, std::size_t r) {
    require(r < m.cols(), "walk_row_bound_check: need r < number of columns");
    require(x.size() == m.cols(), "walk_row_bound_check: row length must equal the number of columns");
    const auto grown = linalg::svd(m.with_row(x));
    const auto base = linalg::svd(m);
    std::vector<cplx> xh(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xh[i] = std::conj(x[i]);
    const double proj = linalg::small_singular_projection_norm(m, m.cols() - r, xh).value;
    WalkRowBound out;
    out.lhs = 1.0;
    for (std::size_t i = 1; i <= r + 1; ++i) out.lhs *= grown.sigma(i);
    out.rhs = proj;
    for (std::size_t i = 1; i <= r; ++i) out.rhs *= base.sigma(i);
    out.margin = out.lhs - out.rhs;
    out.holds = out.lhs >= out.rhs * (1.0 - 1e-9);
    return out;
}

}  // namespace sclaw
