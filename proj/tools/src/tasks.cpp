#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "sclaw/anticonc.hpp"
#include "sclaw/csv.hpp"
#include "sclaw/driver.hpp"
#include "sclaw/lawcheck.hpp"
#include "sclaw/potential.hpp"
#include "sclaw/process.hpp"
#include "sclaw/quasirandom.hpp"

namespace sclaw::driver {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double value_of(const PotentialValue& v) { return v.infinite ? INFINITY : v.value; }

SparseSample sample_for(const Task& task) {
    const auto& t = task.params;
    const Precondition pre = t.p > 0.5 ? Precondition::relaxed : Precondition::enforce;
    return sample_matrix(t.n, t.n, t.p, t.xi, task.stream_seed, pre);
}

void run_law(const ExperimentConfig& cfg, const Task& task, TaskResult& out) {
    const auto sample = sample_for(task);
    PotentialReport pot;
    LawRow row = law_row(sample, task.params.z, task.params.eps, cfg.options.esd, &pot);
    row.seed = task.seed;
    std::ostringstream s;
    write_law_csv_row(s, row);
    out.rows["law.csv"] = s.str();
    out.deviation = std::abs(row.t1_dev);
    out.margin = 1.0 - row.hs_ratio;
    if (!pot.sandwich_holds()) {
        out.status = TaskStatus::fail;
        out.message = "truncated potentials violate the interlacing sandwich";
    }
}

void run_potential(const ExperimentConfig&, const Task& task, TaskResult& out) {
    PotentialReport rep = potential_report(sample_for(task), task.params.z, task.params.eps);
    rep.seed = task.seed;
    std::ostringstream s;
    write_potential_csv_row(s, rep);
    out.rows["potential.csv"] = s.str();
    out.deviation = std::abs(value_of(rep.t1) - rep.u_circ);
    const double scaled = value_of(rep.t1) * static_cast<double>(rep.n) / static_cast<double>(rep.top);
    out.margin = std::min(value_of(rep.t2) - value_of(rep.t_n), value_of(rep.u_n) - scaled);
    if (rep.any_infinite()) out.margin = kNaN;
    if (!rep.sandwich_holds()) {
        out.status = TaskStatus::fail;
        out.message = "sandwich inequality violated";
    }
}

void run_process_task(const ExperimentConfig& cfg, const Task& task, TaskResult& out) {
    const auto& t = task.params;
    ProcessParams params;
    params.n = t.n;
    params.p = t.p;
    params.xi = t.xi;
    params.z = t.z;
    params.seed = task.stream_seed;
    params.config.eps = t.eps;
    params.config.c_sched = t.c_sched;
    params.config.schedule_mode = cfg.options.schedule == "force-accept"   ? ScheduleMode::force_accept
                                  : cfg.options.schedule == "force-reject" ? ScheduleMode::force_reject
                                                                           : ScheduleMode::formula;
    params.config.log_certificates = cfg.options.certificates;
    params.config.certificates.c_star = t.c_star;
    params.config.certificates.C_prime = t.c_prime;
    params.config.certificates.seed = task.stream_seed;
    const ProcessTrace trace = run_process(params);
    const ChainReplay replay = replay_chain(trace);
    const auto& s = trace.summary;
    if (cfg.options.traces) {
        std::ostringstream f;
        trace.write_csv(f);
        out.files["traces/task_" + std::to_string(task.index) + ".csv"] = f.str();
    }
    std::ostringstream row;
    row << task.seed << ',' << t.n << ',' << csv::num(trace.d) << ',' << csv::num(t.eps) << ','
        << csv::num(t.z.real()) << ',' << csv::num(t.z.imag()) << ',' << csv::num(s.h_n) << ',' << csv::num(s.u_n)
        << ',' << csv::num(s.t_n) << ',' << csv::num(s.sum_delta) << ',' << csv::num(s.chain_slack) << ','
        << csv::num(s.acceptance_frequency) << ',' << csv::flag(replay.holds) << '\n';
    out.rows["process.csv"] = row.str();
    out.deviation = s.h_n;
    out.margin = s.chain_slack;
    if (trace.failure) {
        out.status = TaskStatus::error;
        out.message = *trace.failure;
    } else if (!replay.holds) {
        out.status = TaskStatus::fail;
        out.message = "an accepted step violates the acceptance inequality";
    } else if (s.h_n == 0.0 && !(s.chain_slack >= -1e-9)) {
        out.status = TaskStatus::fail;
        out.message = "chain inequality slack below -1e-9";
    }
}

void run_certify(const ExperimentConfig& cfg, const Task& task, TaskResult& out) {
    const auto& t = task.params;
    const auto sample = sample_for(task);
    CertificateConfig cc;
    cc.c_star = t.c_star;
    cc.C_prime = t.c_prime;
    cc.B_big_O = cfg.options.b_big_o;
    cc.beta = cfg.options.beta ? *cfg.options.beta : beta_of_xi(t.xi);
    cc.subset_trials = cfg.options.subset_trials;
    cc.seed = task.stream_seed;
    const HalfTime time = HalfTime::integer(static_cast<long long>(t.n));
    const std::size_t r = t.n - cfg.options.r_gap;
    const CertificateReport rep = certify(sample, time, r, cc);
    std::ostringstream s;
    write_certificate_csv_rows(s, task.seed, t.n, t.d(), time, r, rep);
    out.rows["certify.csv"] = s.str();
    out.deviation = out.margin = kNaN;
    const ComplexDenseMatrix a = sample.to_dense();
    int passed_events = 0;
    for (const EventResult* e : {&rep.unique_expansion, &rep.row_degree, &rep.large_entries, &rep.heavy_rows}) {
        if (passed(e->verdict)) {
            ++passed_events;
        } else if (e->verdict == Verdict::fail && !reverify(a, static_cast<double>(t.n), t.d(), cc, *e)) {
            out.status = TaskStatus::fail;
            out.message = "failure witness for " + to_string(e->event) + " does not reverify";
        }
    }
    if (out.message.empty()) out.message = std::to_string(passed_events) + "/4 events passed";
}

void run_anticonc(const ExperimentConfig& cfg, const Task& task, TaskResult& out) {
    const auto& t = task.params;
    const auto sample = sample_for(task);
    const HalfTime time = HalfTime::integer(static_cast<long long>(t.n));
    const std::size_t r = t.n - cfg.options.r_gap;
    const std::vector<cplx> w(t.n);
    const DeltaSchedule schedule(t.n, t.d(), t.c_sched);
    ProjExperimentOptions po;
    po.trials = cfg.options.trials;
    po.eps = t.eps;
    po.log_threshold_override = cfg.options.log_threshold;
    ProjExperimentResult res = proj_anticonc_experiment(sample, time, r, t.z, w, schedule, po);
    res.seed = task.seed;
    std::ostringstream s;
    write_anticonc_csv_row(s, res);
    out.rows["anticonc.csv"] = s.str();
    out.deviation = res.freq;
    out.margin = res.bound_shape_value - res.freq;
    if (!(res.freq >= 0.0 && res.freq <= 1.0)) {
        out.status = TaskStatus::fail;
        out.message = "frequency outside [0, 1]";
    }
}

void run_walk(const ExperimentConfig& cfg, const Task& task, TaskResult& out) {
    const auto& t = task.params;
    DriftWalkParams wp;
    wp.horizon = cfg.options.horizon;
    wp.q = t.q;
    wp.y0 = cfg.options.y0;
    wp.trials = cfg.options.trials;
    wp.seed = task.stream_seed;
    wp.divisor = cfg.options.divisor;
    const auto res = simulate_drift_walk(wp, make_policy(adversary_from_name(t.adversary)));
    std::ostringstream s;
    s << task.seed << ',' << wp.horizon << ',' << csv::num(wp.q) << ',' << csv::num(wp.y0) << ',' << t.adversary << ','
      << res.trials << ',' << csv::num(res.p_zero) << ',' << csv::num(res.guaranteed_floor) << ','
      << csv::num(res.mean_z_final) << ',' << csv::num(res.z_std_error) << '\n';
    out.rows["walk.csv"] = s.str();
    out.deviation = 1.0 - res.p_zero;
    out.margin = res.p_zero - res.guaranteed_floor;
    if (res.p_zero < res.guaranteed_floor) {
        out.status = TaskStatus::fail;
        out.message = "P(Y_T = 0) below the guaranteed floor";
    } else if (t.q > 0.0 && t.q <= std::pow(2.0, -16) && res.mean_z_final > 4.0 + 3.0 * res.z_std_error) {
        out.status = TaskStatus::fail;
        out.message = "E[Z_T] above 4 + 3 sigma";
    }
}

}  // namespace

std::string to_string(TaskStatus s) {
    switch (s) {
        case TaskStatus::pass: return "pass";
        case TaskStatus::fail: return "fail";
        case TaskStatus::error: return "error";
    }
    return "unknown";
}

std::map<std::string, std::string> csv_headers(ExperimentKind kind) {
    std::ostringstream s;
    switch (kind) {
        case ExperimentKind::law: write_law_csv_header(s); return {{"law.csv", s.str()}};
        case ExperimentKind::potential: write_potential_csv_header(s); return {{"potential.csv", s.str()}};
        case ExperimentKind::certify: write_certificate_csv_header(s); return {{"certify.csv", s.str()}};
        case ExperimentKind::anticonc: write_anticonc_csv_header(s); return {{"anticonc.csv", s.str()}};
        case ExperimentKind::process:
            return {{"process.csv",
                     "seed,n,d,eps,z_re,z_im,h_n,U_n,T_n,sum_delta,chain_slack,acceptance_frequency,replay_ok\n"}};
        case ExperimentKind::walk:
            return {{"walk.csv", "seed,horizon,q,y0,adversary,trials,p_zero,guaranteed_floor,mean_Z_T,Z_T_std_error\n"}};
    }
    return {};
}

TaskResult run_task(const ExperimentConfig& config, const Task& task) {
    TaskResult out;
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (config.kind) {
            case ExperimentKind::law: run_law(config, task, out); break;
            case ExperimentKind::potential: run_potential(config, task, out); break;
            case ExperimentKind::process: run_process_task(config, task, out); break;
            case ExperimentKind::certify: run_certify(config, task, out); break;
            case ExperimentKind::anticonc: run_anticonc(config, task, out); break;
            case ExperimentKind::walk: run_walk(config, task, out); break;
        }
    } catch (const std::exception& e) {
        out = TaskResult{};
        out.status = TaskStatus::error;
        out.message = e.what();
        out.deviation = out.margin = kNaN;
    }
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace sclaw::driver
