#pragma once

// Experiment driver: YAML configs expanded into (parameter tuple, seed) tasks, run on
// a fixed worker pool, with CSV reports and a JSON manifest per run.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sclaw/ensemble.hpp"

namespace sclaw::driver {

inline constexpr const char* kVersion = "0.3.0";

/// Exit codes of the command line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { law, process, certify, anticonc, walk, potential };
std::string to_string(ExperimentKind k);
ExperimentKind kind_from_name(const std::string& name);

/// One point of the parameter grid. Fields a kind does not use keep their defaults.
struct ParamTuple {
    std::size_t n = 0;
    double p = 0.0;  // d / n when the grid was given in d
    double eps = 0.1;
    cplx z{1.0, 0.0};
    XiSpec xi = XiSpec::rademacher();
    double c_sched = 1.0;
    double c_star = 0.25;
    double c_prime = 8.0;
    double q = 0.0;               // walk
    std::string adversary = "always-up";  // walk

    double d() const noexcept { return p * static_cast<double>(n); }
};

/// Kind-specific scalar settings from the `options` section.
struct Options {
    bool esd = true;                    // law
    bool certificates = false;          // process
    std::string schedule = "formula";   // process
    bool traces = true;                 // process
    std::size_t r_gap = 2;              // certify, anticonc: r = n - r_gap
    std::size_t subset_trials = 200;    // certify
    double b_big_o = 4.0;               // certify
    std::optional<double> beta;         // certify; calibrated from xi when absent
    std::size_t trials = 1000;          // anticonc (rows), walk (paths)
    std::optional<double> log_threshold;  // anticonc
    std::size_t horizon = 200;          // walk
    double y0 = 25.0;                   // walk
    double divisor = 16.0;              // walk
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::law;
    std::vector<ParamTuple> grid;  // cartesian product, first key outermost
    std::vector<std::uint64_t> seeds;
    std::optional<std::string> output;
    std::optional<std::size_t> jobs;
    Options options;
    /// Canonical JSON of the parsed config; its hash is the config digest.
    std::string canonical;
};

/// Parses and validates; throws ConfigError before any work is done.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct Task {
    std::size_t index = 0;
    std::size_t tuple_index = 0;
    ParamTuple params;
    std::uint64_t seed = 0;         // as listed in the config
    std::uint64_t stream_seed = 0;  // derived from the tuple and seed; feeds every sampler
};

/// Tuples outermost, seeds innermost.
std::vector<Task> expand(const ExperimentConfig& config);

/// Canonical "key=value|..." string of a tuple as used by the stream hash.
std::string tuple_key(ExperimentKind kind, const ParamTuple& t);
/// stream_key(seed, Domain::task, fnv1a64(tuple_key), 0).
std::uint64_t derive_stream_seed(ExperimentKind kind, const ParamTuple& t, std::uint64_t seed);

enum class TaskStatus { pass, fail, error };
std::string to_string(TaskStatus s);

struct TaskResult {
    TaskStatus status = TaskStatus::pass;
    std::string message;
    /// Output file name -> CSV rows (no header) contributed by this task.
    std::map<std::string, std::string> rows;
    /// Extra whole files (e.g. per-task traces): relative path -> contents.
    std::map<std::string, std::string> files;
    double deviation = 0.0;  // kind-specific headline deviation, NaN when not applicable
    double margin = 0.0;     // smallest bound margin (>= 0 means satisfied), NaN when not applicable
    double wall_ms = 0.0;
};

TaskResult run_task(const ExperimentConfig& config, const Task& task);

/// CSV header for each output file of a kind.
std::map<std::string, std::string> csv_headers(ExperimentKind kind);

/// SCLAW_JOBS if set to a positive integer, otherwise 1.
std::size_t default_jobs();

struct RunSummary {
    int exit_code = kExitPass;
    std::size_t tasks = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t errors = 0;
    std::map<std::string, std::string> checksums;  // file -> fnv1a64 hex
};

/// Runs every task and writes CSVs plus manifest.json into `out_dir`.
RunSummary run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir, std::size_t jobs,
                          std::ostream& log);

/// Prints the aggregate table for `dir` (a run directory, or a directory of runs)
/// and writes summary.csv next to it. Returns an exit code.
int summarize(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

/// Built-in example checks plus one small run of every kind, written under `out_dir`.
int selftest(const std::filesystem::path& out_dir, std::size_t jobs, std::ostream& out);

std::string hex64(std::uint64_t v);
std::uint64_t file_checksum(const std::filesystem::path& file);

}  // namespace sclaw::driver
