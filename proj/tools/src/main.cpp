#include <iostream>

#include "CLI11.hpp"
#include "sclaw/driver.hpp"

namespace fs = std::filesystem;
using namespace sclaw::driver;

int main(int argc, char** argv) {
    CLI::App app{"sclaw: sparse circular law numerical laboratory"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string config_path, run_out;
    std::size_t run_jobs = 0;
    auto* run = app.add_subcommand("run", "Run the experiment grid described by a YAML config");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--out", run_out, "Output directory (overrides the config's output)");
    run->add_option("-j,--jobs", run_jobs, "Worker threads (default: config jobs, then SCLAW_JOBS, then 1)")
        ->check(CLI::PositiveNumber);

    std::string summary_dir;
    auto* summarize_cmd = app.add_subcommand("summarize", "Aggregate the manifests of finished runs");
    summarize_cmd->add_option("dir", summary_dir, "Run directory or a directory of runs")->required();

    std::string selftest_out = "sclaw-selftest";
    std::size_t selftest_jobs = 0;
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the built-in example checks and small runs");
    selftest_cmd->add_option("-o,--out", selftest_out, "Output directory")->capture_default_str();
    selftest_cmd->add_option("-j,--jobs", selftest_jobs, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*run) {
            const ExperimentConfig cfg = load_config(config_path);
            fs::path out = run_out.empty() ? fs::path(cfg.output.value_or(fs::path(config_path).stem().string() + "-out"))
                                           : fs::path(run_out);
            const std::size_t jobs = run_jobs ? run_jobs : cfg.jobs.value_or(default_jobs());
            const RunSummary s = run_experiment(cfg, out, jobs, std::cerr);
            std::cout << to_string(cfg.kind) << ": " << s.passed << "/" << s.tasks << " tasks passed, " << s.failed
                      << " failed, " << s.errors << " errors; outputs in " << out.string() << '\n';
            return s.exit_code;
        }
        if (*summarize_cmd) return summarize(summary_dir, std::cout, std::cerr);
        if (*selftest_cmd) return selftest(selftest_out, selftest_jobs ? selftest_jobs : default_jobs(), std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAssertion;
    }
    return kExitUsage;
}
