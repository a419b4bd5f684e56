#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sclaw/driver.hpp"
#include "sclaw/rng.hpp"

namespace sclaw::driver {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

void write_file(const fs::path& path, const std::string& contents) {
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << contents;
}

// Files listed by an earlier manifest in the same directory would otherwise linger.
void remove_previous_outputs(const fs::path& out_dir) {
    std::ifstream in(out_dir / "manifest.json");
    if (!in) return;
    try {
        const json old = json::parse(in);
        for (const auto& [file, sum] : old.at("outputs").items()) {
            const fs::path p = out_dir / file;
            if (p.lexically_normal().string().rfind(out_dir.lexically_normal().string(), 0) == 0) fs::remove(p);
        }
    } catch (const std::exception&) {
        // Unreadable manifest: leave the directory as it is.
    }
}

}  // namespace

std::string hex64(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

std::uint64_t file_checksum(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

std::size_t default_jobs() {
    if (const char* env = std::getenv("SCLAW_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return 1;
}

RunSummary run_experiment(const ExperimentConfig& config, const fs::path& out_dir, std::size_t jobs,
                          std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    const std::string started = utc_now();
    const std::vector<Task> tasks = expand(config);
    std::vector<TaskResult> results(tasks.size());
    jobs = std::max<std::size_t>(1, std::min(jobs, tasks.size()));

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            results[i] = run_task(config, tasks[i]);
            std::lock_guard lock(log_mutex);
            log << "[" << (i + 1) << "/" << tasks.size() << "] " << to_string(config.kind) << " seed " << tasks[i].seed
                << ": " << to_string(results[i].status)
                << (results[i].message.empty() ? "" : " (" + results[i].message + ")") << '\n';
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Single writer: files are assembled in task order after the pool drains.
    fs::create_directories(out_dir);
    remove_previous_outputs(out_dir);
    std::map<std::string, std::string> contents = csv_headers(config.kind);
    for (const auto& r : results) {
        for (const auto& [file, rows] : r.rows) contents[file] += rows;
        for (const auto& [file, body] : r.files) contents[file] = body;
    }
    RunSummary summary;
    summary.tasks = tasks.size();
    for (const auto& [file, body] : contents) {
        write_file(out_dir / file, body);
        summary.checksums[file] = hex64(fnv1a64(body));
    }

    json task_list = json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& r = results[i];
        summary.passed += r.status == TaskStatus::pass;
        summary.failed += r.status == TaskStatus::fail;
        summary.errors += r.status == TaskStatus::error;
        task_list.push_back({{"index", i},
                             {"seed", tasks[i].seed},
                             {"stream_seed", hex64(tasks[i].stream_seed)},
                             {"params", tuple_key(config.kind, tasks[i].params)},
                             {"status", to_string(r.status)},
                             {"message", r.message},
                             {"deviation", finite_or_null(r.deviation)},
                             {"margin", finite_or_null(r.margin)},
                             {"wall_ms", r.wall_ms}});
    }
    summary.exit_code = (summary.failed + summary.errors) > 0 ? kExitAssertion : kExitPass;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest = {{"tool", "sclaw"},
                     {"version", kVersion},
                     {"kind", to_string(config.kind)},
                     {"config_digest", hex64(fnv1a64(config.canonical))},
                     {"config", json::parse(config.canonical)},
                     {"started_utc", started},
                     {"wall_clock_s", wall},
                     {"jobs", jobs},
                     {"counts", {{"tasks", summary.tasks}, {"pass", summary.passed}, {"fail", summary.failed},
                                 {"error", summary.errors}}},
                     {"tasks", task_list},
                     {"outputs", summary.checksums},
                     {"checksum", "fnv1a64"}};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return summary;
}

}  // namespace sclaw::driver
