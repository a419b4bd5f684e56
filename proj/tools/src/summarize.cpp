#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sclaw/csv.hpp"
#include "sclaw/driver.hpp"

namespace sclaw::driver {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct RunRow {
    std::string experiment;
    std::string kind;
    std::size_t tasks = 0;
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t error = 0;
    double mean_deviation = std::numeric_limits<double>::quiet_NaN();
    double min_margin = std::numeric_limits<double>::quiet_NaN();

    double pass_rate() const { return tasks ? static_cast<double>(pass) / static_cast<double>(tasks) : 0.0; }
};

RunRow read_manifest(const fs::path& file, const std::string& name) {
    std::ifstream in(file);
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("corrupt manifest '" + file.string() + "': " + e.what());
    }
    RunRow row;
    row.experiment = name;
    try {
        row.kind = m.at("kind").get<std::string>();
        double dev_sum = 0.0;
        std::size_t dev_count = 0;
        for (const auto& t : m.at("tasks")) {
            ++row.tasks;
            const std::string status = t.at("status").get<std::string>();
            if (status == "pass") ++row.pass;
            else if (status == "fail") ++row.fail;
            else if (status == "error") ++row.error;
            else throw ConfigError("corrupt manifest '" + file.string() + "': unknown task status '" + status + "'");
            if (t.contains("deviation") && t["deviation"].is_number()) {
                dev_sum += t["deviation"].get<double>();
                ++dev_count;
            }
            if (t.contains("margin") && t["margin"].is_number()) {
                const double v = t["margin"].get<double>();
                row.min_margin = std::isnan(row.min_margin) ? v : std::min(row.min_margin, v);
            }
        }
        if (dev_count) row.mean_deviation = dev_sum / static_cast<double>(dev_count);
    } catch (const json::exception& e) {
        throw ConfigError("corrupt manifest '" + file.string() + "': " + e.what());
    }
    return row;
}

std::string cell(double v) {
    if (std::isnan(v)) return "-";
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
}

}  // namespace

int summarize(const fs::path& dir, std::ostream& out, std::ostream& err) {
    std::vector<RunRow> rows;
    try {
        if (!fs::is_directory(dir)) throw ConfigError("'" + dir.string() + "' is not a directory");
        if (fs::exists(dir / "manifest.json")) {
            rows.push_back(read_manifest(dir / "manifest.json", dir.filename().string()));
        } else {
            std::vector<fs::path> subdirs;
            for (const auto& e : fs::directory_iterator(dir))
                if (e.is_directory() && fs::exists(e.path() / "manifest.json")) subdirs.push_back(e.path());
            std::sort(subdirs.begin(), subdirs.end());
            for (const auto& s : subdirs) rows.push_back(read_manifest(s / "manifest.json", s.filename().string()));
        }
        if (rows.empty()) throw ConfigError("no manifest found in '" + dir.string() + "'");
    } catch (const ConfigError& e) {
        err << "summarize: " << e.what() << '\n';
        return kExitUsage;
    }

    std::ostringstream table;
    table << std::left << std::setw(20) << "experiment" << std::setw(11) << "kind" << std::right << std::setw(7)
          << "tasks" << std::setw(11) << "pass" << std::setw(6) << "fail" << std::setw(7) << "error" << std::setw(11)
          << "pass_rate" << std::setw(16) << "mean_deviation" << std::setw(12) << "min_margin" << '\n';
    std::string csv = "experiment,kind,tasks,pass,fail,error,pass_rate,mean_deviation,min_margin\n";
    bool all_pass = true;
    for (const auto& r : rows) {
        all_pass = all_pass && r.pass == r.tasks;
        table << std::left << std::setw(20) << r.experiment << std::setw(11) << r.kind << std::right << std::setw(7)
              << r.tasks << std::setw(11) << (std::to_string(r.pass) + "/" + std::to_string(r.tasks)) << std::setw(6)
              << r.fail << std::setw(7) << r.error << std::setw(11) << cell(r.pass_rate()) << std::setw(16)
              << cell(r.mean_deviation) << std::setw(12) << cell(r.min_margin) << '\n';
        csv += r.experiment + ',' + r.kind + ',' + std::to_string(r.tasks) + ',' + std::to_string(r.pass) + ',' +
               std::to_string(r.fail) + ',' + std::to_string(r.error) + ',' + csv::num(r.pass_rate()) + ',' +
               csv::num(r.mean_deviation) + ',' + csv::num(r.min_margin) + '\n';
    }
    out << table.str();
    std::ofstream f(dir / "summary.csv", std::ios::binary | std::ios::trunc);
    if (!f) {
        err << "summarize: cannot write '" << (dir / "summary.csv").string() << "'\n";
        return kExitUsage;
    }
    f << csv;
    out << "summary.csv written to " << (dir / "summary.csv").string() << '\n';
    return all_pass ? kExitPass : kExitAssertion;
}

}  // namespace sclaw::driver
