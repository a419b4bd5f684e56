#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sclaw/csv.hpp"
#include "sclaw/driver.hpp"
#include "sclaw/errors.hpp"
#include "sclaw/potential.hpp"
#include "sclaw/process.hpp"

namespace sclaw::driver {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ConfigError(field + ": " + what); }

void check(bool ok, const std::string& field, const std::string& what) {
    if (!ok) fail(field, what);
}

double as_double(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail(field, "expected a number");
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        fail(field, "expected a number, got '" + node.Scalar() + "'");
    }
}

std::uint64_t as_count(const YAML::Node& node, const std::string& field) {
    const double v = as_double(node, field);
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15) fail(field, "expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

bool as_bool(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail(field, "expected true or false");
    try {
        return node.as<bool>();
    } catch (const YAML::Exception&) {
        fail(field, "expected true or false, got '" + node.Scalar() + "'");
    }
}

std::string as_string(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail(field, "expected a string");
    return node.Scalar();
}

void reject_unknown(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& kv : map) {
        const std::string key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            fail(where.empty() ? key : where + "." + key,
                 "unknown key" + (list.empty() ? std::string(" (this section takes no keys)") : " (allowed: " + list + ")"));
        }
    }
}

// A grid entry may be a single value or a nonempty list of values.
std::vector<YAML::Node> grid_values(const YAML::Node& node, const std::string& field) {
    std::vector<YAML::Node> out;
    if (node.IsSequence()) {
        for (const auto& v : node) out.push_back(v);
    } else if (node.IsScalar() || node.IsMap()) {
        out.push_back(node);
    }
    check(!out.empty(), field, "list is empty");
    return out;
}

cplx parse_complex(const YAML::Node& node, const std::string& field) {
    if (node.IsScalar()) return {as_double(node, field), 0.0};
    if (node.IsSequence() && node.size() == 2) return {as_double(node[0], field), as_double(node[1], field)};
    fail(field, "expected a number or a [re, im] pair");
}

XiSpec parse_xi(const YAML::Node& node, const std::string& field) {
    try {
        if (node.IsScalar()) {
            const std::string name = node.Scalar();
            const XiKind k = XiSpec::kind_from_name(name);
            if (k == XiKind::two_point || k == XiKind::bernoulli_scaled)
                fail(field, "'" + name + "' needs parameters; use a map with kind and its parameters");
            XiSpec xi;
            xi.kind = k;
            return xi;
        }
        if (!node.IsMap()) fail(field, "expected a law name or a map");
        reject_unknown(node, {"kind", "a", "b", "prob", "q"}, field);
        check(bool(node["kind"]), field + ".kind", "missing");
        const XiKind k = XiSpec::kind_from_name(as_string(node["kind"], field + ".kind"));
        if (k == XiKind::two_point) {
            check(node["a"] && node["b"] && node["prob"], field, "two-point needs a, b and prob");
            return XiSpec::two_point(parse_complex(node["a"], field + ".a"), parse_complex(node["b"], field + ".b"),
                                     as_double(node["prob"], field + ".prob"));
        }
        if (k == XiKind::bernoulli_scaled) {
            check(bool(node["q"]), field + ".q", "missing");
            return XiSpec::bernoulli_scaled(as_double(node["q"], field + ".q"));
        }
        check(!node["a"] && !node["b"] && !node["prob"] && !node["q"], field, "parameters given for a parameterless law");
        XiSpec xi;
        xi.kind = k;
        return xi;
    } catch (const ContractViolation& e) {
        fail(field, e.what());
    }
}

json xi_json(const XiSpec& xi) {
    json j = {{"kind", xi.kind_name()}};
    if (xi.kind == XiKind::two_point) {
        j["a"] = {xi.a.real(), xi.a.imag()};
        j["b"] = {xi.b.real(), xi.b.imag()};
        j["prob"] = xi.prob;
    }
    if (xi.kind == XiKind::bernoulli_scaled) j["q"] = xi.q;
    return j;
}

bool is_matrix_kind(ExperimentKind k) { return k != ExperimentKind::walk; }

std::set<std::string> grid_keys(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::law:
        case ExperimentKind::potential:
        case ExperimentKind::anticonc: return {"n", "d", "p", "eps", "z", "xi"};
        case ExperimentKind::process: return {"n", "d", "p", "eps", "z", "xi", "c_sched", "c_star", "C_prime"};
        case ExperimentKind::certify: return {"n", "d", "p", "xi", "c_star", "C_prime"};
        case ExperimentKind::walk: return {"q", "adversary"};
    }
    return {};
}

std::set<std::string> option_keys(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::law: return {"esd"};
        case ExperimentKind::potential: return {};
        case ExperimentKind::process: return {"certificates", "schedule", "traces"};
        case ExperimentKind::certify: return {"r_gap", "subset_trials", "B_big_O", "beta"};
        case ExperimentKind::anticonc: return {"r_gap", "trials", "log_threshold"};
        case ExperimentKind::walk: return {"trials", "horizon", "y0", "divisor"};
    }
    return {};
}

Options parse_options(const YAML::Node& node, ExperimentKind kind) {
    Options o;
    if (kind == ExperimentKind::anticonc) o.r_gap = 3;
    if (kind == ExperimentKind::walk) o.trials = 100000;
    if (!node) return o;
    if (node.IsNull()) return o;
    check(node.IsMap(), "options", "expected a map");
    reject_unknown(node, option_keys(kind), "options");
    if (node["esd"]) o.esd = as_bool(node["esd"], "options.esd");
    if (node["certificates"]) o.certificates = as_bool(node["certificates"], "options.certificates");
    if (node["traces"]) o.traces = as_bool(node["traces"], "options.traces");
    if (node["schedule"]) {
        o.schedule = as_string(node["schedule"], "options.schedule");
        check(o.schedule == "formula" || o.schedule == "force-accept" || o.schedule == "force-reject",
              "options.schedule", "expected formula, force-accept or force-reject");
    }
    if (node["r_gap"]) o.r_gap = as_count(node["r_gap"], "options.r_gap");
    if (node["subset_trials"]) {
        o.subset_trials = as_count(node["subset_trials"], "options.subset_trials");
        check(o.subset_trials >= 100, "options.subset_trials", "must be >= 100");
    }
    if (node["B_big_O"]) {
        o.b_big_o = as_double(node["B_big_O"], "options.B_big_O");
        check(o.b_big_o > 0.0, "options.B_big_O", "must be positive");
    }
    if (node["beta"]) {
        o.beta = as_double(node["beta"], "options.beta");
        check(*o.beta > 0.0 && *o.beta < 1.0, "options.beta", "must lie in (0, 1)");
    }
    if (node["trials"]) {
        o.trials = as_count(node["trials"], "options.trials");
        check(o.trials >= 1, "options.trials", "must be >= 1");
    }
    if (node["log_threshold"]) o.log_threshold = as_double(node["log_threshold"], "options.log_threshold");
    if (node["horizon"]) {
        o.horizon = as_count(node["horizon"], "options.horizon");
        check(o.horizon >= 1, "options.horizon", "must be >= 1");
    }
    if (node["y0"]) o.y0 = as_double(node["y0"], "options.y0");
    if (node["divisor"]) {
        o.divisor = as_double(node["divisor"], "options.divisor");
        check(o.divisor > 0.0, "options.divisor", "must be positive");
    }
    if (kind == ExperimentKind::walk) {
        check(o.y0 >= 0.0 && o.y0 <= static_cast<double>(o.horizon) / 8.0, "options.y0", "need 0 <= y0 <= horizon / 8");
        check(std::floor(2.0 * o.y0) == 2.0 * o.y0, "options.y0", "must be a multiple of 1/2");
    }
    return o;
}

std::vector<std::uint64_t> parse_seeds(const YAML::Node& node) {
    check(bool(node), "seeds", "missing");
    std::vector<std::uint64_t> seeds;
    if (node.IsSequence()) {
        for (std::size_t i = 0; i < node.size(); ++i) seeds.push_back(as_count(node[i], "seeds[" + std::to_string(i) + "]"));
    } else if (node.IsMap()) {
        reject_unknown(node, {"base", "count"}, "seeds");
        check(node["base"] && node["count"], "seeds", "a seed range needs base and count");
        const std::uint64_t base = as_count(node["base"], "seeds.base");
        const std::uint64_t count = as_count(node["count"], "seeds.count");
        check(count <= 1000000, "seeds.count", "too many seeds");
        for (std::uint64_t k = 0; k < count; ++k) seeds.push_back(base + k);
    } else {
        seeds.push_back(as_count(node, "seeds"));
    }
    check(!seeds.empty(), "seeds", "no seeds given");
    std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
    check(unique.size() == seeds.size(), "seeds", "duplicate seed");
    return seeds;
}

// Preconditions of the module a tuple is handed to; each failure names the field.
void validate_tuple(ExperimentKind kind, const ParamTuple& t, const Options& o, bool d_given) {
    const std::string dp = d_given ? "grid.d" : "grid.p";
    if (kind == ExperimentKind::walk) {
        check(t.q >= 0.0 && t.q < 1.0, "grid.q", "must lie in [0, 1)");
        try {
            adversary_from_name(t.adversary);
        } catch (const ContractViolation& e) {
            fail("grid.adversary", e.what());
        }
        return;
    }
    const double n = static_cast<double>(t.n);
    const double d = t.d();
    check(t.n >= 2, "grid.n", "must be >= 2");
    check(t.n <= 5000, "grid.n", "must be <= 5000 (dense linear algebra)");
    const bool dense_ok = kind == ExperimentKind::law || kind == ExperimentKind::potential;
    check(t.p > 0.0 && t.p <= (dense_ok ? 1.0 : 0.5), dp,
          dense_ok ? "p = d/n must lie in (0, 1]" : "p = d/n must lie in (0, 1/2]");
    check(d >= 1.0, dp, "need d = p n >= 1");
    check(std::isfinite(t.z.real()) && std::isfinite(t.z.imag()), "grid.z", "must be finite");
    if (kind != ExperimentKind::certify) {
        check(t.eps >= 0.0 && t.eps < 1.0, "grid.eps", "must lie in [0, 1)");
        try {
            truncation_indices(t.n, t.eps);
        } catch (const ContractViolation& e) {
            fail("grid.eps", e.what());
        }
    }
    check(t.c_sched > 0.0, "grid.c_sched", "must be positive");
    check(t.c_star > 0.0 && t.c_star <= 1.0, "grid.c_star", "must lie in (0, 1]");
    check(t.c_prime > 0.0, "grid.C_prime", "must be positive");
    switch (kind) {
        case ExperimentKind::process: {
            check(t.eps > 0.0, "grid.eps", "must be positive for the process");
            check(t.z != cplx{}, "grid.z", "must be nonzero for the process");
            check(truncation_indices(t.n, t.eps).m < t.n, "grid.eps", "too small for n: the run would have no steps");
            check(d > 1.0, dp, "need d > 1 for the slack schedule");
            break;
        }
        case ExperimentKind::certify: {
            check(d > std::numbers::e, dp, "need d > e");
            CertificateConfig cc;
            cc.c_star = t.c_star;
            cc.C_prime = t.c_prime;
            cc.B_big_O = o.b_big_o;
            cc.subset_trials = o.subset_trials;
            if (o.beta) cc.beta = *o.beta;
            try {
                cc.validate();
            } catch (const ContractViolation& e) {
                fail("grid", e.what());
            }
            check(o.r_gap < t.n, "options.r_gap", "must be < n");
            check(static_cast<double>(o.r_gap) <= n / std::pow(d, 0.25), "options.r_gap",
                  "must be <= n / d^(1/4) for the expansion event");
            break;
        }
        case ExperimentKind::anticonc: {
            check(d > std::numbers::e, dp, "need d > e");
            check(std::abs(t.z) >= 1.0 && std::abs(t.z) <= d, "grid.z", "need 1 <= |z| <= d");
            check(o.r_gap < t.n, "options.r_gap", "must be < n");
            break;
        }
        default: break;
    }
}

}  // namespace

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::law: return "law";
        case ExperimentKind::process: return "process";
        case ExperimentKind::certify: return "certify";
        case ExperimentKind::anticonc: return "anticonc";
        case ExperimentKind::walk: return "walk";
        case ExperimentKind::potential: return "potential";
    }
    return "unknown";
}

ExperimentKind kind_from_name(const std::string& name) {
    for (auto k : {ExperimentKind::law, ExperimentKind::process, ExperimentKind::certify, ExperimentKind::anticonc,
                   ExperimentKind::walk, ExperimentKind::potential})
        if (to_string(k) == name) return k;
    fail("kind", "unknown experiment kind '" + name + "' (expected law, process, certify, anticonc, walk or potential)");
}

ExperimentConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: not valid YAML: ") + e.what());
    }
    check(root.IsMap(), "config", "expected a map at the top level");
    reject_unknown(root, {"kind", "seeds", "grid", "options", "output", "jobs"}, "");
    check(bool(root["kind"]), "kind", "missing");

    ExperimentConfig cfg;
    cfg.kind = kind_from_name(as_string(root["kind"], "kind"));
    cfg.seeds = parse_seeds(root["seeds"]);
    cfg.options = parse_options(root["options"], cfg.kind);
    if (root["output"]) cfg.output = as_string(root["output"], "output");
    if (root["jobs"]) {
        cfg.jobs = as_count(root["jobs"], "jobs");
        check(*cfg.jobs >= 1, "jobs", "must be >= 1");
    }

    const YAML::Node grid = root["grid"];
    check(grid && grid.IsMap() && grid.size() > 0, "grid", "empty or missing");
    reject_unknown(grid, grid_keys(cfg.kind), "grid");

    // Axes in a fixed order; each is a list of setters applied to a tuple.
    using Setter = std::function<void(ParamTuple&)>;
    std::vector<std::vector<Setter>> axes;
    auto axis = [&](const char* key, auto&& parse_one, bool required) {
        const YAML::Node node = grid[key];
        if (!node) {
            check(!required, std::string("grid.") + key, "missing");
            return;
        }
        std::vector<Setter> setters;
        const auto values = grid_values(node, std::string("grid.") + key);
        for (std::size_t i = 0; i < values.size(); ++i)
            setters.push_back(parse_one(values[i], std::string("grid.") + key + "[" + std::to_string(i) + "]"));
        axes.push_back(std::move(setters));
    };

    bool d_given = false;
    if (is_matrix_kind(cfg.kind)) {
        check(!(grid["d"] && grid["p"]), "grid", "give either d or p, not both");
        check(grid["d"] || grid["p"], "grid.d", "missing (give d or p)");
        d_given = bool(grid["d"]);
        axis("n", [](const YAML::Node& v, const std::string& f) -> Setter {
            const auto n = as_count(v, f);
            return [n](ParamTuple& t) { t.n = n; };
        }, true);
        // d is converted after n is known, so the setter stores it in p and fixes up below.
        axis(d_given ? "d" : "p", [](const YAML::Node& v, const std::string& f) -> Setter {
            const double x = as_double(v, f);
            check(x > 0.0 && std::isfinite(x), f, "must be positive");
            return [x](ParamTuple& t) { t.p = x; };
        }, true);
        axis("eps", [](const YAML::Node& v, const std::string& f) -> Setter {
            const double x = as_double(v, f);
            return [x](ParamTuple& t) { t.eps = x; };
        }, false);
        axis("z", [](const YAML::Node& v, const std::string& f) -> Setter {
            const cplx z = parse_complex(v, f);
            return [z](ParamTuple& t) { t.z = z; };
        }, false);
        axis("xi", [](const YAML::Node& v, const std::string& f) -> Setter {
            const XiSpec xi = parse_xi(v, f);
            return [xi](ParamTuple& t) { t.xi = xi; };
        }, false);
        axis("c_sched", [](const YAML::Node& v, const std::string& f) -> Setter {
            const double x = as_double(v, f);
            return [x](ParamTuple& t) { t.c_sched = x; };
        }, false);
        axis("c_star", [](const YAML::Node& v, const std::string& f) -> Setter {
            const double x = as_double(v, f);
            return [x](ParamTuple& t) { t.c_star = x; };
        }, false);
        axis("C_prime", [](const YAML::Node& v, const std::string& f) -> Setter {
            const double x = as_double(v, f);
            return [x](ParamTuple& t) { t.c_prime = x; };
        }, false);
    } else {
        axis("q", [](const YAML::Node& v, const std::string& f) -> Setter {
            const double x = as_double(v, f);
            return [x](ParamTuple& t) { t.q = x; };
        }, true);
        axis("adversary", [](const YAML::Node& v, const std::string& f) -> Setter {
            const std::string a = as_string(v, f);
            return [a](ParamTuple& t) { t.adversary = a; };
        }, false);
    }

    std::vector<std::size_t> idx(axes.size(), 0);
    for (bool more = true; more;) {
        ParamTuple t;
        for (std::size_t a = 0; a < axes.size(); ++a) axes[a][idx[a]](t);
        if (is_matrix_kind(cfg.kind) && d_given) t.p = t.p / static_cast<double>(std::max<std::size_t>(t.n, 1));
        validate_tuple(cfg.kind, t, cfg.options, d_given);
        cfg.grid.push_back(t);
        check(cfg.grid.size() <= 100000, "grid", "more than 100000 parameter tuples");
        // Last axis fastest.
        more = false;
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++idx[a] < axes[a].size()) {
                more = true;
                break;
            }
            idx[a] = 0;
        }
    }

    json tuples = json::array();
    for (const auto& t : cfg.grid) {
        json j;
        if (is_matrix_kind(cfg.kind)) {
            j = {{"n", t.n}, {"p", t.p}, {"eps", t.eps}, {"z", {t.z.real(), t.z.imag()}}, {"xi", xi_json(t.xi)},
                 {"c_sched", t.c_sched}, {"c_star", t.c_star}, {"C_prime", t.c_prime}};
        } else {
            j = {{"q", t.q}, {"adversary", t.adversary}};
        }
        tuples.push_back(j);
    }
    const Options& o = cfg.options;
    json opts = {{"esd", o.esd},         {"certificates", o.certificates}, {"schedule", o.schedule},
                 {"traces", o.traces},   {"r_gap", o.r_gap},               {"subset_trials", o.subset_trials},
                 {"B_big_O", o.b_big_o}, {"trials", o.trials},             {"horizon", o.horizon},
                 {"y0", o.y0},           {"divisor", o.divisor}};
    opts["beta"] = o.beta ? json(*o.beta) : json(nullptr);
    opts["log_threshold"] = o.log_threshold ? json(*o.log_threshold) : json(nullptr);
    cfg.canonical = json{{"kind", to_string(cfg.kind)}, {"grid", tuples}, {"seeds", cfg.seeds}, {"options", opts}}.dump();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string tuple_key(ExperimentKind kind, const ParamTuple& t) {
    std::ostringstream s;
    s << to_string(kind);
    if (kind == ExperimentKind::walk) {
        s << "|q=" << csv::num(t.q) << "|adversary=" << t.adversary;
        return s.str();
    }
    s << "|n=" << t.n << "|p=" << csv::num(t.p) << "|eps=" << csv::num(t.eps) << "|z=" << csv::num(t.z.real()) << ','
      << csv::num(t.z.imag()) << "|xi=" << t.xi.kind_name();
    if (t.xi.kind == XiKind::two_point)
        s << '(' << csv::num(t.xi.a.real()) << ',' << csv::num(t.xi.a.imag()) << ',' << csv::num(t.xi.b.real()) << ','
          << csv::num(t.xi.b.imag()) << ',' << csv::num(t.xi.prob) << ')';
    if (t.xi.kind == XiKind::bernoulli_scaled) s << '(' << csv::num(t.xi.q) << ')';
    s << "|c_sched=" << csv::num(t.c_sched) << "|c_star=" << csv::num(t.c_star) << "|C_prime=" << csv::num(t.c_prime);
    return s.str();
}

std::uint64_t derive_stream_seed(ExperimentKind kind, const ParamTuple& t, std::uint64_t seed) {
    return stream_key(seed, Domain::task, fnv1a64(tuple_key(kind, t)), 0);
}

std::vector<Task> expand(const ExperimentConfig& config) {
    std::vector<Task> tasks;
    tasks.reserve(config.grid.size() * config.seeds.size());
    for (std::size_t g = 0; g < config.grid.size(); ++g)
        for (std::uint64_t seed : config.seeds) {
            Task t;
            t.index = tasks.size();
            t.tuple_index = g;
            t.params = config.grid[g];
            t.seed = seed;
            t.stream_seed = derive_stream_seed(config.kind, t.params, seed);
            tasks.push_back(std::move(t));
        }
    return tasks;
}

}  // namespace sclaw::driver
