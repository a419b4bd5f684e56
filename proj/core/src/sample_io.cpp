#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "sclaw/ensemble.hpp"
#include "sclaw/errors.hpp"

namespace sclaw {
namespace {

using nlohmann::json;

json xi_to_json(const XiSpec& xi) {
    json j = {{"kind", xi.kind_name()}};
    if (xi.kind == XiKind::two_point) {
        j["a"] = {xi.a.real(), xi.a.imag()};
        j["b"] = {xi.b.real(), xi.b.imag()};
        j["prob"] = xi.prob;
    } else if (xi.kind == XiKind::bernoulli_scaled) {
        j["q"] = xi.q;
    }
    return j;
}

XiSpec xi_from_json(const json& j) {
    const XiKind kind = XiSpec::kind_from_name(j.at("kind").get<std::string>());
    if (kind == XiKind::two_point) {
        const auto& a = j.at("a");
        const auto& b = j.at("b");
        return XiSpec::two_point({a.at(0).get<double>(), a.at(1).get<double>()},
                                 {b.at(0).get<double>(), b.at(1).get<double>()}, j.at("prob").get<double>());
    }
    if (kind == XiKind::bernoulli_scaled) return XiSpec::bernoulli_scaled(j.at("q").get<double>());
    XiSpec s;
    s.kind = kind;
    return s;
}

void put_double(std::ostream& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

template <class T>
T parse_field(std::string_view field, std::size_t line_no) {
    T v{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ContractViolation("sample csv line " + std::to_string(line_no) + ": bad field '" +
                                std::string(field) + "'");
    return v;
}

}  // namespace

void SparseSample::write_csv(std::ostream& out) const {
    const json header = {{"n", n_rows}, {"m", n_cols}, {"p", p}, {"xi", xi_to_json(xi)}, {"seed", seed}};
    out << "# " << header.dump() << '\n';
    out << "i,j,re,im\n";
    for (const SparseEntry& e : nonzeros) {
        out << e.i << ',' << e.j << ',';
        put_double(out, e.value.real());
        out << ',';
        put_double(out, e.value.imag());
        out << '\n';
    }
}

SparseSample SparseSample::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw ContractViolation("sample csv: missing '# {json}' header line");
    json header;
    try {
        header = json::parse(line.substr(2));
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("sample csv: malformed header: ") + e.what());
    }
    SparseSample s;
    try {
        s.n_rows = header.at("n").get<std::size_t>();
        s.n_cols = header.at("m").get<std::size_t>();
        s.p = header.at("p").get<double>();
        s.seed = header.at("seed").get<std::uint64_t>();
        s.xi = xi_from_json(header.at("xi"));
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("sample csv: incomplete header: ") + e.what());
    }
    if (!std::getline(in, line) || line != "i,j,re,im")
        throw ContractViolation("sample csv: expected column line 'i,j,re,im'");

    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::string_view rest(line);
        std::string_view fields[4];
        for (int k = 0; k < 4; ++k) {
            const auto comma = rest.find(',');
            if ((k < 3) == (comma == std::string_view::npos))
                throw ContractViolation("sample csv line " + std::to_string(line_no) + ": expected 4 fields");
            fields[k] = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        SparseEntry e{parse_field<std::size_t>(fields[0], line_no), parse_field<std::size_t>(fields[1], line_no),
                      {parse_field<double>(fields[2], line_no), parse_field<double>(fields[3], line_no)}};
        if (e.i >= s.n_rows || e.j >= s.n_cols)
            throw ContractViolation("sample csv line " + std::to_string(line_no) + ": index out of range");
        if (!s.nonzeros.empty()) {
            const SparseEntry& prev = s.nonzeros.back();
            if (prev.i > e.i || (prev.i == e.i && prev.j >= e.j))
                throw ContractViolation("sample csv line " + std::to_string(line_no) +
                                        ": entries must be unique and sorted row-major");
        }
        s.nonzeros.push_back(e);
    }
    return s;
}

}  // namespace sclaw
