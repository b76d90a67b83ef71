#include "tdl/io.hpp"

#include "tdl/error.hpp"

#include <fstream>
#include <sstream>

namespace tdl::io {

namespace {

Rational parse_rational_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw Error(ErrorCode::ParseError, "expected a rational string, got " + j.dump());
}

ExtRational parse_ext_json(const Json& j) {
    if (j.is_string()) return parse_ext_rational(j.get<std::string>());
    if (j.is_number_integer()) return ExtRational(j.get<std::int64_t>());
    throw Error(ErrorCode::ParseError, "expected a rational string or \"inf\", got " + j.dump());
}

template <class T, class F>
Json runs(const std::vector<T>& v, F value) {
    Json out = Json::array();
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t k = i;
        while (k < v.size() && v[k] == v[i]) ++k;
        out.push_back(Json::array({i, k - i, value(v[i])}));
        i = k;
    }
    return out;
}

template <class T, class F>
std::vector<T> unruns(const Json& j, std::size_t size, F value) {
    std::vector<T> out;
    out.reserve(size);
    for (const auto& r : j) {
        if (!r.is_array() || r.size() != 3) throw Error(ErrorCode::ParseError, "run must be [start, length, value]");
        const auto start = r[0].get<std::size_t>(), len = r[1].get<std::size_t>();
        if (start != out.size()) throw Error(ErrorCode::ParseError, "runs are not contiguous");
        out.insert(out.end(), len, value(r[2]));
    }
    if (out.size() != size) throw Error(ErrorCode::ParseError, "runs do not cover the level");
    return out;
}

const char* label_name(tau::Label l) {
    switch (l) {
        case tau::Label::Good: return "good";
        case tau::Label::Singular: return "singular";
        case tau::Label::Middle: return "middle";
    }
    return "good";
}

tau::Label label_from(const std::string& s) {
    if (s == "good") return tau::Label::Good;
    if (s == "singular") return tau::Label::Singular;
    if (s == "middle") return tau::Label::Middle;
    throw Error(ErrorCode::ParseError, "unknown label " + s);
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << data;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json rational_json(const Rational& r) { return to_string(r); }
Rational rational_from(const Json& j) { return parse_rational_json(j); }

Instance parse_instance(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    try {
        const auto n = j.at("n").get<std::size_t>();
        const Json& c = j.at("cost");
        if (n == 0 || c.size() != n) throw Error(ErrorCode::ParseError, "cost must have n rows");
        std::vector<ExtRational> entries;
        for (const auto& row : c) {
            if (row.size() != n) throw Error(ErrorCode::ParseError, "cost rows must have n entries");
            for (const auto& e : row) {
                ExtRational v = parse_ext_json(e);
                if (v.is_finite() && v.value() < 0) throw Error(ErrorCode::ParseError, "negative cost entry");
                entries.push_back(std::move(v));
            }
        }
        Instance inst;
        inst.cost = ot::CostMatrix(n, n, std::move(entries));
        for (const auto& v : j.at("mu")) inst.marg.mu.push_back(parse_rational_json(v));
        for (const auto& v : j.at("nu")) inst.marg.nu.push_back(parse_rational_json(v));
        if (inst.marg.mu.size() != n || inst.marg.nu.size() != n)
            throw Error(ErrorCode::ParseError, "mu and nu must have n entries");
        return inst;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

Instance read_instance(const std::string& path) { return parse_instance(read_file(path)); }

Json instance_json(const Instance& inst) {
    Json j;
    j["n"] = inst.cost.rows();
    Json c = Json::array();
    for (std::size_t i = 0; i < inst.cost.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < inst.cost.cols(); ++k) row.push_back(to_string(inst.cost.at(i, k)));
        c.push_back(row);
    }
    j["cost"] = c;
    j["mu"] = Json::array();
    j["nu"] = Json::array();
    for (const auto& v : inst.marg.mu) j["mu"].push_back(to_string(v));
    for (const auto& v : inst.marg.nu) j["nu"].push_back(to_string(v));
    return j;
}

Json report_json(const Report& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"status", status_name(c.status)}, {"detail", c.detail}});
    return {{"pass", r.pass()}, {"checks", checks}};
}

Json tower_json(const circle::Tower& t) {
    return {{"m", t.m}, {"M", t.M}, {"P", t.P}, {"mode", circle::mode_name(t.mode)}};
}

circle::Tower tower_from(const Json& j) {
    try {
        circle::Tower t;
        t.m = j.at("m").get<std::vector<std::int64_t>>();
        t.M = j.at("M").get<std::vector<std::int64_t>>();
        t.P = j.at("P").get<std::vector<std::int64_t>>();
        const std::string mode = j.at("mode").get<std::string>();
        t.mode = mode == "compliant" ? circle::Mode::Compliant : circle::Mode::Relaxed;
        if (t.m.empty() || t.m.size() != t.M.size() || t.m.size() != t.P.size())
            throw Error(ErrorCode::ParseError, "tower arrays must have equal nonzero length");
        return t;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

std::string step_function_csv(const circle::StepFunction& f) {
    std::string out = "index,left_endpoint,value\n";
    for (std::size_t l = 0; l < f.size(); ++l) {
        out += std::to_string(l);
        out += ',';
        out += to_string(f.left_endpoint(l));
        out += ',';
        out += to_string(f.value(l));
        out += '\n';
    }
    return out;
}

Json tau_level_json(const tau::TauLevel& level) {
    Json j;
    j["level"] = level.level;
    j["size"] = level.size();
    j["tau"] = runs(level.tau, [](std::int64_t v) { return Json(v); });
    j["labels"] = runs(level.label, [](tau::Label l) { return Json(label_name(l)); });
    j["changed"] = runs(level.changed, [](std::uint8_t v) { return Json(static_cast<int>(v)); });
    j["expected_singular"] = level.expected_singular;
    j["singular_count"] = level.count(tau::Label::Singular);
    return j;
}

tau::TauLevel tau_level_from(const Json& j, const circle::Tower& t) {
    try {
        tau::TauLevel level;
        level.level = j.at("level").get<int>();
        if (level.level < 1 || level.level > t.depth()) throw Error(ErrorCode::ParseError, "level outside tower");
        const std::size_t size = j.at("size").get<std::size_t>();
        if (static_cast<std::int64_t>(size) != t.modulus(level.level))
            throw Error(ErrorCode::ParseError, "size does not match the tower");
        level.tau = unruns<std::int64_t>(j.at("tau"), size, [](const Json& v) { return v.get<std::int64_t>(); });
        level.label = unruns<tau::Label>(j.at("labels"), size,
                                         [](const Json& v) { return label_from(v.get<std::string>()); });
        level.changed = unruns<std::uint8_t>(j.at("changed"), size,
                                             [](const Json& v) { return static_cast<std::uint8_t>(v.get<int>()); });
        level.expected_singular = j.at("expected_singular").get<std::int64_t>();
        level.sigma = tau::induced_permutation(t, level.level, level.tau);
        return level;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

Json ledger_json(const tau::SingularLedger& g) {
    return {{"level", g.level},
            {"singular_mass", to_string(g.singular_mass)},
            {"good_deviation", to_string(g.good_deviation)},
            {"change_measure", to_string(g.change_measure)}};
}

std::string diagnostics_line(const duals::DualPairLevel& pair, const duals::SingularDiagnostic& d) {
    Json sup = Json::object();
    for (const auto& [delta, v] : d.small_set_sup) sup[to_string(delta)] = to_string(v);
    Json j = {{"level", d.level},
              {"dual_value", to_string(duals::dual_value(pair))},
              {"correction_norm", to_string(pair.correction_norm)},
              {"carrier_measure", to_string(d.carrier_measure)},
              {"negative_mass", to_string(d.negative_mass)},
              {"small_set_sup", sup}};
    return j.dump() + "\n";
}

Json plan_json(const ot::TransportPlan& plan) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < plan.rows; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < plan.cols; ++k) row.push_back(to_string(plan.at(i, k)));
        rows.push_back(row);
    }
    return {{"entries", rows}, {"value", to_string(plan.value)}};
}

Json duals_json(const ot::DualPair& duals) {
    Json phi = Json::array(), psi = Json::array();
    for (const auto& v : duals.phi) phi.push_back(to_string(v));
    for (const auto& v : duals.psi) psi.push_back(to_string(v));
    return {{"phi", phi}, {"psi", psi}, {"value", to_string(duals.value)}};
}

Json gap_report_json(const gap::GapReport& g) {
    Json eta = Json::object(), witness = Json::object();
    for (const auto& [n, v] : g.eta) eta[std::to_string(n)] = to_string(v);
    for (const auto& [n, v] : g.witness_cost) witness[std::to_string(n)] = to_string(v);
    return {{"M", g.M},
            {"j", g.j},
            {"primal", to_string(g.primal)},
            {"dual", to_string(g.dual)},
            {"eta", eta},
            {"witness_cost", witness},
            {"beta_threshold", to_string(g.beta_threshold)},
            {"checks", report_json(g.report)}};
}

}  // namespace tdl::io
