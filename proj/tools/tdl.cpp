// tdl: finite transport solver and circle-construction driver.
#include "tdl/circle.hpp"
#include "tdl/duals.hpp"
#include "tdl/error.hpp"
#include "tdl/finite_ot.hpp"
#include "tdl/gap.hpp"
#include "tdl/io.hpp"
#include "tdl/tau.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tdl;
using io::Json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitConstruction = 4;

int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::InfeasibleMarginals:
        case ErrorCode::NoFinitePlan:
        case ErrorCode::InfiniteCostInSupport:
        case ErrorCode::InfiniteCostOnPi0Support:
            return kExitInfeasible;
        case ErrorCode::SearchCapExceeded:
        case ErrorCode::GrowthTooSmall:
            return kExitConstruction;
        case ErrorCode::GraphOverlapInconsistency:
            return kExitFail;
        default:
            return kExitUsage;
    }
}

void emit(const std::string& out, const std::string& data) {
    if (out.empty() || out == "-")
        std::cout << data;
    else
        io::write_file(out, data);
}

std::vector<Rational> parse_rational_list(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_rational(item));
    return out;
}

struct TowerFlags {
    std::int64_t m1 = 0;
    int depth = 1;
    std::string mode = "relaxed";
    std::vector<std::int64_t> floors;
};

void add_tower_flags(CLI::App* cmd, TowerFlags& f, int default_depth) {
    f.depth = default_depth;
    cmd->add_option("--m1", f.m1, "first prime (odd, >= 5)")->required();
    cmd->add_option("--depth", f.depth, "tower depth")->check(CLI::Range(1, 8));
    cmd->add_option("--mode", f.mode, "relaxed or compliant")->check(CLI::IsMember({"relaxed", "compliant"}));
    cmd->add_option("--floor", f.floors, "lower bounds for m_2, m_3, ... (relaxed mode)");
}

circle::Tower make_tower(const TowerFlags& f) {
    std::cerr << "building tower m1=" << f.m1 << " depth=" << f.depth << " mode=" << f.mode << "\n";
    circle::Tower t = f.mode == "compliant" ? circle::build_compliant_tower(f.m1, f.depth)
                                            : circle::build_tower(f.m1, f.depth, f.floors);
    std::cerr << "  primes:";
    for (auto p : t.m) std::cerr << ' ' << p;
    std::cerr << " (" << circle::mode_name(t.mode) << ")\n";
    return t;
}

int cmd_solve(const std::string& path, const std::string& out, const std::string& eps_list) {
    const io::Instance inst = io::read_instance(path);
    const auto eps = parse_rational_list(eps_list);
    std::cerr << "solving " << inst.cost.rows() << "x" << inst.cost.cols() << " instance\n";
    const ot::TransportPlan plan = ot::solve_primal(inst.cost, inst.marg);
    const ot::DualPair duals = ot::solve_dual(inst.cost, inst.marg);
    const ot::SlacknessReport slack = ot::check_complementary_slackness(plan, duals, inst.cost);
    const auto support = plan.support();
    const ot::MonotonicityResult mono = ot::is_cyclically_monotone(support, inst.cost);
    const auto pots = ot::strong_monotone_potentials(support, inst.cost);

    Json j;
    j["primal"] = io::plan_json(plan);
    j["dual"] = io::duals_json(duals);
    j["strong_duality"] = plan.value == duals.value;
    Json sv = Json::array(), fv = Json::array();
    for (auto [a, b] : slack.slack_violations) sv.push_back({a, b});
    for (auto [a, b] : slack.feasibility_violations) fv.push_back({a, b});
    j["slackness"] = {{"pass", slack.pass()}, {"slack_violations", sv}, {"feasibility_violations", fv}};
    Json wit = Json::array();
    for (auto [a, b] : mono.witness) wit.push_back({a, b});
    j["monotonicity"] = {{"monotone", mono.monotone}, {"witness", wit}, {"potentials", pots.has_value()}};
    if (!eps.empty()) {
        Json rel = Json::object();
        for (const auto& e : eps) rel[to_string(e)] = to_string(ot::solve_relaxed_dual(inst.cost, inst.marg, plan, e).value);
        j["relaxed_dual"] = rel;
    }
    const bool ok = plan.value == duals.value && slack.pass() && mono.monotone && pots.has_value();
    j["pass"] = ok;
    emit(out, io::dump(j));
    return ok ? 0 : kExitFail;
}

int cmd_construct(const TowerFlags& f, int levels, const std::string& out_dir) {
    const circle::Tower t = make_tower(f);
    if (levels < 1 || levels > t.depth()) throw Error(ErrorCode::InvalidArgument, "--levels must be in [1, depth]");
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    io::write_file((dir / "tower.json").string(), io::dump(io::tower_json(t)));

    std::vector<tau::TauLevel> built;
    Json ledgers = Json::array(), reports = Json::object();
    std::string diag;
    bool ok = true;
    for (int n = 1; n <= levels; ++n) {
        std::cerr << "level " << n << " (M = " << t.modulus(n) << ")\n";
        built.push_back(n == 1 ? tau::build_tau_level1(t) : tau::extend_tau(built.back(), t));
        const tau::TauLevel& lv = built.back();
        const tau::TauLevel* prev = n > 1 ? &built[n - 2] : nullptr;
        const std::string tag = std::to_string(n);
        io::write_file((dir / ("tau_level_" + tag + ".json")).string(), io::dump(io::tau_level_json(lv)));
        io::write_file((dir / ("quasi_cost_" + tag + ".csv")).string(), io::step_function_csv(tau::quasi_cost(lv, t)));
        io::write_file((dir / ("phi_" + tag + ".csv")).string(), io::step_function_csv(circle::phi_level(t, n)));
        ledgers.push_back(io::ledger_json(tau::singular_ledger(lv, prev, t)));
        const Report rep = tau::verify_level(lv, prev, t);
        ok = ok && rep.pass();
        reports[tag] = io::report_json(rep);
        const int eval = std::min(n + 1, t.depth());
        const duals::DualPairLevel pair = duals::corrected_pair(lv, t, eval);
        const Report feas = duals::verify_feasibility(pair, lv, t);
        ok = ok && feas.pass();
        reports[tag + "_feasibility"] = io::report_json(feas);
        diag += io::diagnostics_line(pair, duals::singular_diagnostic(lv, t, duals::default_delta_grid(t.modulus(n))));
    }
    io::write_file((dir / "ledger.json").string(), io::dump(ledgers));
    io::write_file((dir / "diagnostics.jsonl").string(), diag);
    io::write_file((dir / "report.json").string(), io::dump({{"pass", ok}, {"levels", reports}}));
    std::cout << io::dump({{"pass", ok}, {"out", out_dir}, {"levels", levels}});
    return ok ? 0 : kExitFail;
}

int cmd_gap(const TowerFlags& f, int M, int jmax, const std::string& out) {
    const circle::Tower t = make_tower(f);
    if (jmax < 1 || jmax > t.depth()) throw Error(ErrorCode::InvalidArgument, "--jmax must be in [1, depth]");
    std::cerr << "building gap family up to j = " << jmax << "\n";
    const gap::GapFamily fam = gap::build_gap_family(t, jmax);
    std::cerr << "materializing c_M with M = " << M << "\n";
    const gap::GapReport g = gap::gap_demonstration(fam, M, jmax);
    emit(out, io::dump(io::gap_report_json(g)));
    return g.report.pass() ? 0 : kExitFail;
}

int cmd_verify(const std::string& in_dir) {
    const fs::path dir(in_dir);
    const circle::Tower t = io::tower_from(Json::parse(io::read_file((dir / "tower.json").string())));
    std::vector<tau::TauLevel> levels;
    for (int n = 1; n <= t.depth(); ++n) {
        const fs::path p = dir / ("tau_level_" + std::to_string(n) + ".json");
        if (!fs::exists(p)) break;
        levels.push_back(io::tau_level_from(Json::parse(io::read_file(p.string())), t));
    }
    if (levels.empty()) throw Error(ErrorCode::ParseError, "no tau_level_*.json files in " + in_dir);
    Json ledger_saved = Json::array();
    if (fs::exists(dir / "ledger.json")) ledger_saved = Json::parse(io::read_file((dir / "ledger.json").string()));

    Json out = Json::object();
    bool ok = true;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const tau::TauLevel* prev = k ? &levels[k - 1] : nullptr;
        Report rep = tau::verify_level(levels[k], prev, t);
        const std::string tag = std::to_string(k + 1);
        const fs::path csv = dir / ("quasi_cost_" + tag + ".csv");
        if (fs::exists(csv))
            rep.add("quasi_cost_csv", io::read_file(csv.string()) ==
                                          io::step_function_csv(tau::quasi_cost(levels[k], t)));
        if (k < ledger_saved.size())
            rep.add("ledger", ledger_saved[k] == io::ledger_json(tau::singular_ledger(levels[k], prev, t)));
        const duals::DualPairLevel pair = duals::corrected_pair(levels[k], t, std::min<int>(k + 2, t.depth()));
        for (const auto& c : duals::verify_feasibility(pair, levels[k], t).checks) rep.checks.push_back(c);
        ok = ok && rep.pass();
        out[tag] = io::report_json(rep);
    }
    std::cout << io::dump({{"pass", ok}, {"levels", out}});
    return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact optimal-transport duality laboratory"};
    app.require_subcommand(1);

    std::string instance, out, eps;
    auto* solve = app.add_subcommand("solve", "solve a finite transport instance and certify the result");
    solve->add_option("instance", instance, "instance JSON")->required();
    solve->add_option("-o,--out", out, "report path (default stdout)");
    solve->add_option("--eps", eps, "comma-separated eps values for the relaxed dual");

    TowerFlags ctf;
    int levels = 1;
    std::string out_dir = "tdl_out";
    auto* construct = app.add_subcommand("construct", "build tau levels and write artifacts");
    add_tower_flags(construct, ctf, 1);
    construct->add_option("--levels", levels, "number of levels to build");
    construct->add_option("-o,--out", out_dir, "output directory");

    TowerFlags gtf;
    int M = 2, jmax = 2;
    std::string gap_out;
    auto* gapc = app.add_subcommand("gap", "build the gap family and report the truncated-cost values");
    add_tower_flags(gapc, gtf, 2);
    gapc->add_option("--M", M, "number of tau graphs in c_M")->check(CLI::Range(1, 64));
    gapc->add_option("--jmax", jmax, "deepest level of the family");
    gapc->add_option("-o,--out", gap_out, "report path (default stdout)");

    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "re-run invariant checks on construct artifacts");
    verify->add_option("dir", verify_dir, "artifact directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*solve) return cmd_solve(instance, out, eps);
        if (*construct) {
            if (levels > ctf.depth) ctf.depth = levels;
            return cmd_construct(ctf, levels, out_dir);
        }
        if (*gapc) {
            if (jmax > gtf.depth) gtf.depth = jmax;
            return cmd_gap(gtf, M, jmax, gap_out);
        }
        if (*verify) return cmd_verify(verify_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
