#include "tdl/gap.hpp"

#include "tdl/error.hpp"
#include "tdl/kernels.hpp"
#include "tdl/tau.hpp"

#include <algorithm>
#include <numeric>

namespace tdl::gap {

using circle::Tower;

namespace {

constexpr std::int64_t kMaxMaterialized = 2000;

std::int64_t circle_distance(std::int64_t a, std::int64_t b, std::int64_t M) {
    std::int64_t d = a > b ? a - b : b - a;
    return std::min(d, M - d);
}

GapCell first_cell(const Tower& t) {
    const tau::TauLevel base = tau::build_tau_level1(t);
    GapCell c;
    c.n = c.j = 1;
    c.tau.assign(base.size(), 0);
    c.changed.assign(base.size(), 0);
    // Inverse of the level-1 map: tau_{1,1}(sigma_1 x) = -tau_1(x).
    for (std::size_t x = 0; x < base.size(); ++x) c.tau[base.sigma[x]] = -base.tau[x];
    c.sigma = tau::induced_permutation(t, 1, c.tau);
    return c;
}

// Diagonal cell tau_{j,j}, j >= 2: inverse of the block map that pulls the left run back by
// M_{j-1} steps, pushes the right run forward by M_{j-1} steps and sends the 2 M_{j-1}
// boundary subs onto the vacated subs around the middle sub.
GapCell diagonal_cell(const Tower& t, int j) {
    const std::int64_t Mp = t.modulus(j - 1), m = t.prime(j), M = t.modulus(j);
    if (m < 2 * Mp + 1)
        throw Error(ErrorCode::GrowthTooSmall, "m_" + std::to_string(j) + " = " + std::to_string(m) +
                                                   " is below 2 M_{j-1} + 1 = " + std::to_string(2 * Mp + 1));
    const tau::MiddleGuard guard(t, j);
    const std::int64_t half = (m - 1) / 2;
    std::vector<std::int64_t> lit(M, 0);
    for (std::int64_t b = 0; b < Mp; ++b) {
        std::int64_t* bt = &lit[b * m];
        std::int64_t gap = half - Mp;
        for (std::int64_t s = 0; s < m; ++s) {
            if (s == half) continue;
            if (s >= Mp && s < half) {
                bt[s] = -Mp;
            } else if (s > half && s < m - Mp) {
                bt[s] = Mp;
            } else {
                if (gap == half) ++gap;
                bt[s] = guard.steps_to(b * m + s, b * m + gap);
                ++gap;
            }
        }
    }
    const std::vector<std::int64_t> lit_sigma = tau::induced_permutation(t, j, lit);
    GapCell c;
    c.n = c.j = j;
    c.tau.assign(M, 0);
    c.changed.assign(M, 0);
    for (std::int64_t x = 0; x < M; ++x) c.tau[lit_sigma[x]] = -lit[x];
    c.sigma = tau::induced_permutation(t, j, c.tau);
    return c;
}

GapCell extend_cell(const GapCell& prev, const Tower& t) {
    const int j = prev.j + 1;
    const std::int64_t Mp = t.modulus(j - 1), m = t.prime(j);
    const tau::MiddleGuard guard(t, j);
    GapCell c;
    c.n = prev.n;
    c.j = j;
    c.tau.assign(Mp * m, 0);
    c.changed.assign(Mp * m, 0);
    for (std::int64_t b = 0; b < Mp; ++b)
        tau::extend_good_block(t, j, guard, b, prev.tau[b], prev.sigma[b], &c.tau[b * m], &c.changed[b * m]);
    c.sigma = tau::induced_permutation(t, j, c.tau);
    return c;
}

Rational zero_set_eta(const std::vector<std::int64_t>& q) {
    const auto nonzero = std::count_if(q.begin(), q.end(), [](std::int64_t v) { return v != 0; });
    return make_rational(nonzero, static_cast<std::int64_t>(q.size()));
}

bool is_permutation(const std::vector<std::int64_t>& sigma, std::string& detail) {
    std::vector<std::int64_t> seen(sigma.size(), -1);
    for (std::size_t l = 0; l < sigma.size(); ++l) {
        const std::int64_t s = sigma[l];
        if (s < 0 || s >= static_cast<std::int64_t>(sigma.size())) {
            detail = "sigma(" + std::to_string(l) + ") out of range";
            return false;
        }
        if (seen[s] >= 0) {
            detail = "indices " + std::to_string(seen[s]) + " and " + std::to_string(l) + " both map to " +
                     std::to_string(s);
            return false;
        }
        seen[s] = static_cast<std::int64_t>(l);
    }
    return true;
}

}  // namespace

GapCell GapFamily::limit(int n, int j) const {
    if (n >= 2) return cell(n, j);
    GapCell c;
    c.n = n;
    c.j = j;
    const std::int64_t M = tower.modulus(j);
    c.tau.assign(M, n);
    c.changed.assign(M, 0);
    c.sigma = tau::induced_permutation(tower, j, c.tau);
    return c;
}

std::vector<std::int64_t> cell_quasi_cost(const GapCell& cell, const Tower& t) {
    const circle::StepFunction phi = circle::phi_level(t, cell.j);
    std::vector<std::int64_t> q(cell.sigma.size());
    for (std::size_t l = 0; l < q.size(); ++l) q[l] = 1 + phi.numer[l] - phi.numer[cell.sigma[l]];
    return q;
}

GapFamily build_gap_family(const Tower& t, int j_max) {
    if (j_max < 1 || j_max > t.depth())
        throw Error(ErrorCode::TowerTooShallow, "gap family needs 1 <= j_max <= depth");
    GapFamily f;
    f.tower = t;
    f.j_max = j_max;
    for (int j = 1; j <= j_max; ++j) {
        std::vector<GapCell> col;
        for (int n = 1; n < j; ++n) col.push_back(extend_cell(f.columns.back()[n - 1], t));
        col.push_back(j == 1 ? first_cell(t) : diagonal_cell(t, j));
        f.eta.push_back(zero_set_eta(cell_quasi_cost(col.back(), t)));
        f.columns.push_back(std::move(col));
    }
    return f;
}

Report verify_prop41(const GapFamily& family, int n, int j) {
    const Tower& t = family.tower;
    const GapCell& c = family.cell(n, j);
    const std::int64_t M = t.modulus(j), Mp = t.parent_modulus(n);
    Report r;

    std::string detail;
    const bool perm = is_permutation(c.sigma, detail) && c.sigma == tau::induced_permutation(t, j, c.tau);
    r.add("permutation", perm, detail);

    {
        const tau::MiddleGuard guard(t, j);
        std::int64_t bad = 0;
        for (std::int64_t l = 0; l < M; ++l)
            if (!guard.avoids(l, c.tau[l])) ++bad;
        r.add("middle_avoidance", bad == 0, bad ? std::to_string(bad) + " failures" : "");
    }

    const std::vector<std::int64_t> q = cell_quasi_cost(c, t);
    const std::int64_t s = kernels::sum(q.data(), q.size());
    r.add("quasi_cost_mean_one", s == M, "sum q / M_j = " + to_string(make_rational(s, M)));

    {
        // Blocks of level n-1 map onto themselves: displacement below M_j / M_{n-1} index units.
        std::int64_t worst = 0;
        bool same_block = true;
        const std::int64_t block = M / Mp;
        for (std::int64_t l = 0; l < M; ++l) {
            worst = std::max(worst, circle_distance(l, c.sigma[l], M));
            if (n >= 2 && l / block != c.sigma[l] / block) same_block = false;
        }
        r.add("displacement", Rational(worst) < make_rational(M, Mp) && same_block,
              "max displacement " + to_string(make_rational(worst, M)) + " < 1/M_{n-1} = " +
                  to_string(make_rational(1, Mp)));
    }

    if (n == j) {
        const Rational expect = n == 1 ? make_rational(3, t.prime(1))
                                       : make_rational(2 * t.modulus(n - 1) + 1, t.prime(n));
        r.add("zero_set_measure", family.eta[n - 1] == expect,
              "mu{q != 0} = " + to_string(family.eta[n - 1]) + ", expected " + to_string(expect));
    }

    if (j > n) {
        const GapCell& prev = family.cell(n, j - 1);
        const std::int64_t m = t.prime(j);
        std::int64_t worst = 0;
        for (std::size_t b = 0; b < prev.tau.size(); ++b) {
            std::int64_t changed = 0;
            for (std::int64_t s2 = 0; s2 < m; ++s2) changed += c.tau[b * m + s2] != prev.tau[b] ? 1 : 0;
            worst = std::max(worst, changed);
        }
        const std::int64_t bound = t.modulus(j - 1);
        r.add("stabilization", worst <= bound,
              "max changed subs per block " + std::to_string(worst) + " <= M_{j-1} = " + std::to_string(bound));
    }

    if (family.eta[n - 1] > 0) {
        // Best two-valued g: 0 on the zero set of q(tau_{n,n}) lifted to level j, (1 - eta)/eta elsewhere.
        const Rational& eta = family.eta[n - 1];
        const std::vector<std::int64_t> qd = cell_quasi_cost(family.cell(n, n), t);
        const std::int64_t factor = M / t.modulus(n);
        const Rational v = (1 - eta) / eta;
        Rational norm = 0;
        for (std::int64_t l = 0; l < M; ++l) {
            const Rational g = qd[l / factor] == 0 ? Rational(0) : v;
            Rational d = Rational(q[l]) - g;
            norm += abs(d);
        }
        norm /= M;
        const Rational target = make_rational(1, std::int64_t{1} << std::min(n, 62));
        const std::string msg = "||f_n - g_n|| = " + to_string(norm) + " vs 2^-n = " + to_string(target);
        if (t.mode != circle::Mode::Compliant)
            r.skip("f_minus_g", msg + " (relaxed tower)");
        else if (n == 1)
            r.skip("f_minus_g", msg + " (level 1 is fixed by the base map)");
        else
            r.add("f_minus_g", norm < target, msg);
    }
    return r;
}

ot::CostMatrix TruncatedCost::to_matrix() const {
    const std::size_t N = size();
    if (static_cast<std::int64_t>(N) > kMaxMaterialized)
        throw Error(ErrorCode::InvalidArgument, "level too large to materialize as a dense matrix");
    ot::CostMatrix c(N, N);
    for (std::size_t k = 0; k < graphs.size(); ++k) {
        for (std::size_t l = 0; l < N; ++l) {
            const std::size_t y = static_cast<std::size_t>(graphs[k][l]);
            const ExtRational v(values[k][l]);
            const ExtRational& cur = c.at(l, y);
            if (cur.is_finite() && cur != v)
                throw Error(ErrorCode::GraphOverlapInconsistency,
                            "pair (" + std::to_string(l) + ", " + std::to_string(y) + ") carries " + to_string(cur) +
                                " and " + to_string(v));
            c.set(l, y, v);
        }
    }
    return c;
}

TruncatedCost materialize_cost(const GapFamily& family, int M, int j) {
    if (M < 1 || j > family.j_max || (M >= 2 && M > j))
        throw Error(ErrorCode::TowerTooShallow, "need M <= j <= j_max to materialize c_M");
    const Tower& t = family.tower;
    TruncatedCost tc;
    tc.M = M;
    tc.level = j;
    for (int k = 0; k <= M; ++k) {
        const GapCell c = family.limit(k, j);
        std::vector<std::int64_t> q = cell_quasi_cost(c, t);
        for (auto& v : q) v = std::max<std::int64_t>(v, 0);
        tc.graphs.push_back(c.sigma);
        tc.values.push_back(std::move(q));
    }
    return tc;
}

namespace {

// Smallest d such that the residual marginals admit a plan inside {dist <= d}.
std::int64_t min_completion_distance(const std::vector<std::uint8_t>& row_used,
                                     const std::vector<std::uint8_t>& col_used) {
    const std::size_t N = row_used.size();
    const std::int64_t M = static_cast<std::int64_t>(N);
    ot::Marginals marg;
    for (std::size_t i = 0; i < N; ++i) {
        marg.mu.push_back(row_used[i] ? Rational(0) : make_rational(1, M));
        marg.nu.push_back(col_used[i] ? Rational(0) : make_rational(1, M));
    }
    auto feasible = [&](std::int64_t d) {
        ot::CostMatrix c(N, N);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k)
                if (circle_distance(static_cast<std::int64_t>(i), static_cast<std::int64_t>(k), M) <= d)
                    c.set(i, k, ExtRational(0));
        try {
            ot::solve_primal(c, marg);
            return true;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NoFinitePlan) return false;
            throw;
        }
    };
    std::int64_t lo = 0, hi = M / 2;
    while (lo < hi) {
        const std::int64_t mid = (lo + hi) / 2;
        if (feasible(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

struct Edge {
    std::int64_t cost;
    int graph;
    std::int64_t row, col;
};

BetaCandidate greedy_candidate(const std::string& name, std::vector<Edge> edges, std::int64_t N) {
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.cost < b.cost; });
    std::vector<std::uint8_t> row_used(N, 0), col_used(N, 0);
    std::int64_t count = 0, cost = 0;
    for (const Edge& e : edges) {
        if (row_used[e.row] || col_used[e.col]) continue;
        // cost / N <= 1/2
        if (2 * (cost + e.cost) > N) continue;
        row_used[e.row] = col_used[e.col] = 1;
        ++count;
        cost += e.cost;
    }
    BetaCandidate c;
    c.name = name;
    c.mass = make_rational(count, N);
    c.cost = make_rational(cost, N);
    c.admissible = 3 * count >= 2 * N && 2 * cost <= N;
    if (c.admissible) c.min_distance = min_completion_distance(row_used, col_used);
    return c;
}

}  // namespace

Prop42Result verify_prop42(const GapFamily& family, int M, int j) {
    Prop42Result out;
    const TruncatedCost tc = materialize_cost(family, M, j);
    const ot::CostMatrix cost = tc.to_matrix();
    const std::size_t N = cost.rows();
    const ot::Marginals marg = ot::Marginals::uniform(N, N);
    const ot::TransportPlan plan = ot::solve_primal(cost, marg);
    const ot::DualPair duals = ot::solve_dual(cost, marg);
    out.primal = plan.value;
    out.dual = duals.value;
    out.report.add("primal_one", out.primal == 1, "P = " + to_string(out.primal));
    out.report.add("dual_one", out.dual == 1, "D = " + to_string(out.dual));
    out.report.add("slackness", ot::check_complementary_slackness(plan, duals, cost).pass());

    std::vector<Edge> all, cheap;
    for (std::size_t k = 0; k < tc.graphs.size(); ++k) {
        for (std::size_t l = 0; l < N; ++l) {
            Edge e{tc.values[k][l], static_cast<int>(k), static_cast<std::int64_t>(l), tc.graphs[k][l]};
            all.push_back(e);
            if (k >= 1 && e.cost == 0) cheap.push_back(e);
        }
    }
    const std::int64_t n = static_cast<std::int64_t>(N);
    out.candidates.push_back(greedy_candidate("cheapest_first", all, n));
    out.candidates.push_back(greedy_candidate("zero_cost_graphs", cheap, n));
    // Zero-cost edges first, then the remaining budget spent along each single graph.
    for (std::size_t k = 0; k < tc.graphs.size(); ++k) {
        std::vector<Edge> mix = cheap;
        for (const Edge& e : all)
            if (e.graph == static_cast<int>(k) && e.cost > 0) mix.push_back(e);
        out.candidates.push_back(greedy_candidate("zero_cost_then_graph_" + std::to_string(k), mix, n));
    }
    // Identity graph alone: mass 1 at cost 1, never admissible.
    {
        std::vector<Edge> id;
        for (const Edge& e : all)
            if (e.graph == 0) id.push_back(e);
        BetaCandidate c;
        c.name = "identity";
        c.mass = 1;
        c.cost = 1;
        c.admissible = false;
        out.candidates.push_back(c);
    }

    bool any = false;
    std::int64_t best = 0;
    for (const auto& c : out.candidates) {
        if (!c.admissible) continue;
        if (!any || c.min_distance < best) best = c.min_distance;
        any = true;
    }
    out.beta_threshold = any ? make_rational(best, n) : Rational(0);
    if (any)
        out.report.add("beta_separation", best > 0,
                       "every admissible candidate needs completion distance >= " + to_string(out.beta_threshold));
    else
        out.report.skip("beta_separation", "no admissible candidate");
    return out;
}

GapReport gap_demonstration(const GapFamily& family, int M, int j) {
    GapReport g;
    g.M = M;
    g.j = j;
    const Tower& t = family.tower;
    const Prop42Result p = verify_prop42(family, M, j);
    g.primal = p.primal;
    g.dual = p.dual;
    g.beta_threshold = p.beta_threshold;
    g.report = p.report;
    const std::int64_t Mj = t.modulus(j);
    for (int n = 1; n <= j; ++n) {
        g.eta[n] = family.eta[n - 1];
        const std::vector<std::int64_t> zero = cell_quasi_cost(family.cell(n, n), t);
        const std::vector<std::int64_t> f = cell_quasi_cost(family.cell(n, j), t);
        const std::int64_t factor = Mj / t.modulus(n);
        std::int64_t w = 0;
        for (std::int64_t l = 0; l < Mj; ++l)
            if (zero[l / factor] == 0) w += std::max<std::int64_t>(f[l], 0);
        g.witness_cost[n] = make_rational(w, Mj);
        const Report r41 = verify_prop41(family, n, j);
        for (const auto& c : r41.checks)
            g.report.checks.push_back({"cell_" + std::to_string(n) + "_" + std::to_string(j) + "_" + c.name, c.status,
                                       c.detail});
    }
    bool decreasing = true, empty_zero_set = false;
    std::string values;
    for (int n = 1; n <= j; ++n) {
        values += (n > 1 ? " " : "") + to_string(family.eta[n - 1]);
        if (n >= 2 && !(family.eta[n - 1] < family.eta[n - 2])) decreasing = false;
        if (n >= 2 && family.eta[n - 1] == 1) empty_zero_set = true;
    }
    // eta_n = 1 means tau_{n,n} has no zero-cost runs: m_n is below the block width it needs.
    if (j >= 2 && empty_zero_set && t.mode == circle::Mode::Relaxed)
        g.report.skip("eta_decreasing", "eta = " + values + " (zero set empty on this relaxed tower)");
    else if (j >= 2)
        g.report.add("eta_decreasing", decreasing, "eta = " + values);
    return g;
}

}  // namespace tdl::gap
