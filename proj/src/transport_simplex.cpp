#include "tdl/error.hpp"
#include "tdl/finite_ot.hpp"

#include <cstdint>
#include <deque>
#include <limits>

namespace tdl::ot {

namespace {

// Cost with a symbolic big-M component: infinite arcs cost (1, 0), finite ones (0, c).
struct LexCost {
    std::int64_t big = 0;
    Rational small{0};
};

LexCost lex_of(const ExtRational& e) {
    LexCost l;
    if (e.is_infinite())
        l.big = 1;
    else
        l.small = e.value();
    return l;
}

bool lex_negative(const LexCost& x) { return x.big < 0 || (x.big == 0 && sgn(x.small) < 0); }

struct Arc {
    std::size_t row, col;  // indices into the active row/col lists
    Rational flow;
};

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

void check_marginals(const CostMatrix& cost, const Marginals& marg) {
    if (marg.mu.size() != cost.rows() || marg.nu.size() != cost.cols())
        throw Error(ErrorCode::DimensionMismatch, "marginal lengths do not match the cost matrix");
    Rational smu = 0, snu = 0;
    for (const auto& v : marg.mu) {
        if (sgn(v) < 0) throw Error(ErrorCode::InvalidArgument, "negative marginal entry");
        smu += v;
    }
    for (const auto& v : marg.nu) {
        if (sgn(v) < 0) throw Error(ErrorCode::InvalidArgument, "negative marginal entry");
        snu += v;
    }
    if (smu != snu)
        throw Error(ErrorCode::InfeasibleMarginals,
                    "sum(mu) = " + to_string(smu) + " differs from sum(nu) = " + to_string(snu));
}

TransportPlan solve_primal(const CostMatrix& cost, const Marginals& marg) {
    check_marginals(cost, marg);
    TransportPlan plan;
    plan.rows = cost.rows();
    plan.cols = cost.cols();
    plan.entries.assign(plan.rows * plan.cols, Rational(0));

    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < cost.rows(); ++i)
        if (sgn(marg.mu[i]) > 0) rows.push_back(i);
    for (std::size_t j = 0; j < cost.cols(); ++j)
        if (sgn(marg.nu[j]) > 0) cols.push_back(j);
    if (rows.empty()) return plan;

    const std::size_t r = rows.size(), c = cols.size();
    std::vector<LexCost> lc(r * c);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < c; ++b) lc[a * c + b] = lex_of(cost.at(rows[a], cols[b]));

    // Northwest-corner starting basis: r + c - 1 arcs forming a spanning tree.
    std::vector<Arc> basis;
    std::vector<std::size_t> arc_at(r * c, kNone);
    {
        std::vector<Rational> supply(r), demand(c);
        for (std::size_t a = 0; a < r; ++a) supply[a] = marg.mu[rows[a]];
        for (std::size_t b = 0; b < c; ++b) demand[b] = marg.nu[cols[b]];
        std::size_t a = 0, b = 0;
        for (;;) {
            Rational x = supply[a] < demand[b] ? supply[a] : demand[b];
            arc_at[a * c + b] = basis.size();
            basis.push_back({a, b, x});
            supply[a] -= x;
            demand[b] -= x;
            if (a == r - 1 && b == c - 1) break;
            if (sgn(supply[a]) == 0 && a < r - 1)
                ++a;
            else
                ++b;
        }
    }

    const std::size_t nodes = r + c;  // rows first, then cols
    std::vector<std::vector<std::size_t>> adj(nodes);
    std::vector<LexCost> pot(nodes);
    std::vector<char> known(nodes);
    std::vector<std::size_t> via(nodes);
    std::deque<std::size_t> queue;
    LexCost red;

    for (;;) {
        for (auto& v : adj) v.clear();
        for (std::size_t k = 0; k < basis.size(); ++k) {
            adj[basis[k].row].push_back(k);
            adj[r + basis[k].col].push_back(k);
        }

        // Potentials u_a + v_b = cost on basic arcs, rooted at row 0.
        std::fill(known.begin(), known.end(), 0);
        pot[0] = LexCost{};
        known[0] = 1;
        queue.assign(1, 0);
        while (!queue.empty()) {
            std::size_t node = queue.front();
            queue.pop_front();
            for (std::size_t k : adj[node]) {
                const Arc& arc = basis[k];
                std::size_t other = node < r ? r + arc.col : arc.row;
                if (known[other]) continue;
                const LexCost& cc = lc[arc.row * c + arc.col];
                pot[other].big = cc.big - pot[node].big;
                pot[other].small = cc.small - pot[node].small;
                known[other] = 1;
                queue.push_back(other);
            }
        }

        std::size_t ea = kNone, eb = kNone;
        for (std::size_t a = 0; a < r && ea == kNone; ++a) {
            for (std::size_t b = 0; b < c; ++b) {
                if (arc_at[a * c + b] != kNone) continue;
                const LexCost& cc = lc[a * c + b];
                red.big = cc.big - pot[a].big - pot[r + b].big;
                red.small = cc.small - pot[a].small - pot[r + b].small;
                if (lex_negative(red)) {
                    ea = a;
                    eb = b;
                    break;
                }
            }
        }
        if (ea == kNone) break;

        // Tree path from the entering column back to the entering row.
        std::fill(known.begin(), known.end(), 0);
        const std::size_t start = r + eb, goal = ea;
        known[start] = 1;
        queue.assign(1, start);
        while (!queue.empty() && !known[goal]) {
            std::size_t node = queue.front();
            queue.pop_front();
            for (std::size_t k : adj[node]) {
                const Arc& arc = basis[k];
                std::size_t other = node < r ? r + arc.col : arc.row;
                if (known[other]) continue;
                known[other] = 1;
                via[other] = k;
                queue.push_back(other);
            }
        }
        std::vector<std::size_t> path;  // from goal back towards start
        for (std::size_t node = goal; node != start;) {
            std::size_t k = via[node];
            path.push_back(k);
            node = node < r ? r + basis[k].col : basis[k].row;
        }
        // path[0] touches the entering row and gets -, then signs alternate.
        std::size_t leave = kNone;
        for (std::size_t t = 0; t < path.size(); t += 2) {
            const Arc& arc = basis[path[t]];
            if (leave == kNone) {
                leave = path[t];
                continue;
            }
            const Arc& cur = basis[leave];
            int cmpv = cmp(arc.flow, cur.flow);
            if (cmpv < 0 ||
                (cmpv == 0 && rows[arc.row] * cost.cols() + cols[arc.col] <
                                  rows[cur.row] * cost.cols() + cols[cur.col]))
                leave = path[t];
        }
        Rational theta = basis[leave].flow;
        for (std::size_t t = 0; t < path.size(); ++t) {
            if (t % 2 == 0)
                basis[path[t]].flow -= theta;
            else
                basis[path[t]].flow += theta;
        }
        Arc& out = basis[leave];
        arc_at[out.row * c + out.col] = kNone;
        out.row = ea;
        out.col = eb;
        out.flow = theta;
        arc_at[ea * c + eb] = leave;
    }

    for (const Arc& arc : basis) {
        if (sgn(arc.flow) == 0) continue;
        const ExtRational& e = cost.at(rows[arc.row], cols[arc.col]);
        if (e.is_infinite())
            throw Error(ErrorCode::NoFinitePlan, "every coupling puts mass on an infinite-cost entry");
        plan.entries[rows[arc.row] * plan.cols + cols[arc.col]] = arc.flow;
        plan.value += arc.flow * e.value();
    }
    return plan;
}

}  // namespace tdl::ot
