#include "tdl/error.hpp"
#include "tdl/finite_ot.hpp"

#include <algorithm>
#include <limits>

namespace tdl::ot {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Edge {
    std::size_t from, to;
    Rational w;
};

// Bellman-Ford from a virtual source joined to every node with weight 0.
// Returns a node on a negative cycle (walked back into it), or kNone.
std::size_t bellman_ford(std::size_t nodes, const std::vector<Edge>& edges, std::vector<Rational>& dist,
                         std::vector<std::size_t>& pred) {
    dist.assign(nodes, Rational(0));
    pred.assign(nodes, kNone);
    Rational cand;
    std::size_t last = kNone;
    for (std::size_t pass = 0; pass <= nodes; ++pass) {
        last = kNone;
        for (const Edge& e : edges) {
            cand = dist[e.from] + e.w;
            if (cand < dist[e.to]) {
                dist[e.to] = cand;
                pred[e.to] = e.from;
                last = e.to;
            }
        }
        if (last == kNone) return kNone;
    }
    for (std::size_t k = 0; k < nodes; ++k) last = pred[last];
    return last;
}

std::vector<Pair> dedupe_checked(const std::vector<Pair>& support, const CostMatrix& cost) {
    std::vector<Pair> s = support;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (const auto& [i, j] : s) {
        if (i >= cost.rows() || j >= cost.cols())
            throw Error(ErrorCode::DimensionMismatch, "support pair outside the cost matrix");
        if (cost.at(i, j).is_infinite())
            throw Error(ErrorCode::InfiniteCostInSupport,
                        "(" + std::to_string(i) + "," + std::to_string(j) + ") has infinite cost");
    }
    return s;
}

}  // namespace

MonotonicityResult is_cyclically_monotone(const std::vector<Pair>& support, const CostMatrix& cost) {
    const std::vector<Pair> s = dedupe_checked(support, cost);
    const std::size_t k = s.size();
    std::vector<Edge> edges;
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            if (p == q) continue;
            const ExtRational& swap = cost.at(s[p].first, s[q].second);
            if (swap.is_infinite()) continue;
            edges.push_back({p, q, swap.value() - cost.at(s[p].first, s[p].second).value()});
        }
    }
    std::vector<Rational> dist;
    std::vector<std::size_t> pred;
    MonotonicityResult res;
    std::size_t v = bellman_ford(k, edges, dist, pred);
    if (v == kNone) return res;
    res.monotone = false;
    std::vector<std::size_t> cyc{v};
    for (std::size_t u = pred[v]; u != v; u = pred[u]) cyc.push_back(u);
    std::reverse(cyc.begin(), cyc.end());
    for (std::size_t u : cyc) res.witness.push_back(s[u]);
    return res;
}

std::optional<DualPair> strong_monotone_potentials(const std::vector<Pair>& support, const CostMatrix& cost) {
    const std::vector<Pair> s = dedupe_checked(support, cost);
    const std::size_t r = cost.rows(), c = cost.cols();
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (cost.at(i, j).is_finite()) edges.push_back({i, r + j, cost.at(i, j).value()});
    for (const auto& [i, j] : s) edges.push_back({r + j, i, -cost.at(i, j).value()});
    std::vector<Rational> dist;
    std::vector<std::size_t> pred;
    if (bellman_ford(r + c, edges, dist, pred) != kNone) return std::nullopt;
    DualPair d;
    d.phi.resize(r);
    d.psi.resize(c);
    for (std::size_t i = 0; i < r; ++i) d.phi[i] = -dist[i];
    for (std::size_t j = 0; j < c; ++j) d.psi[j] = dist[r + j];
    return d;
}

}  // namespace tdl::ot
