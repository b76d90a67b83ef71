#pragma once

#include "tdl/circle.hpp"
#include "tdl/finite_ot.hpp"
#include "tdl/rational.hpp"
#include "tdl/report.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tdl::gap {

// tau_{n,j}: a permutation of Z/M_j Z given by rotation step counts.
struct GapCell {
    int n = 1, j = 1;
    std::vector<std::int64_t> tau;
    std::vector<std::int64_t> sigma;
    // Subs whose step count differs from the parent value (n < j only).
    std::vector<std::uint8_t> changed;
};

struct GapFamily {
    circle::Tower tower;
    int j_max = 1;
    std::vector<std::vector<GapCell>> columns;  // columns[j-1][n-1], n <= j
    std::vector<Rational> eta;                  // eta[n-1] = mu{q(tau_{n,n}) != 0}

    const GapCell& cell(int n, int j) const { return columns.at(j - 1).at(n - 1); }
    // tau_0 = 0, tau_1 = 1 (plain rotation), tau_n = tau_{n, j} for n >= 2, all at level j.
    GapCell limit(int n, int j) const;
};

GapFamily build_gap_family(const circle::Tower& t, int j_max);

// 1 + phi^j(l) - phi^j(sigma(l)) at the cell's level.
std::vector<std::int64_t> cell_quasi_cost(const GapCell& cell, const circle::Tower& t);

Report verify_prop41(const GapFamily& family, int n, int j);

struct TruncatedCost {
    int M = 1;
    int level = 1;
    // graphs[k] is the permutation of T^(tau_k); values[k][l] = h_+(l, graphs[k][l]).
    std::vector<std::vector<std::int64_t>> graphs;
    std::vector<std::vector<std::int64_t>> values;

    std::size_t size() const { return graphs.empty() ? 0 : graphs[0].size(); }
    // Throws GraphOverlapInconsistency if two graphs share a pair with different values.
    ot::CostMatrix to_matrix() const;
};

TruncatedCost materialize_cost(const GapFamily& family, int M, int j);

struct BetaCandidate {
    std::string name;
    Rational mass{0};
    Rational cost{0};
    bool admissible = false;          // mass >= 2/3 and cost <= 1/2
    std::int64_t min_distance = 0;    // smallest d with a completion inside {dist <= d}
};

struct Prop42Result {
    Rational primal{0};
    Rational dual{0};
    std::vector<BetaCandidate> candidates;
    Rational beta_threshold{0};  // min over admissible candidates of min_distance / M_j
    Report report;
};

Prop42Result verify_prop42(const GapFamily& family, int M, int j);

struct GapReport {
    int M = 1, j = 1;
    Rational primal{0};
    Rational dual{0};
    std::map<int, Rational> eta;
    std::map<int, Rational> witness_cost;
    Rational beta_threshold{0};
    Report report;
};

GapReport gap_demonstration(const GapFamily& family, int M, int j);

}  // namespace tdl::gap
