#pragma once

#include "tdl/rational.hpp"

#include <cstddef>
#include <utility>
#include <vector>

// Dense two-phase tableau simplex over exact rationals with Bland's rule.
namespace tdl::lp {

enum class Sense { LessEq, Equal, GreaterEq };
enum class Status { Optimal, Infeasible, Unbounded };

struct Constraint {
    std::vector<std::pair<std::size_t, Rational>> terms;
    Sense sense = Sense::Equal;
    Rational rhs{0};
};

struct Problem {
    std::size_t num_vars = 0;
    std::vector<Rational> objective;  // size num_vars; missing entries read as 0
    std::vector<bool> free_var;       // size num_vars or empty (all nonnegative)
    bool maximize = false;
    std::vector<Constraint> constraints;

    std::size_t add_var(const Rational& cost, bool is_free = false);
    void add_constraint(Constraint c) { constraints.push_back(std::move(c)); }
};

struct Result {
    Status status = Status::Infeasible;
    std::vector<Rational> x;
    Rational objective{0};
    // Constraint multipliers; at optimum sum_i duals[i] * rhs[i] == objective.
    std::vector<Rational> duals;
    std::size_t pivots = 0;
};

Result solve(const Problem& problem);

}  // namespace tdl::lp
