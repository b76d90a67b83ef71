#pragma once

#include "tdl/rational.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace tdl::ot {

using Pair = std::pair<std::size_t, std::size_t>;

class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(std::size_t rows, std::size_t cols);  // all +inf
    CostMatrix(std::size_t rows, std::size_t cols, std::vector<ExtRational> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const ExtRational& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, ExtRational v);
    const std::vector<ExtRational>& entries() const { return entries_; }
    std::size_t finite_count() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<ExtRational> entries_;
};

struct Marginals {
    std::vector<Rational> mu, nu;

    static Marginals uniform(std::size_t rows, std::size_t cols);
};

struct TransportPlan {
    std::size_t rows = 0, cols = 0;
    std::vector<Rational> entries;
    Rational value{0};

    const Rational& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
    std::vector<Pair> support() const;
};

struct DualPair {
    std::vector<Rational> phi, psi;
    Rational value{0};
};

struct PartialPlan {
    std::size_t rows = 0, cols = 0;
    std::vector<Rational> entries;
    Rational mass{0};
};

// Throws DimensionMismatch, InvalidArgument (negative entry) or InfeasibleMarginals.
void check_marginals(const CostMatrix& cost, const Marginals& marg);

// Exact optimum by transportation network simplex (Bland's rule, lexicographic big-M on +inf arcs).
TransportPlan solve_primal(const CostMatrix& cost, const Marginals& marg);

// Exact optimum of the dual LP, solved on a dense tableau independently of solve_primal.
DualPair solve_dual(const CostMatrix& cost, const Marginals& marg);

bool dual_feasible(const DualPair& duals, const CostMatrix& cost);
Rational dual_value(const DualPair& duals, const Marginals& marg);

struct SlacknessReport {
    std::vector<Pair> slack_violations;        // plan > 0 but c > phi + psi
    std::vector<Pair> feasibility_violations;  // phi + psi > c on a finite entry
    std::vector<Pair> infinite_mass;           // plan > 0 on an infinite entry
    bool pass() const {
        return slack_violations.empty() && feasibility_violations.empty() && infinite_mass.empty();
    }
};

SlacknessReport check_complementary_slackness(const TransportPlan& plan, const DualPair& duals,
                                              const CostMatrix& cost);

struct MonotonicityResult {
    bool monotone = true;
    std::vector<Pair> witness;  // cycle (i_1,j_1),...,(i_k,j_k); reassigning i_t -> j_{t+1} is cheaper
};

MonotonicityResult is_cyclically_monotone(const std::vector<Pair>& support, const CostMatrix& cost);

std::optional<DualPair> strong_monotone_potentials(const std::vector<Pair>& support,
                                                   const CostMatrix& cost);

struct RelaxedDual {
    DualPair duals;
    Rational value{0};
};

RelaxedDual solve_relaxed_dual(const CostMatrix& cost, const Marginals& marg,
                               const TransportPlan& pi0, const Rational& eps);

ExtRational fenchel_value(const std::vector<Rational>& f, const std::vector<Rational>& g,
                          const CostMatrix& cost);

// Plan that puts mu_i * nu_j / total on every cell; value left at 0.
TransportPlan product_plan(const Marginals& marg);

ExtRational plan_cost(const TransportPlan& plan, const CostMatrix& cost);

}  // namespace tdl::ot
