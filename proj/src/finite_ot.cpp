#include "tdl/finite_ot.hpp"

#include "tdl/error.hpp"
#include "tdl/lp.hpp"

#include <limits>

namespace tdl::ot {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, ExtRational::infinity()) {
    if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidArgument, "cost matrix must be nonempty");
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<ExtRational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidArgument, "cost matrix must be nonempty");
    if (entries_.size() != rows * cols)
        throw Error(ErrorCode::DimensionMismatch, "entry count does not match rows*cols");
    for (const auto& e : entries_)
        if (e.is_finite() && sgn(e.value()) < 0)
            throw Error(ErrorCode::InvalidArgument, "finite cost entries must be >= 0");
}

void CostMatrix::set(std::size_t i, std::size_t j, ExtRational v) {
    if (v.is_finite() && sgn(v.value()) < 0)
        throw Error(ErrorCode::InvalidArgument, "finite cost entries must be >= 0");
    entries_.at(i * cols_ + j) = std::move(v);
}

std::size_t CostMatrix::finite_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.is_finite();
    return n;
}

Marginals Marginals::uniform(std::size_t rows, std::size_t cols) {
    Marginals m;
    m.mu.assign(rows, make_rational(1, static_cast<std::int64_t>(rows)));
    m.nu.assign(cols, make_rational(1, static_cast<std::int64_t>(cols)));
    return m;
}

std::vector<Pair> TransportPlan::support() const {
    std::vector<Pair> s;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (sgn(at(i, j)) > 0) s.emplace_back(i, j);
    return s;
}

namespace {

std::vector<std::size_t> positive_indices(const std::vector<Rational>& v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) > 0) out.push_back(i);
    return out;
}

// Extend duals known on the active rows/cols to all rows/cols keeping feasibility.
void complete_duals(DualPair& d, const CostMatrix& cost, const std::vector<char>& row_set,
                    const std::vector<char>& col_set) {
    for (std::size_t j = 0; j < cost.cols(); ++j) {
        if (col_set[j]) continue;
        bool have = false;
        Rational best;
        for (std::size_t i = 0; i < cost.rows(); ++i) {
            if (!row_set[i] || cost.at(i, j).is_infinite()) continue;
            Rational cand = cost.at(i, j).value() - d.phi[i];
            if (!have || cand < best) best = cand, have = true;
        }
        d.psi[j] = have ? best : Rational(0);
    }
    for (std::size_t i = 0; i < cost.rows(); ++i) {
        if (row_set[i]) continue;
        bool have = false;
        Rational best;
        for (std::size_t j = 0; j < cost.cols(); ++j) {
            if (cost.at(i, j).is_infinite()) continue;
            Rational cand = cost.at(i, j).value() - d.psi[j];
            if (!have || cand < best) best = cand, have = true;
        }
        d.phi[i] = have ? best : Rational(0);
    }
}

}  // namespace

DualPair solve_dual(const CostMatrix& cost, const Marginals& marg) {
    check_marginals(cost, marg);
    DualPair d;
    d.phi.assign(cost.rows(), Rational(0));
    d.psi.assign(cost.cols(), Rational(0));
    const auto rows = positive_indices(marg.mu);
    const auto cols = positive_indices(marg.nu);
    std::vector<char> row_set(cost.rows()), col_set(cost.cols());
    for (auto i : rows) row_set[i] = 1;
    for (auto j : cols) col_set[j] = 1;

    if (!rows.empty()) {
        lp::Problem p;
        std::vector<lp::Constraint> rc(rows.size()), cc(cols.size());
        for (std::size_t a = 0; a < rows.size(); ++a) {
            rc[a].sense = lp::Sense::Equal;
            rc[a].rhs = marg.mu[rows[a]];
        }
        for (std::size_t b = 0; b < cols.size(); ++b) {
            cc[b].sense = lp::Sense::Equal;
            cc[b].rhs = marg.nu[cols[b]];
        }
        for (std::size_t a = 0; a < rows.size(); ++a) {
            for (std::size_t b = 0; b < cols.size(); ++b) {
                const ExtRational& e = cost.at(rows[a], cols[b]);
                if (e.is_infinite()) continue;
                std::size_t v = p.add_var(e.value());
                rc[a].terms.emplace_back(v, Rational(1));
                cc[b].terms.emplace_back(v, Rational(1));
            }
        }
        for (auto& c : rc) p.add_constraint(std::move(c));
        for (auto& c : cc) p.add_constraint(std::move(c));
        lp::Result res = lp::solve(p);
        if (res.status != lp::Status::Optimal)
            throw Error(ErrorCode::NoFinitePlan, "every coupling puts mass on an infinite-cost entry");
        for (std::size_t a = 0; a < rows.size(); ++a) d.phi[rows[a]] = res.duals[a];
        for (std::size_t b = 0; b < cols.size(); ++b) d.psi[cols[b]] = res.duals[rows.size() + b];
    }
    complete_duals(d, cost, row_set, col_set);
    d.value = dual_value(d, marg);
    return d;
}

bool dual_feasible(const DualPair& duals, const CostMatrix& cost) {
    for (std::size_t i = 0; i < cost.rows(); ++i)
        for (std::size_t j = 0; j < cost.cols(); ++j) {
            const ExtRational& e = cost.at(i, j);
            if (e.is_finite() && duals.phi[i] + duals.psi[j] > e.value()) return false;
        }
    return true;
}

Rational dual_value(const DualPair& duals, const Marginals& marg) {
    Rational v = 0;
    for (std::size_t i = 0; i < marg.mu.size(); ++i) v += duals.phi[i] * marg.mu[i];
    for (std::size_t j = 0; j < marg.nu.size(); ++j) v += duals.psi[j] * marg.nu[j];
    return v;
}

SlacknessReport check_complementary_slackness(const TransportPlan& plan, const DualPair& duals,
                                              const CostMatrix& cost) {
    if (plan.rows != cost.rows() || plan.cols != cost.cols() || duals.phi.size() != cost.rows() ||
        duals.psi.size() != cost.cols())
        throw Error(ErrorCode::DimensionMismatch, "plan, duals and cost disagree in shape");
    SlacknessReport rep;
    for (std::size_t i = 0; i < cost.rows(); ++i) {
        for (std::size_t j = 0; j < cost.cols(); ++j) {
            const ExtRational& e = cost.at(i, j);
            bool mass = sgn(plan.at(i, j)) > 0;
            if (e.is_infinite()) {
                if (mass) rep.infinite_mass.emplace_back(i, j);
                continue;
            }
            Rational s = duals.phi[i] + duals.psi[j];
            if (s > e.value()) rep.feasibility_violations.emplace_back(i, j);
            if (mass && e.value() > s) rep.slack_violations.emplace_back(i, j);
        }
    }
    return rep;
}

RelaxedDual solve_relaxed_dual(const CostMatrix& cost, const Marginals& marg, const TransportPlan& pi0,
                               const Rational& eps) {
    if (sgn(eps) < 0) throw Error(ErrorCode::NegativeEpsilon, "eps = " + to_string(eps));
    check_marginals(cost, marg);
    if (pi0.rows != cost.rows() || pi0.cols != cost.cols())
        throw Error(ErrorCode::DimensionMismatch, "pi0 shape differs from the cost matrix");
    for (std::size_t i = 0; i < cost.rows(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < cost.cols(); ++j) s += pi0.at(i, j);
        if (s != marg.mu[i]) throw Error(ErrorCode::InfeasibleMarginals, "pi0 row sums differ from mu");
    }
    for (std::size_t j = 0; j < cost.cols(); ++j) {
        Rational s = 0;
        for (std::size_t i = 0; i < cost.rows(); ++i) s += pi0.at(i, j);
        if (s != marg.nu[j]) throw Error(ErrorCode::InfeasibleMarginals, "pi0 column sums differ from nu");
    }

    lp::Problem p;
    p.maximize = true;
    std::vector<std::size_t> phi(cost.rows()), psi(cost.cols());
    for (std::size_t i = 0; i < cost.rows(); ++i) phi[i] = p.add_var(marg.mu[i], true);
    for (std::size_t j = 0; j < cost.cols(); ++j) psi[j] = p.add_var(marg.nu[j], true);
    lp::Constraint budget;
    budget.sense = lp::Sense::LessEq;
    budget.rhs = eps;
    for (const auto& [i, j] : pi0.support()) {
        const ExtRational& e = cost.at(i, j);
        if (e.is_infinite())
            throw Error(ErrorCode::InfiniteCostOnPi0Support, "pi0 charges an infinite-cost entry");
        std::size_t s = p.add_var(Rational(0));
        lp::Constraint c;
        c.sense = lp::Sense::LessEq;
        c.rhs = e.value();
        c.terms = {{phi[i], Rational(1)}, {psi[j], Rational(1)}, {s, Rational(-1)}};
        p.add_constraint(std::move(c));
        budget.terms.emplace_back(s, pi0.at(i, j));
    }
    p.add_constraint(std::move(budget));
    lp::Result res = lp::solve(p);
    if (res.status != lp::Status::Optimal)
        throw Error(ErrorCode::InvalidArgument, "relaxed dual LP did not reach an optimum");
    RelaxedDual out;
    out.duals.phi.resize(cost.rows());
    out.duals.psi.resize(cost.cols());
    for (std::size_t i = 0; i < cost.rows(); ++i) out.duals.phi[i] = res.x[phi[i]];
    for (std::size_t j = 0; j < cost.cols(); ++j) out.duals.psi[j] = res.x[psi[j]];
    out.duals.value = res.objective;
    out.value = res.objective;
    return out;
}

ExtRational fenchel_value(const std::vector<Rational>& f, const std::vector<Rational>& g,
                          const CostMatrix& cost) {
    Marginals m{f, g};
    try {
        return ExtRational(solve_primal(cost, m).value);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InfeasibleMarginals || e.code() == ErrorCode::NoFinitePlan)
            return ExtRational::infinity();
        throw;
    }
}

TransportPlan product_plan(const Marginals& marg) {
    TransportPlan p;
    p.rows = marg.mu.size();
    p.cols = marg.nu.size();
    p.entries.assign(p.rows * p.cols, Rational(0));
    Rational total = 0;
    for (const auto& v : marg.mu) total += v;
    if (sgn(total) == 0) return p;
    for (std::size_t i = 0; i < p.rows; ++i)
        for (std::size_t j = 0; j < p.cols; ++j) p.entries[i * p.cols + j] = marg.mu[i] * marg.nu[j] / total;
    return p;
}

ExtRational plan_cost(const TransportPlan& plan, const CostMatrix& cost) {
    Rational v = 0;
    for (std::size_t i = 0; i < plan.rows; ++i)
        for (std::size_t j = 0; j < plan.cols; ++j) {
            if (sgn(plan.at(i, j)) == 0) continue;
            const ExtRational& e = cost.at(i, j);
            if (e.is_infinite()) return ExtRational::infinity();
            v += plan.at(i, j) * e.value();
        }
    return ExtRational(v);
}

}  // namespace tdl::ot
