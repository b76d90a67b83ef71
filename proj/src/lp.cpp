#include "tdl/lp.hpp"

#include "tdl/error.hpp"

#include <limits>

namespace tdl::lp {

std::size_t Problem::add_var(const Rational& cost, bool is_free) {
    objective.resize(num_vars);
    free_var.resize(num_vars, false);
    objective.push_back(cost);
    free_var.push_back(is_free);
    return num_vars++;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows, std::vector<Rational>(cols + 1)), obj_(cols + 1),
          basis_(rows, kNone) {}

    Rational& at(std::size_t i, std::size_t j) { return a_[i][j]; }
    Rational& rhs(std::size_t i) { return a_[i][cols_]; }
    std::vector<Rational>& obj() { return obj_; }
    std::vector<std::size_t>& basis() { return basis_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t pivots() const { return pivots_; }

    void pivot(std::size_t r, std::size_t c) {
        ++pivots_;
        std::vector<Rational>& pr = a_[r];
        Rational inv = 1 / pr[c];
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j <= cols_; ++j) {
            if (sgn(pr[j]) != 0) {
                pr[j] *= inv;
                nz.push_back(j);
            }
        }
        Rational f;
        auto eliminate = [&](std::vector<Rational>& row) {
            if (sgn(row[c]) == 0) return;
            f = row[c];
            for (std::size_t j : nz) row[j] -= f * pr[j];
        };
        for (std::size_t i = 0; i < rows_; ++i)
            if (i != r) eliminate(a_[i]);
        eliminate(obj_);
        basis_[r] = c;
    }

    // Bland's rule. Returns false when unbounded.
    bool optimize(const std::vector<bool>& may_enter) {
        for (;;) {
            std::size_t enter = kNone;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (may_enter[j] && sgn(obj_[j]) < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == kNone) return true;
            std::size_t leave = kNone;
            Rational best, ratio;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (sgn(a_[i][enter]) <= 0) continue;
                ratio = a_[i][cols_] / a_[i][enter];
                if (leave == kNone || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == kNone) return false;
            pivot(leave, enter);
        }
    }

    void load_objective(const std::vector<Rational>& cost) {
        for (std::size_t j = 0; j <= cols_; ++j) obj_[j] = j < cols_ ? cost[j] : Rational(0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Rational& cb = cost[basis_[i]];
            if (sgn(cb) == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                if (sgn(a_[i][j]) != 0) obj_[j] -= cb * a_[i][j];
        }
    }

private:
    std::size_t rows_, cols_;
    std::vector<std::vector<Rational>> a_;
    std::vector<Rational> obj_;
    std::vector<std::size_t> basis_;
    std::size_t pivots_ = 0;
};

}  // namespace

Result solve(const Problem& p) {
    const std::size_t n = p.num_vars;
    const std::size_t m = p.constraints.size();
    auto is_free = [&](std::size_t v) { return v < p.free_var.size() && p.free_var[v]; };

    // Column layout: structural (free vars get a second, negated column), slacks, artificials.
    std::vector<std::size_t> pos_col(n), neg_col(n, kNone);
    std::size_t cols = 0;
    for (std::size_t v = 0; v < n; ++v) {
        pos_col[v] = cols++;
        if (is_free(v)) neg_col[v] = cols++;
    }
    std::vector<std::size_t> slack_col(m, kNone);
    for (std::size_t i = 0; i < m; ++i)
        if (p.constraints[i].sense != Sense::Equal) slack_col[i] = cols++;
    const std::size_t first_art = cols;
    cols += m;

    Tableau t(m, cols);
    std::vector<int> flip(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        const Constraint& c = p.constraints[i];
        if (sgn(c.rhs) < 0) flip[i] = -1;
        for (const auto& [v, coef] : c.terms) {
            if (v >= n) throw Error(ErrorCode::DimensionMismatch, "constraint references unknown variable");
            t.at(i, pos_col[v]) += flip[i] * coef;
            if (neg_col[v] != kNone) t.at(i, neg_col[v]) -= flip[i] * coef;
        }
        if (slack_col[i] != kNone) t.at(i, slack_col[i]) = flip[i] * (c.sense == Sense::LessEq ? 1 : -1);
        t.at(i, first_art + i) = 1;
        t.rhs(i) = flip[i] * c.rhs;
        t.basis()[i] = first_art + i;
    }

    Result res;
    std::vector<bool> may_enter(cols, true);
    for (std::size_t j = first_art; j < cols; ++j) may_enter[j] = false;

    std::vector<Rational> phase1(cols);
    for (std::size_t j = first_art; j < cols; ++j) phase1[j] = 1;
    t.load_objective(phase1);
    t.optimize(may_enter);
    if (sgn(t.obj()[cols]) != 0) {
        res.status = Status::Infeasible;
        res.pivots = t.pivots();
        return res;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis()[i] < first_art) continue;
        for (std::size_t j = 0; j < first_art; ++j) {
            if (sgn(t.at(i, j)) != 0) {
                t.pivot(i, j);
                break;
            }
        }
    }

    std::vector<Rational> cost(cols);
    for (std::size_t v = 0; v < n; ++v) {
        Rational c = v < p.objective.size() ? p.objective[v] : Rational(0);
        if (p.maximize) c = -c;
        cost[pos_col[v]] = c;
        if (neg_col[v] != kNone) cost[neg_col[v]] = -c;
    }
    t.load_objective(cost);
    if (!t.optimize(may_enter)) {
        res.status = Status::Unbounded;
        res.pivots = t.pivots();
        return res;
    }

    std::vector<Rational> colval(cols);
    for (std::size_t i = 0; i < m; ++i) colval[t.basis()[i]] = t.rhs(i);
    res.x.resize(n);
    res.objective = 0;
    for (std::size_t v = 0; v < n; ++v) {
        res.x[v] = colval[pos_col[v]];
        if (neg_col[v] != kNone) res.x[v] -= colval[neg_col[v]];
        if (v < p.objective.size()) res.objective += p.objective[v] * res.x[v];
    }
    res.duals.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rational y = -t.obj()[first_art + i];
        y *= flip[i];
        res.duals[i] = p.maximize ? Rational(-y) : y;
    }
    res.status = Status::Optimal;
    res.pivots = t.pivots();
    return res;
}

}  // namespace tdl::lp
