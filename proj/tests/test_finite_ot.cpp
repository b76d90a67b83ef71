#include "oracles.hpp"
#include "tdl/error.hpp"
#include "tdl/finite_ot.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace tdl;
using namespace tdl::ot;

namespace {

CostMatrix identity_cost(std::size_t n) {
    CostMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c.set(i, j, ExtRational(i == j ? 0 : 1));
    return c;
}

CostMatrix from_ints(std::size_t n, std::initializer_list<int> v) {
    std::vector<ExtRational> e;
    for (int x : v) e.emplace_back(ExtRational(x));
    return CostMatrix(n, n, e);
}

template <class F>
ErrorCode code_of(F f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("trivial primal instances") {
    CostMatrix one(1, 1);
    one.set(0, 0, ExtRational(make_rational(7, 3)));
    const TransportPlan p = solve_primal(one, Marginals::uniform(1, 1));
    CHECK(p.at(0, 0) == 1);
    CHECK(p.value == make_rational(7, 3));

    const TransportPlan d = solve_primal(identity_cost(3), Marginals::uniform(3, 3));
    CHECK(d.value == 0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(d.at(i, i) == make_rational(1, 3));
}

TEST_CASE("primal matches the Birkhoff enumeration for N = 5") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
        const CostMatrix c = oracle::random_cost(5, rng);
        CHECK(solve_primal(c, Marginals::uniform(5, 5)).value == oracle::birkhoff_value(c));
    }
}

TEST_CASE("dual examples") {
    const DualPair z = solve_dual(identity_cost(3), Marginals::uniform(3, 3));
    CHECK(z.value == 0);
    CHECK(dual_feasible(z, identity_cost(3)));

    const CostMatrix swap = from_ints(2, {0, 1, 1, 0});
    CHECK(solve_dual(swap, Marginals::uniform(2, 2)).value == 0);
    DualPair zero{{0, 0}, {0, 0}, 0};
    CHECK(dual_feasible(zero, swap));

    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const CostMatrix c = oracle::random_cost(4, rng);
        const Marginals m = oracle::random_marginals(4, 4, rng);
        const DualPair d = solve_dual(c, m);
        CHECK(d.value == solve_primal(c, m).value);
        CHECK(dual_feasible(d, c));
        CHECK(dual_value(d, m) == d.value);
    }
}

TEST_CASE("marginal and finiteness errors") {
    Marginals bad{{make_rational(1, 2), make_rational(1, 2)}, {make_rational(1, 2), make_rational(1, 3)}};
    CHECK(code_of([&] { solve_primal(identity_cost(2), bad); }) == ErrorCode::InfeasibleMarginals);
    CHECK(code_of([&] { solve_primal(identity_cost(2), Marginals::uniform(3, 3)); }) ==
          ErrorCode::DimensionMismatch);

    CostMatrix c = identity_cost(3);
    for (std::size_t j = 0; j < 3; ++j) c.set(1, j, ExtRational::infinity());
    CHECK(code_of([&] { solve_primal(c, Marginals::uniform(3, 3)); }) == ErrorCode::NoFinitePlan);
    CHECK(code_of([&] { solve_dual(c, Marginals::uniform(3, 3)); }) == ErrorCode::NoFinitePlan);

    // Finite plans exist only through the off-diagonal entries.
    CostMatrix d = from_ints(2, {0, 3, 2, 0});
    d.set(0, 0, ExtRational::infinity());
    d.set(1, 1, ExtRational::infinity());
    const TransportPlan p = solve_primal(d, Marginals::uniform(2, 2));
    CHECK(p.value == make_rational(5, 2));
    CHECK(solve_dual(d, Marginals::uniform(2, 2)).value == make_rational(5, 2));
}

TEST_CASE("zero marginals are eliminated") {
    std::mt19937_64 rng(3);
    const CostMatrix c = oracle::random_cost(4, rng);
    Marginals m{{0, make_rational(1, 2), make_rational(1, 2), 0}, {make_rational(1, 4), 0, make_rational(3, 4), 0}};
    const TransportPlan p = solve_primal(c, m);
    CHECK(p.value == solve_dual(c, m).value);
    for (std::size_t j = 0; j < 4; ++j) CHECK(p.at(0, j) == 0);
}

TEST_CASE("complementary slackness") {
    std::mt19937_64 rng(8);
    const CostMatrix c = oracle::random_cost(4, rng);
    const Marginals m = Marginals::uniform(4, 4);
    const TransportPlan p = solve_primal(c, m);
    const DualPair d = solve_dual(c, m);
    CHECK(check_complementary_slackness(p, d, c).pass());

    DualPair zero{std::vector<Rational>(4, 0), std::vector<Rational>(4, 0), 0};
    if (p.value > 0) CHECK_FALSE(check_complementary_slackness(p, zero, c).pass());

    const TransportPlan diag = solve_primal(identity_cost(3), Marginals::uniform(3, 3));
    DualPair z3{std::vector<Rational>(3, 0), std::vector<Rational>(3, 0), 0};
    CHECK(check_complementary_slackness(diag, z3, identity_cost(3)).pass());

    CHECK(code_of([&] { check_complementary_slackness(diag, zero, identity_cost(3)); }) ==
          ErrorCode::DimensionMismatch);
}

TEST_CASE("cyclic monotonicity and potentials") {
    const CostMatrix id = identity_cost(3);
    const std::vector<Pair> diag{{0, 0}, {1, 1}, {2, 2}};
    CHECK(is_cyclically_monotone(diag, id).monotone);
    const auto pots = strong_monotone_potentials(diag, id);
    REQUIRE(pots.has_value());
    CHECK(dual_feasible(*pots, id));

    const CostMatrix swap = from_ints(2, {0, 1, 1, 0});
    const std::vector<Pair> anti{{0, 1}, {1, 0}};
    const MonotonicityResult r = is_cyclically_monotone(anti, swap);
    CHECK_FALSE(r.monotone);
    CHECK(r.witness.size() == 2);
    CHECK_FALSE(strong_monotone_potentials(anti, swap).has_value());

    CostMatrix inf = swap;
    inf.set(0, 1, ExtRational::infinity());
    CHECK(code_of([&] { is_cyclically_monotone(anti, inf); }) == ErrorCode::InfiniteCostInSupport);
    CHECK(code_of([&] { strong_monotone_potentials(anti, inf); }) == ErrorCode::InfiniteCostInSupport);
}

TEST_CASE("optimizer supports are monotone and carry tight potentials") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 15; ++t) {
        const std::size_t n = 3 + t % 4;
        const CostMatrix c = oracle::random_cost(n, rng);
        const Marginals m = oracle::random_marginals(n, n, rng);
        const TransportPlan p = solve_primal(c, m);
        const auto s = p.support();
        CHECK(is_cyclically_monotone(s, c).monotone);
        if (n <= 5) CHECK(oracle::brute_cyclically_monotone(s, c));
        const auto pots = strong_monotone_potentials(s, c);
        REQUIRE(pots.has_value());
        CHECK(check_complementary_slackness(p, *pots, c).pass());
    }
}

TEST_CASE("relaxed dual") {
    const CostMatrix id = identity_cost(3);
    const Marginals u = Marginals::uniform(3, 3);
    const TransportPlan diag = solve_primal(id, u);
    CHECK(solve_relaxed_dual(id, u, diag, 0).value == 0);

    std::mt19937_64 rng(4);
    const CostMatrix c = oracle::random_cost(4, rng);
    const Marginals m = Marginals::uniform(4, 4);
    const TransportPlan pi0 = solve_primal(c, m);
    const Rational primal = pi0.value, dual = solve_dual(c, m).value;
    Rational prev = 0;
    bool first = true;
    for (const Rational& eps : {Rational(1), make_rational(1, 2), make_rational(1, 4), make_rational(1, 8), Rational(0)}) {
        const Rational v = solve_relaxed_dual(c, m, pi0, eps).value;
        CHECK(v >= dual);
        if (!first) CHECK(v <= prev);
        prev = v;
        first = false;
    }
    CHECK(prev == primal);

    // With a fully supported pi0 the eps = 0 problem is the plain dual.
    const TransportPlan full = product_plan(m);
    CHECK(solve_relaxed_dual(c, m, full, 0).value == dual);

    CHECK(code_of([&] { solve_relaxed_dual(c, m, pi0, -1); }) == ErrorCode::NegativeEpsilon);
    CostMatrix ci = c;
    const auto s = pi0.support();
    ci.set(s[0].first, s[0].second, ExtRational::infinity());
    CHECK(code_of([&] { solve_relaxed_dual(ci, m, pi0, 0); }) == ErrorCode::InfiniteCostOnPi0Support);
}

TEST_CASE("Fenchel perturbation map") {
    std::mt19937_64 rng(9);
    const CostMatrix c = oracle::random_cost(3, rng);
    const std::vector<Rational> zero(3, 0);
    CHECK(fenchel_value(zero, zero, c) == ExtRational(0));
    CHECK(fenchel_value({1, 0, 0}, {0, 0, 0}, c).is_infinite());

    for (int t = 0; t < 5; ++t) {
        const Marginals a = oracle::random_marginals(3, 3, rng), b = oracle::random_marginals(3, 3, rng);
        const ExtRational fa = fenchel_value(a.mu, a.nu, c), fb = fenchel_value(b.mu, b.nu, c);
        for (const Rational& lam : {Rational(2), make_rational(1, 3)}) {
            std::vector<Rational> f = a.mu, g = a.nu;
            for (auto& v : f) v *= lam;
            for (auto& v : g) v *= lam;
            CHECK(fenchel_value(f, g, c).value() == lam * fa.value());
        }
        std::vector<Rational> f(3), g(3);
        for (int i = 0; i < 3; ++i) {
            f[i] = (a.mu[i] + b.mu[i]) / 2;
            g[i] = (a.nu[i] + b.nu[i]) / 2;
        }
        CHECK(fenchel_value(f, g, c).value() <= (fa.value() + fb.value()) / 2);
    }
}
