#include "oracles.hpp"
#include "tdl/error.hpp"
#include "tdl/tau.hpp"

#include <doctest.h>

#include <algorithm>

using namespace tdl;
using namespace tdl::tau;
using circle::Tower;

namespace {

bool is_permutation_of_range(const std::vector<std::int64_t>& s) {
    std::vector<std::int64_t> v = s;
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != static_cast<std::int64_t>(i)) return false;
    return true;
}

// Walks the orbit step by step instead of using the modular inverse.
bool brute_avoids_middle(const Tower& t, int n, std::int64_t l, std::int64_t tau) {
    const std::int64_t M = t.modulus(n), P = t.numerator(n), mid = (M - 1) / 2;
    if (tau == 0) return true;
    const std::int64_t step = tau > 0 ? P : M - P;
    std::int64_t x = l;
    for (std::int64_t i = 0; i <= (tau > 0 ? tau : -tau); ++i) {
        if (x == mid) return false;
        x = (x + step) % M;
    }
    return true;
}

}  // namespace

TEST_CASE("level 1 closed forms") {
    for (std::int64_t m1 : {5, 7, 11, 13}) {
        const Tower t = circle::build_tower(m1, 1, {});
        const TauLevel L = build_tau_level1(t);
        const circle::StepFunction q = quasi_cost(L, t);
        for (std::int64_t k = 1; k <= m1; ++k) {
            CHECK(L.tau[k - 1] == oracle::tau1_closed(m1, k));
            CHECK(q.numer[k - 1] == oracle::quasi1_closed(m1, k));
        }
        CHECK(is_permutation_of_range(L.sigma));
        CHECK(singular_mass(L, t) == Rational(-1) + make_rational(3, m1));
        CHECK(verify_level(L, nullptr, t).pass());
        const TransportCost c = transport_cost_tau(L, t);
        CHECK(c.total == 1);
    }
    const Tower t5 = circle::build_tower(5, 1, {});
    const TauLevel L5 = build_tau_level1(t5);
    CHECK(L5.tau == std::vector<std::int64_t>{1, -1, 0, 1, -1});
    CHECK(L5.indices_with(Label::Good) == std::vector<std::int64_t>{1, 3});
    CHECK(L5.indices_with(Label::Singular) == std::vector<std::int64_t>{0, 4});
    CHECK(quasi_cost(L5, t5).numer == std::vector<std::int64_t>{0, 2, 1, 2, 0});
    CHECK(transport_cost_tau(L5, t5).positive_part == 1);

    const Tower t11 = circle::build_tower(11, 1, {});
    CHECK(singular_mass(build_tau_level1(t11), t11) == make_rational(-8, 11));
    CHECK(transport_cost_tau(build_tau_level1(t11), t11).positive_part == make_rational(17, 11));
}

TEST_CASE("level 2 on the (5,11) tower") {
    const Tower t = circle::build_tower(5, 2, {7});
    const auto levels = build_levels(t, 2);
    const TauLevel& L2 = levels[1];
    CHECK(is_permutation_of_range(L2.sigma));
    CHECK(L2.count(Label::Singular) == 20);
    CHECK(L2.expected_singular == 20);
    for (std::size_t l = 0; l < L2.size(); ++l) CHECK(brute_avoids_middle(t, 2, static_cast<std::int64_t>(l), L2.tau[l]));

    const Report r = verify_level(L2, &levels[0], t);
    CHECK(r.pass());
    for (const char* name : {"permutation", "nesting", "middle_avoidance", "change_per_good_block",
                             "singular_parent_good_difference_zero", "quasi_cost_mean_one"}) {
        const Check* c = r.find(name);
        REQUIRE(c != nullptr);
        CHECK(c->status == CheckStatus::Pass);
    }
    REQUIRE(r.find("singular_value_bound") != nullptr);
    CHECK(r.find("singular_value_bound")->status == CheckStatus::Skipped);

    // Good subs of singular parents have quasi-cost 1.
    const circle::StepFunction q = quasi_cost(L2, t);
    Rational sum = 0;
    for (std::size_t l = 0; l < q.size(); ++l) {
        sum += q.value(l);
        const std::int64_t parent = static_cast<std::int64_t>(l) / 11;
        if ((parent == 0 || parent == 4) && L2.label[l] == Label::Good) CHECK(q.numer[l] == 1);
        if (L2.label[l] == Label::Singular) CHECK(q.numer[l] <= 1);
    }
    CHECK(sum / 55 == 1);
    CHECK(singular_mass(L2, t) <= 0);
    const SingularLedger g = singular_ledger(L2, &levels[0], t);
    CHECK(g.singular_mass == singular_mass(L2, t));
}

TEST_CASE("corrupted tau is rejected") {
    const Tower t = circle::build_tower(5, 2, {7});
    const auto levels = build_levels(t, 2);
    TauLevel bad = levels[1];
    bad.tau[3] += 1;
    bad.sigma = induced_permutation(t, 2, bad.tau);
    const Report r = verify_level(bad, &levels[0], t);
    CHECK_FALSE(r.pass());
    REQUIRE(r.find("permutation") != nullptr);
    CHECK(r.find("permutation")->status == CheckStatus::Fail);
    CHECK_FALSE(r.find("permutation")->detail.empty());
}

TEST_CASE("growth failures") {
    // m_2 = 29 is too small for the M_1 = 7 singular combinatorics.
    const Tower t = circle::build_tower(7, 2, {29});
    CHECK_THROWS_AS(build_levels(t, 2), Error);
    // Level-2 singular differences vanish on (5,11,89), so level 3 cannot grow.
    const Tower t3 = circle::build_tower(5, 3, {7, 13});
    try {
        build_levels(t3, 3);
        FAIL("expected GrowthTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GrowthTooSmall);
    }
}

TEST_CASE("middle guard") {
    const Tower t = circle::build_tower(5, 2, {7});
    const MiddleGuard g(t, 2);
    for (std::int64_t l = 0; l < 55; ++l)
        for (std::int64_t s = -12; s <= 12; ++s) CHECK(g.avoids(l, s) == brute_avoids_middle(t, 2, l, s));
    for (std::int64_t target : {0, 10, 40}) {
        const std::int64_t s = g.steps_to(3, target);
        CHECK(circle::rotate(t, {2, 3}, s).l == target);
        CHECK(brute_avoids_middle(t, 2, 3, s));
    }
}
