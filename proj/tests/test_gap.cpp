#include "tdl/error.hpp"
#include "tdl/gap.hpp"
#include "tdl/tau.hpp"

#include <doctest.h>

#include <algorithm>

using namespace tdl;
using namespace tdl::gap;
using circle::Tower;

TEST_CASE("first column inverts the level-1 map") {
    const Tower t = circle::build_tower(5, 2, {7});
    const GapFamily f = build_gap_family(t, 2);
    const tau::TauLevel L1 = tau::build_tau_level1(t);
    const GapCell& c = f.cell(1, 1);
    for (std::size_t l = 0; l < 5; ++l) {
        CHECK(c.sigma[static_cast<std::size_t>(L1.sigma[l])] == static_cast<std::int64_t>(l));
        CHECK(c.tau[static_cast<std::size_t>(L1.sigma[l])] == -L1.tau[l]);
    }
    CHECK(c.tau == std::vector<std::int64_t>{1, -1, 0, 1, -1});
}

TEST_CASE("grid cell checks on (5,11)") {
    const Tower t = circle::build_tower(5, 2, {7});
    const GapFamily f = build_gap_family(t, 2);
    CHECK(f.eta == std::vector<Rational>{make_rational(3, 5), Rational(1)});
    for (auto [n, j] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 2}}) {
        const Report r = verify_prop41(f, n, j);
        CHECK_MESSAGE(r.pass(), "cell ", n, ",", j);
        const auto q = cell_quasi_cost(f.cell(n, j), t);
        std::int64_t s = 0;
        for (auto v : q) s += v;
        CHECK(s == t.modulus(j));
    }
    const Report r22 = verify_prop41(f, 2, 2);
    REQUIRE(r22.find("displacement") != nullptr);
    CHECK(r22.find("displacement")->status == CheckStatus::Pass);

    GapFamily bad = f;
    auto& cell = bad.columns[1][1];
    cell.tau[7] += 1;
    cell.sigma[7] = (cell.sigma[7] + t.numerator(2)) % t.modulus(2);
    const Report rb = verify_prop41(bad, 2, 2);
    REQUIRE(rb.find("permutation") != nullptr);
    CHECK(rb.find("permutation")->status == CheckStatus::Fail);
}

TEST_CASE("eta decreases on (5,31)") {
    const Tower t = circle::build_tower(5, 2, {31});
    REQUIRE(t.m[1] == 31);
    const GapFamily f = build_gap_family(t, 2);
    CHECK(f.eta[0] == make_rational(3, 5));
    CHECK(f.eta[1] == make_rational(11, 31));
}

TEST_CASE("materialized costs") {
    const Tower t = circle::build_tower(5, 2, {7});
    const GapFamily f = build_gap_family(t, 2);

    const TruncatedCost c1 = materialize_cost(f, 1, 1);
    REQUIRE(c1.graphs.size() == 2);
    const ot::CostMatrix m1 = c1.to_matrix();
    const circle::HalfCirclePartition h = circle::half_partition(t, 1);
    for (std::size_t l = 0; l < 5; ++l) {
        CHECK(m1.at(l, l) == ExtRational(1));
        const std::size_t r = static_cast<std::size_t>(c1.graphs[1][l]);
        const auto half = h.classify(static_cast<std::int64_t>(l));
        CHECK(m1.at(l, r) == ExtRational(half == circle::Half::Left ? 0 : (half == circle::Half::Middle ? 1 : 2)));
    }

    const TruncatedCost c2 = materialize_cost(f, 2, 2);
    const ot::CostMatrix m2 = c2.to_matrix();
    std::size_t finite = 0;
    for (std::size_t i = 0; i < m2.rows(); ++i)
        for (std::size_t j = 0; j < m2.cols(); ++j) finite += m2.at(i, j).is_infinite() ? 0 : 1;
    CHECK(finite == 110);  // 3 M_2 minus pairs shared by two graphs
    CHECK(finite <= 3 * 55);

    TruncatedCost clash = c2;
    clash.graphs[1] = clash.graphs[0];
    clash.values[1][0] = clash.values[0][0] + 1;
    try {
        clash.to_matrix();
        FAIL("expected overlap error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GraphOverlapInconsistency);
    }
}

TEST_CASE("truncated-cost values, beta search and the gap report") {
    const Tower t = circle::build_tower(5, 2, {7});
    const GapFamily f = build_gap_family(t, 2);
    const Prop42Result p = verify_prop42(f, 2, 2);
    CHECK(p.primal == 1);
    CHECK(p.dual == 1);
    CHECK(p.report.pass());
    CHECK(p.beta_threshold == make_rational(12, 55));
    const auto id = std::find_if(p.candidates.begin(), p.candidates.end(), [](const BetaCandidate& c) { return c.name == "identity"; });
    REQUIRE(id != p.candidates.end());
    CHECK_FALSE(id->admissible);

    const GapReport g1 = gap_demonstration(build_gap_family(t, 1), 1, 1);
    CHECK(g1.primal == 1);

    const GapReport g = gap_demonstration(f, 2, 2);
    CHECK(g.primal == 1);
    CHECK(g.dual == 1);
    CHECK(g.eta.at(2) == 1);
}
