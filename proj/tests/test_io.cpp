#include "tdl/error.hpp"
#include "tdl/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace tdl;
using namespace tdl::io;

TEST_CASE("instance round trip") {
    const std::string text = R"({"n": 2, "cost": [["0", "3/2"], [1, "inf"]], "mu": ["1/3", "2/3"], "nu": ["1/2", "1/2"]})";
    const Instance a = parse_instance(text);
    CHECK(a.cost.at(0, 1) == ExtRational(make_rational(3, 2)));
    CHECK(a.cost.at(1, 1).is_infinite());
    CHECK(a.marg.mu[1] == make_rational(2, 3));
    const Instance b = parse_instance(dump(instance_json(a)));
    CHECK(dump(instance_json(b)) == dump(instance_json(a)));
}

TEST_CASE("malformed instances") {
    for (const char* text : {"{", R"({"n": 2})", R"({"n": 1, "cost": [["-1"]], "mu": [1], "nu": [1]})",
                             R"({"n": 1, "cost": [["x"]], "mu": [1], "nu": [1]})",
                             R"({"n": 2, "cost": [[0, 1]], "mu": [1], "nu": [1]})"}) {
        try {
            parse_instance(text);
            FAIL("accepted ", text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
        }
    }
}

TEST_CASE("rational strings") {
    CHECK(rational_json(make_rational(6, 4)) == Json("3/2"));
    CHECK(rational_json(Rational(0)) == Json("0/1"));
    CHECK(rational_from(Json("-5/10")) == make_rational(-1, 2));
}

TEST_CASE("tower and tau level round trip") {
    const circle::Tower t = circle::build_tower(5, 2, {7});
    const circle::Tower u = tower_from(tower_json(t));
    CHECK(u.m == t.m);
    CHECK(u.M == t.M);
    CHECK(u.P == t.P);

    const auto levels = tau::build_levels(t, 2);
    const tau::TauLevel back = tau_level_from(tau_level_json(levels[1]), t);
    CHECK(back.tau == levels[1].tau);
    CHECK(back.sigma == levels[1].sigma);
    CHECK(back.label == levels[1].label);
    CHECK(back.changed == levels[1].changed);
    CHECK(back.expected_singular == levels[1].expected_singular);
}

TEST_CASE("step function CSV") {
    const circle::Tower t = circle::build_tower(5, 1, {});
    const std::string csv = step_function_csv(circle::phi_level(t, 1));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,left_endpoint,value");
    std::getline(in, line);
    CHECK(line == "0,0/1,0/1");
    std::getline(in, line);
    CHECK(line == "1,1/5,1/1");
}
