#pragma once

#include "tdl/circle.hpp"
#include "tdl/rational.hpp"
#include "tdl/report.hpp"

#include <cstdint>
#include <vector>

namespace tdl::tau {

enum class Label : std::uint8_t { Good, Singular, Middle };

// A level-n interval permutation: index l moves tau[l] rotation steps to sigma[l].
struct TauLevel {
    int level = 1;
    std::vector<std::int64_t> tau;
    std::vector<std::int64_t> sigma;
    std::vector<Label> label;
    // 1 where tau differs from the parent's tau inside a good parent block.
    std::vector<std::uint8_t> changed;
    // Sum over singular parents of 2 * dphi * M_{n-1} (level 1: the two end blocks).
    std::int64_t expected_singular = 0;

    std::size_t size() const { return tau.size(); }
    std::vector<std::int64_t> indices_with(Label l) const;
    std::size_t count(Label l) const;
};

// sigma[l] = l + tau[l] * P_n mod M_n.
std::vector<std::int64_t> induced_permutation(const circle::Tower& t, int n, const std::vector<std::int64_t>& tau);

// No orbit point T^i(l), i between 0 and tau inclusive, is the middle index.
class MiddleGuard {
public:
    MiddleGuard(const circle::Tower& t, int n);
    bool avoids(std::int64_t l, std::int64_t tau) const;
    // Step count in (-M_n, M_n) moving l to target whose orbit avoids the middle.
    // Throws GrowthTooSmall when neither representative works.
    std::int64_t steps_to(std::int64_t l, std::int64_t target) const;

private:
    std::int64_t M_, P_, inv_, mid_;
};

// Refines one good parent block b (level n-1 shift tau, image block target) to level n:
// subs whose shifted position stays inside the block keep tau, the |tau| overflowing
// subs are sent in order onto the uncovered subs of the target block.
// Returns the number of changed subs. Throws GrowthTooSmall if |tau| >= m_n.
std::int64_t extend_good_block(const circle::Tower& t, int n, const MiddleGuard& guard, std::int64_t b,
                               std::int64_t tau, std::int64_t target, std::int64_t* out_tau,
                               std::uint8_t* out_changed);

TauLevel build_tau_level1(const circle::Tower& t);
TauLevel extend_tau(const TauLevel& prev, const circle::Tower& t);
// Builds levels 1..n.
std::vector<TauLevel> build_levels(const circle::Tower& t, int n);

// q(l) = 1 + phi^n(l) - phi^n(sigma(l)).
circle::StepFunction quasi_cost(const TauLevel& level, const circle::Tower& t);
circle::StepFunction quasi_cost(const TauLevel& level, const circle::StepFunction& phi);

Rational singular_mass(const TauLevel& level, const circle::Tower& t);

struct SingularLedger {
    int level = 1;
    Rational singular_mass{0};
    Rational good_deviation{0};
    Rational change_measure{0};
};

// prev may be null at level 1.
SingularLedger singular_ledger(const TauLevel& level, const TauLevel* prev, const circle::Tower& t);

struct TransportCost {
    Rational total{0};
    Rational positive_part{0};
    Rational good_part{0};
};

TransportCost transport_cost_tau(const TauLevel& level, const circle::Tower& t);

// Machine check of the level invariants; prev may be null at level 1.
Report verify_level(const TauLevel& level, const TauLevel* prev, const circle::Tower& t);

}  // namespace tdl::tau
