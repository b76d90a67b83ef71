#pragma once

#include "tdl/circle.hpp"
#include "tdl/rational.hpp"
#include "tdl/report.hpp"
#include "tdl/tau.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace tdl::duals {

// Level-n potentials evaluated on the graphs of a finer level N >= n.
// phi_raw and psi are phi^n, 1 - phi^n lifted to level N; phi_corrected subtracts the
// positive parts of the constraint violations on the rotation graph and the tau graph.
// At level N the rotation graph is l -> l + P_N with cost 1 + phi^N(l) - phi^N(l + P_N),
// and the tau graph is l -> l + tau_n(parent of l) * P_N with cost 1 + phi^N(l) - phi^N(image).
struct DualPairLevel {
    int level = 1;
    int eval_level = 1;
    circle::StepFunction phi_raw;
    circle::StepFunction psi;
    circle::StepFunction phi_corrected;
    Rational correction_norm{0};
};

// Own-level pair (N = n): the constraints hold with equality on both graphs, so the correction is zero.
DualPairLevel corrected_pair(const tau::TauLevel& level, const circle::Tower& t);
DualPairLevel corrected_pair(const tau::TauLevel& level, const circle::Tower& t, int eval_level);
// Same lift without any correction (phi_corrected == phi_raw); used as a negative control.
DualPairLevel raw_pair(const tau::TauLevel& level, const circle::Tower& t, int eval_level);

// Image of l under the level-n map run with the level-N rotation.
std::vector<std::int64_t> tau_graph_at(const tau::TauLevel& level, const circle::Tower& t, int eval_level);

// Checks phi + psi <= cost on the identity graph (cost 1), the rotation graph and the tau graph.
Report verify_feasibility(const DualPairLevel& pair, const tau::TauLevel& level, const circle::Tower& t);

Rational dual_value(const DualPairLevel& pair);

// (1/M_{n+1}) sum |phi^n(lift(l + P_{n+1})) - phi^n(lift(l) + P_n)| against 4 M_n / m_{n+1}.
struct RotationDrift {
    int level = 1;
    Rational norm{0};
    Rational bound{0};
    bool ok() const { return norm < bound; }
};

RotationDrift rotation_drift(const circle::Tower& t, int n);

struct SingularDiagnostic {
    int level = 1;
    Rational negative_mass{0};    // sum min(q, 0) / M_n
    Rational carrier_measure{0};  // mu{q < 0}
    Rational excess_above{0};     // sum (q - 1)_+ / M_n
    Rational excess_below{0};     // sum (1 - q)_+ / M_n
    // (delta, sup over sets A with mu(A) < delta of -sum_A q / M_n)
    std::vector<std::pair<Rational, Rational>> small_set_sup;
    bool balanced() const { return excess_above == excess_below; }
};

// {1/2, 1/4, ...} down to the last value >= 2/M_n.
std::vector<Rational> default_delta_grid(std::int64_t M);

SingularDiagnostic singular_diagnostic(const tau::TauLevel& level, const circle::Tower& t,
                                       const std::vector<Rational>& deltas);
// Uses default_delta_grid per level when deltas is empty.
std::vector<SingularDiagnostic> singular_buildup(const std::vector<tau::TauLevel>& levels, const circle::Tower& t,
                                                 const std::vector<Rational>& deltas = {});

}  // namespace tdl::duals
