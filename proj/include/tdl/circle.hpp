#pragma once

#include "tdl/rational.hpp"

#include <cstdint>
#include <vector>

// Level-n circle model on Z/M_n Z: index l stands for [l/M_n, (l+1)/M_n) and the
// rotation by P_n/M_n is l -> l + P_n.
namespace tdl::circle {

enum class Mode { Compliant, Relaxed };

const char* mode_name(Mode m);

struct Tower {
    std::vector<std::int64_t> m;  // primes, m[0] = m_1
    std::vector<std::int64_t> M;  // M[j-1] = m_1 * ... * m_j
    std::vector<std::int64_t> P;  // numerators of alpha_j = P_j / M_j
    Mode mode = Mode::Relaxed;

    int depth() const { return static_cast<int>(m.size()); }
    std::int64_t prime(int n) const { return m.at(n - 1); }
    std::int64_t modulus(int n) const { return M.at(n - 1); }
    std::int64_t numerator(int n) const { return P.at(n - 1); }
    // M_{n-1}, with M_0 = 1.
    std::int64_t parent_modulus(int n) const { return n <= 1 ? 1 : M.at(n - 2); }
};

bool is_prime(std::uint64_t n);

// Reads TDL_SEARCH_CAP (candidates examined per level); defaults to 10^7.
std::int64_t default_search_cap();

// Smallest integer exceeding 40 * M^5, saturated to INT64_MAX.
std::int64_t compliant_floor(std::int64_t prev_modulus);

// floors[k] bounds m_{k+2} from below; missing entries default to 5.
Tower build_tower(std::int64_t m1, int depth, const std::vector<std::int64_t>& floors,
                  std::int64_t search_cap = default_search_cap());
// Every m_j for j >= 2 is the first qualifying prime above 40 * M_{j-1}^5.
Tower build_compliant_tower(std::int64_t m1, int depth, std::int64_t search_cap = default_search_cap());

std::int64_t mod_inverse(std::int64_t a, std::int64_t mod);
// (a * b) mod m with a 128-bit intermediate; result in [0, m).
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);

struct CircleIndex {
    int level = 1;
    std::int64_t l = 0;
    friend bool operator==(const CircleIndex&, const CircleIndex&) = default;
};

CircleIndex rotate(const Tower& t, CircleIndex x, std::int64_t steps);

enum class Half { Left, Middle, Right };

struct HalfCirclePartition {
    int level = 1;
    std::int64_t left_last = 0;  // L = {0..left_last}
    std::int64_t middle = 0;
    std::int64_t right_first = 0;  // R = {right_first..M-1}

    Half classify(std::int64_t l) const {
        return l < middle ? Half::Left : (l == middle ? Half::Middle : Half::Right);
    }
    // +1 on L, 0 on the middle, -1 on R.
    int drift(std::int64_t l) const { return l < middle ? 1 : (l == middle ? 0 : -1); }
};

HalfCirclePartition half_partition(const Tower& t, int n);

struct VisitBalance {
    std::int64_t left = 0, right = 0, middle = 0;
    std::int64_t rho() const { return 1 + left - right; }
};

// Counts over i in {0..steps-1}, or {steps+1..0} when steps < 0.
VisitBalance orbit_visit_balance(const Tower& t, CircleIndex x, std::int64_t steps);

// 1-based digits k_1..k_n of l in mixed radix (m_1, ..., m_n).
std::vector<std::int64_t> digits(const Tower& t, int n, std::int64_t l);

// Exact rational step function on the M_n intervals: value(l) = numer[l] / denom.
struct StepFunction {
    int level = 1;
    std::vector<std::int64_t> numer;
    std::int64_t denom = 1;

    std::size_t size() const { return numer.size(); }
    Rational value(std::size_t l) const { return make_rational(numer[l], denom); }
    Rational integral() const;
    Rational left_endpoint(std::size_t l) const {
        return make_rational(static_cast<std::int64_t>(l), static_cast<std::int64_t>(numer.size()));
    }
};

// phi^n along the orbit of index 0: +1 per visit to L, -1 per visit to R.
StepFunction phi_level(const Tower& t, int n);
StepFunction psi_from_phi(const StepFunction& phi);

struct OscillationReport {
    int level = 2;
    bool compliant = false;

    std::int64_t neighbor_max = 0;
    std::int64_t neighbor_bound = 0;
    bool neighbor_asserted = false;

    std::int64_t rise_min = 0;
    Rational rise_bound{0};
    bool rise_asserted = false;

    std::int64_t boundary_spread = 0;
    std::int64_t boundary_bound = 0;
    bool boundary_asserted = false;

    // Level 2 only: |phi(T^{m_2-1} x) - phi(T x)| against 4 M_1.
    std::int64_t visit_diff_max = 0;
    std::int64_t visit_diff_bound = 0;
    bool visit_asserted = false;

    bool neighbor_ok() const { return neighbor_max <= neighbor_bound; }
    bool rise_ok() const { return Rational(rise_min) >= rise_bound; }
    bool boundary_ok() const { return boundary_spread <= boundary_bound; }
    bool visit_ok() const { return visit_diff_max <= visit_diff_bound; }
    bool pass() const {
        return (!neighbor_asserted || neighbor_ok()) && (!rise_asserted || rise_ok()) &&
               (!boundary_asserted || boundary_ok()) && (!visit_asserted || visit_ok());
    }
};

OscillationReport verify_oscillations(const Tower& t, int n);
OscillationReport verify_oscillations(const Tower& t, int n, const StepFunction& phi);

}  // namespace tdl::circle
