#include "tdl/tau.hpp"

#include "tdl/error.hpp"
#include "tdl/kernels.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace tdl::tau {

using circle::StepFunction;
using circle::Tower;

std::vector<std::int64_t> TauLevel::indices_with(Label l) const {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < label.size(); ++i)
        if (label[i] == l) out.push_back(static_cast<std::int64_t>(i));
    return out;
}

std::size_t TauLevel::count(Label l) const { return static_cast<std::size_t>(std::count(label.begin(), label.end(), l)); }

std::vector<std::int64_t> induced_permutation(const Tower& t, int n, const std::vector<std::int64_t>& tau) {
    const std::int64_t M = t.modulus(n), P = t.numerator(n);
    std::vector<std::int64_t> sigma(tau.size());
    for (std::size_t l = 0; l < tau.size(); ++l) {
        std::int64_t v = static_cast<std::int64_t>(l) + circle::mul_mod(tau[l], P, M);
        sigma[l] = v >= M ? v - M : v;
    }
    return sigma;
}

MiddleGuard::MiddleGuard(const Tower& t, int n)
    : M_(t.modulus(n)), P_(t.numerator(n)), inv_(circle::mod_inverse(t.numerator(n), t.modulus(n))),
      mid_((t.modulus(n) - 1) / 2) {}

bool MiddleGuard::avoids(std::int64_t l, std::int64_t tau) const {
    if (tau == 0) return true;
    // Orbit offset at which the middle index is reached from l.
    const std::int64_t off = circle::mul_mod(mid_ - l, inv_, M_);
    if (off == 0) return false;
    return tau > 0 ? off > tau : off < M_ + tau;
}

std::int64_t MiddleGuard::steps_to(std::int64_t l, std::int64_t target) const {
    const std::int64_t k0 = circle::mul_mod(target - l, inv_, M_);
    if (k0 == 0) return 0;
    if (avoids(l, k0)) return k0;
    if (avoids(l, k0 - M_)) return k0 - M_;
    throw Error(ErrorCode::GrowthTooSmall, "no middle-avoiding step count from " + std::to_string(l) + " to " +
                                               std::to_string(target));
}

TauLevel build_tau_level1(const Tower& t) {
    if (t.depth() < 1) throw Error(ErrorCode::TowerTooShallow, "need at least one level");
    const std::int64_t M = t.modulus(1), h = (M - 3) / 2, mid = (M - 1) / 2;
    TauLevel L;
    L.level = 1;
    L.tau.assign(M, 0);
    L.label.assign(M, Label::Good);
    L.changed.assign(M, 0);
    for (std::int64_t b = 0; b < M; ++b) {
        if (b == 0) {
            L.tau[b] = h;
            L.label[b] = Label::Singular;
        } else if (b < mid) {
            L.tau[b] = -1;
        } else if (b == mid) {
            L.label[b] = Label::Middle;
        } else if (b < M - 1) {
            L.tau[b] = 1;
        } else {
            L.tau[b] = -h;
            L.label[b] = Label::Singular;
        }
    }
    L.sigma = induced_permutation(t, 1, L.tau);
    L.expected_singular = 2;
    return L;
}

std::int64_t extend_good_block(const Tower& t, int n, const MiddleGuard& guard, std::int64_t b, std::int64_t tau,
                               std::int64_t target, std::int64_t* out_tau, std::uint8_t* out_changed) {
    const std::int64_t m = t.prime(n);
    const std::int64_t a = tau < 0 ? -tau : tau;
    if (a >= m)
        throw Error(ErrorCode::GrowthTooSmall, "|tau| = " + std::to_string(a) + " does not fit a block of " +
                                                   std::to_string(m) + " subs at level " + std::to_string(n));
    for (std::int64_t s = 0; s < m; ++s) {
        out_tau[s] = tau;
        out_changed[s] = 0;
    }
    // Overflowing subs in increasing order, gaps in increasing order.
    const std::int64_t first_changed = tau > 0 ? m - a : 0;
    const std::int64_t first_gap = tau > 0 ? 0 : m - a;
    for (std::int64_t k = 0; k < a; ++k) {
        const std::int64_t s = first_changed + k;
        out_tau[s] = guard.steps_to(b * m + s, target * m + first_gap + k);
        out_changed[s] = out_tau[s] != tau;
    }
    return a;
}

TauLevel extend_tau(const TauLevel& prev, const Tower& t) {
    const int n = prev.level + 1;
    if (n > t.depth()) throw Error(ErrorCode::TowerTooShallow, "tower has no level " + std::to_string(n));
    const std::int64_t Mp = t.modulus(n - 1), m = t.prime(n), M = t.modulus(n);
    const StepFunction phi_prev = circle::phi_level(t, n - 1);
    const MiddleGuard guard(t, n);

    TauLevel L;
    L.level = n;
    L.tau.assign(M, 0);
    L.label.assign(M, Label::Good);
    L.changed.assign(M, 0);

    for (std::int64_t b = 0; b < Mp; ++b) {
        const std::int64_t tau = prev.tau[b], target = prev.sigma[b];
        std::int64_t* bt = &L.tau[b * m];
        Label* bl = &L.label[b * m];
        switch (prev.label[b]) {
            case Label::Middle:
                if (tau != 0) throw Error(ErrorCode::InvalidArgument, "middle chain must have tau = 0");
                std::fill(bl, bl + m, Label::Middle);
                break;
            case Label::Good:
                extend_good_block(t, n, guard, b, tau, target, bt, &L.changed[b * m]);
                break;
            case Label::Singular: {
                const std::int64_t dphi = phi_prev.numer[target] - phi_prev.numer[b];
                const std::int64_t kr = tau + dphi * Mp, kl = tau - dphi * Mp;
                if (dphi <= 0 || kr <= 0 || kl >= 0)
                    throw Error(ErrorCode::GrowthTooSmall, "singular parent " + std::to_string(b) +
                                                               " has dphi = " + std::to_string(dphi));
                // Middle sub joins the side of the longer shift.
                const std::int64_t start = tau >= 0 ? (m - 1) / 2 : (m + 1) / 2;
                const std::int64_t right_count = m - kr - start;
                const std::int64_t left_count = start + kl;
                if (right_count < 0 || left_count < 0)
                    throw Error(ErrorCode::GrowthTooSmall,
                                "m_" + std::to_string(n) + " = " + std::to_string(m) +
                                    " too small for singular parent " + std::to_string(b));
                L.expected_singular += 2 * dphi * Mp;
                std::int64_t gap = start - 1 + kl + 1;  // first target sub not hit by good subs
                for (std::int64_t s = 0; s < m; ++s) {
                    if (s >= -kl && s < start) {
                        bt[s] = kl;
                    } else if (s >= start && s <= m - 1 - kr) {
                        bt[s] = kr;
                    } else {
                        bl[s] = Label::Singular;
                        bt[s] = guard.steps_to(b * m + s, target * m + gap);
                        ++gap;
                    }
                }
                if (gap != start + kr)
                    throw Error(ErrorCode::GrowthTooSmall, "gap count mismatch in singular parent " +
                                                               std::to_string(b));
                break;
            }
        }
    }
    L.sigma = induced_permutation(t, n, L.tau);
    return L;
}

std::vector<TauLevel> build_levels(const Tower& t, int n) {
    std::vector<TauLevel> out;
    out.push_back(build_tau_level1(t));
    for (int k = 2; k <= n; ++k) out.push_back(extend_tau(out.back(), t));
    return out;
}

StepFunction quasi_cost(const TauLevel& level, const StepFunction& phi) {
    StepFunction q;
    q.level = level.level;
    q.numer.resize(level.size());
    for (std::size_t l = 0; l < level.size(); ++l) q.numer[l] = 1 + phi.numer[l] - phi.numer[level.sigma[l]];
    return q;
}

StepFunction quasi_cost(const TauLevel& level, const Tower& t) {
    return quasi_cost(level, circle::phi_level(t, level.level));
}

namespace {

Rational over_modulus(std::int64_t num, std::size_t M) {
    return make_rational(num, static_cast<std::int64_t>(M));
}

std::int64_t difference(const StepFunction& phi, const TauLevel& level, std::size_t l) {
    return phi.numer[l] - phi.numer[level.sigma[l]];
}

}  // namespace

Rational singular_mass(const TauLevel& level, const Tower& t) {
    const StepFunction phi = circle::phi_level(t, level.level);
    std::int64_t s = 0;
    for (std::size_t l = 0; l < level.size(); ++l)
        if (level.label[l] == Label::Singular) s += difference(phi, level, l);
    return over_modulus(s, level.size());
}

SingularLedger singular_ledger(const TauLevel& level, const TauLevel* prev, const Tower& t) {
    const StepFunction phi = circle::phi_level(t, level.level);
    const std::int64_t per_root = t.modulus(level.level) / t.modulus(1);
    const TauLevel* root = prev;
    TauLevel level1;
    if (level.level == 1) {
        root = &level;
    } else if (!prev || prev->level != 1) {
        level1 = build_tau_level1(t);
        root = &level1;
    }
    SingularLedger g;
    g.level = level.level;
    std::int64_t sing = 0, dev = 0, changed = 0;
    const std::int64_t m = t.prime(level.level);
    for (std::size_t l = 0; l < level.size(); ++l) {
        const std::int64_t d = difference(phi, level, l);
        if (level.label[l] == Label::Singular) sing += d;
        if (level.label[l] == Label::Good && root->label[l / per_root] == Label::Good) dev += d > 1 ? d - 1 : 1 - d;
        if (prev && level.level > 1 && prev->label[l / m] == Label::Good && level.tau[l] != prev->tau[l / m])
            ++changed;
    }
    g.singular_mass = over_modulus(sing, level.size());
    g.good_deviation = over_modulus(dev, level.size());
    g.change_measure = over_modulus(changed, level.size());
    return g;
}

TransportCost transport_cost_tau(const TauLevel& level, const Tower& t) {
    const StepFunction q = quasi_cost(level, t);
    const kernels::SignedParts parts = kernels::signed_parts(q.numer.data(), q.size());
    std::int64_t good = 0;
    for (std::size_t l = 0; l < q.size(); ++l)
        if (level.label[l] != Label::Singular) good += q.numer[l];
    TransportCost c;
    c.total = over_modulus(parts.positive + parts.negative, q.size());
    c.positive_part = over_modulus(parts.positive, q.size());
    c.good_part = over_modulus(good, q.size());
    return c;
}

Report verify_level(const TauLevel& level, const TauLevel* prev, const Tower& t) {
    Report r;
    const int n = level.level;
    const std::int64_t M = t.modulus(n), m = t.prime(n), Mp = t.parent_modulus(n);
    const std::int64_t mid = (M - 1) / 2;

    if (static_cast<std::int64_t>(level.size()) != M || level.sigma.size() != level.size() ||
        level.label.size() != level.size()) {
        r.add("shape", false, "vectors do not have length M_n = " + std::to_string(M));
        return r;
    }
    r.add("shape", true);

    {
        bool ok = true;
        std::string detail;
        const auto expect = induced_permutation(t, n, level.tau);
        if (expect != level.sigma) {
            ok = false;
            detail = "sigma differs from the permutation induced by tau";
        }
        std::vector<std::int64_t> seen(M, -1);
        for (std::int64_t l = 0; l < M && ok; ++l) {
            const std::int64_t s = level.sigma[l];
            if (s < 0 || s >= M) {
                ok = false;
                detail = "sigma(" + std::to_string(l) + ") out of range";
            } else if (seen[s] >= 0) {
                ok = false;
                detail = "indices " + std::to_string(seen[s]) + " and " + std::to_string(l) + " both map to " +
                         std::to_string(s);
            } else {
                seen[s] = l;
            }
        }
        r.add("permutation", ok, detail);
    }

    {
        const MiddleGuard guard(t, n);
        std::int64_t bad = 0, first = -1;
        for (std::int64_t l = 0; l < M; ++l) {
            const std::int64_t a = level.tau[l] < 0 ? -level.tau[l] : level.tau[l];
            if (a >= M || !guard.avoids(l, level.tau[l])) {
                if (first < 0) first = l;
                ++bad;
            }
        }
        r.add("middle_avoidance", bad == 0,
              bad ? std::to_string(bad) + " failures, first at " + std::to_string(first) : "");
    }

    {
        bool ok = level.label[mid] == Label::Middle;
        const std::int64_t per_root = M / t.modulus(1), root_mid = (t.modulus(1) - 1) / 2;
        for (std::int64_t l = 0; l < M && ok; ++l) {
            const bool in_chain = l / per_root == root_mid;
            if (in_chain != (level.label[l] == Label::Middle) || (in_chain && level.tau[l] != 0)) ok = false;
        }
        r.add("middle_chain", ok, ok ? "" : "labels or tau on the middle chain are inconsistent");
    }

    const StepFunction phi = circle::phi_level(t, n);
    const StepFunction q = quasi_cost(level, phi);
    {
        const std::int64_t s = kernels::sum(q.numer.data(), q.size());
        r.add("quasi_cost_mean_one", s == M, "sum q / M_n = " + to_string(make_rational(s, M)));
    }

    {
        std::int64_t bad = 0, worst = 0;
        for (std::int64_t l = 0; l < M; ++l) {
            if (level.label[l] != Label::Singular) continue;
            const std::int64_t d = phi.numer[l] - phi.numer[level.sigma[l]];
            worst = std::max(worst, d);
            if (d > 0) ++bad;
        }
        r.add("singular_sign", bad == 0, "max singular difference " + std::to_string(worst));
    }

    const std::int64_t nsing = static_cast<std::int64_t>(level.count(Label::Singular));
    r.add("singular_count", nsing == level.expected_singular,
          std::to_string(nsing) + " singular, expected " + std::to_string(level.expected_singular));
    if (n >= 2)
        r.add("singular_count_bound", nsing < 2 * Mp * Mp * (M / (Mp * m)) + 2 * Mp * Mp,
              std::to_string(nsing) + " < 2 M_{n-1}^2 = " + std::to_string(2 * Mp * Mp));

    if (n == 1 || !prev) {
        r.skip("nesting", "no parent level");
        return r;
    }

    {
        bool ok = true;
        std::string detail;
        for (std::int64_t l = 0; l < M && ok; ++l) {
            if (level.sigma[l] / m != prev->sigma[l / m]) {
                ok = false;
                detail = "index " + std::to_string(l) + " leaves the prescribed image block";
            }
        }
        r.add("nesting", ok, detail);
    }

    const StepFunction phi_prev = circle::phi_level(t, n - 1);
    {
        std::int64_t worst_block = 0, dev = 0;
        bool k17 = true, unchanged = true;
        for (std::int64_t b = 0; b < Mp; ++b) {
            const std::int64_t dprev = phi_prev.numer[b] - phi_prev.numer[prev->sigma[b]];
            std::int64_t changed = 0;
            for (std::int64_t s = 0; s < m; ++s) {
                const std::int64_t l = b * m + s;
                const std::int64_t d = phi.numer[l] - phi.numer[level.sigma[l]];
                if (prev->label[b] == Label::Good) {
                    if (level.tau[l] != prev->tau[b]) {
                        ++changed;
                    } else if (d != dprev) {
                        unchanged = false;
                    }
                    dev += d > dprev ? d - dprev : dprev - d;
                } else if (prev->label[b] == Label::Singular && level.label[l] == Label::Good && d != 0) {
                    k17 = false;
                }
            }
            worst_block = std::max(worst_block, changed);
        }
        r.add("change_per_good_block", worst_block <= Mp,
              "max changed subs per good block " + std::to_string(worst_block) + " <= M_{n-1} = " +
                  std::to_string(Mp));
        r.add("unchanged_good_difference", unchanged);
        r.add("singular_parent_good_difference_zero", k17);
        r.add("good_deviation_report", true,
              "sum |d_{n-1} - d_n| / M_n = " + to_string(make_rational(dev, M)) + ", times m_n = " +
                  to_string(make_rational(dev * m, M)));
    }

    if (n == 2) {
        const std::int64_t M1 = t.modulus(1);
        std::int64_t worst = std::numeric_limits<std::int64_t>::min(), sum = 0;
        for (std::int64_t l = 0; l < M; ++l) {
            if (level.label[l] != Label::Singular) continue;
            const std::int64_t d = phi.numer[l] - phi.numer[level.sigma[l]];
            worst = std::max(worst, d);
            sum += d;
        }
        const Rational bound = make_rational(-m, 2 * M1) + Rational(20 * M1 * M1 * M1 * M1);
        const Rational mass = make_rational(sum, M);
        const Rational base = Rational(-1) + make_rational(3, M1);
        const Rational c = (mass - base) * m;
        const Rational c_bound = Rational(40 * M1 * M1 * M1 * M1 * (M1 - 3));
        const std::string d1 = "max singular difference " + std::to_string(worst) + " vs " + to_string(bound);
        const std::string d2 = "mass " + to_string(mass) + " = -1 + 3/M_1 + c/m_2 with c = " + to_string(c);
        if (t.mode == circle::Mode::Compliant) {
            r.add("singular_value_bound", Rational(worst) <= bound, d1);
            r.add("singular_mass_bound", c <= c_bound, d2 + " <= " + to_string(c_bound));
        } else {
            r.skip("singular_value_bound", d1 + " (relaxed tower)");
            r.skip("singular_mass_bound", d2 + " (relaxed tower)");
        }
    }
    return r;
}

}  // namespace tdl::tau
