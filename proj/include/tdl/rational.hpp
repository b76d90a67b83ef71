#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace tdl {

using Rational = mpq_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

// Canonical "p/q" with q > 0 and gcd(p, q) = 1; integers keep the "/1".
std::string to_string(const Rational& r);
Rational parse_rational(std::string_view text);

// A nonnegative-or-any rational extended by a single +inf point.
class ExtRational {
public:
    ExtRational() = default;
    ExtRational(const Rational& v) : value_(v) {}  // NOLINT(google-explicit-constructor)
    ExtRational(std::int64_t v) : value_(v) {}     // NOLINT(google-explicit-constructor)

    static ExtRational infinity() {
        ExtRational e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }
    // Only meaningful when finite.
    const Rational& value() const { return value_; }

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
        if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
        if (a.infinite_) return std::strong_ordering::greater;
        if (b.infinite_) return std::strong_ordering::less;
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return ExtRational(Rational(a.value_ + b.value_));
    }

private:
    bool infinite_ = false;
    Rational value_{0};
};

std::string to_string(const ExtRational& e);
ExtRational parse_ext_rational(std::string_view text);

std::ostream& operator<<(std::ostream& os, const ExtRational& e);

}  // namespace tdl
