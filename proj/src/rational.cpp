#include "tdl/rational.hpp"

#include "tdl/error.hpp"

#include <cctype>

namespace tdl {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InfeasibleMarginals: return "InfeasibleMarginals";
        case ErrorCode::NoFinitePlan: return "NoFinitePlan";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InfiniteCostInSupport: return "InfiniteCostInSupport";
        case ErrorCode::NegativeEpsilon: return "NegativeEpsilon";
        case ErrorCode::InfiniteCostOnPi0Support: return "InfiniteCostOnPi0Support";
        case ErrorCode::SearchCapExceeded: return "SearchCapExceeded";
        case ErrorCode::GrowthTooSmall: return "GrowthTooSmall";
        case ErrorCode::TowerTooShallow: return "TowerTooShallow";
        case ErrorCode::GraphOverlapInconsistency: return "GraphOverlapInconsistency";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
    mpz_class n, d;
    mpz_set_si(n.get_mpz_t(), num);
    mpz_set_si(d.get_mpz_t(), den);
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const auto last = text.find_last_not_of(" \t\r\n");
    std::string s(first == std::string_view::npos ? std::string_view{} : text.substr(first, last - first + 1));
    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+')
        throw Error(ErrorCode::ParseError, "not a rational: '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const ExtRational& e) {
    return e.is_infinite() ? std::string("inf") : to_string(e.value());
}

ExtRational parse_ext_rational(std::string_view text) {
    if (text == "inf") return ExtRational::infinity();
    return ExtRational(parse_rational(text));
}

std::ostream& operator<<(std::ostream& os, const ExtRational& e) { return os << to_string(e); }

}  // namespace tdl
