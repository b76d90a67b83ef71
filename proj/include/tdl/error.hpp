#pragma once

#include <stdexcept>
#include <string>

namespace tdl {

enum class ErrorCode {
    InfeasibleMarginals,
    NoFinitePlan,
    DimensionMismatch,
    InfiniteCostInSupport,
    NegativeEpsilon,
    InfiniteCostOnPi0Support,
    SearchCapExceeded,
    GrowthTooSmall,
    TowerTooShallow,
    GraphOverlapInconsistency,
    InvalidArgument,
    ParseError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tdl
