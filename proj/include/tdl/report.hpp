#pragma once

#include <string>
#include <vector>

namespace tdl {

enum class CheckStatus { Pass, Fail, Skipped };

struct Check {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
};

struct Report {
    std::vector<Check> checks;

    void add(std::string name, bool ok, std::string detail = {}) {
        checks.push_back({std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)});
    }
    void skip(std::string name, std::string detail = {}) {
        checks.push_back({std::move(name), CheckStatus::Skipped, std::move(detail)});
    }
    bool pass() const {
        for (const auto& c : checks)
            if (c.status == CheckStatus::Fail) return false;
        return true;
    }
    const Check* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

inline const char* status_name(CheckStatus s) {
    return s == CheckStatus::Pass ? "pass" : (s == CheckStatus::Fail ? "fail" : "skipped");
}

}  // namespace tdl
