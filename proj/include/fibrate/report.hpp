#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibrate {

enum class CheckStatus { pass, fail, skip };

struct Check {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string details;
    std::map<std::string, double> stats;
};

/// Result of a verification run: named checks with pass/fail status plus the
/// tolerances and seed that produced them. Deterministic given seed and flags
/// except for elapsed_ms.
struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    std::map<std::string, double> tolerances;
    std::vector<Check> checks;
    double elapsed_ms = 0.0;

    Report() = default;
    Report(std::string suite_name, std::uint64_t seed_value)
        : suite(std::move(suite_name)), seed(seed_value) {}

    void pass(const std::string& name, const std::string& details = "",
              std::map<std::string, double> stats = {}) {
        checks.push_back({name, CheckStatus::pass, details, std::move(stats)});
    }

    void fail(const std::string& name, const std::string& details,
              std::map<std::string, double> stats = {}) {
        if (details.empty())
            throw std::invalid_argument("Report::fail requires nonempty details");
        checks.push_back({name, CheckStatus::fail, details, std::move(stats)});
    }

    void skip(const std::string& name, const std::string& details = "") {
        checks.push_back({name, CheckStatus::skip, details, {}});
    }

    /// Records a pass or a fail depending on ok.
    void record(const std::string& name, bool ok, const std::string& details_on_fail,
                std::map<std::string, double> stats = {}) {
        if (ok)
            pass(name, "", std::move(stats));
        else
            fail(name, details_on_fail, std::move(stats));
    }

    std::size_t failures() const {
        std::size_t n = 0;
        for (const auto& c : checks)
            if (c.status == CheckStatus::fail) ++n;
        return n;
    }

    bool all_passed() const { return failures() == 0; }

    void append(const Report& other, const std::string& prefix) {
        for (const auto& c : other.checks) {
            Check copy = c;
            copy.name = prefix + "/" + c.name;
            checks.push_back(std::move(copy));
        }
        for (const auto& [k, v] : other.tolerances) tolerances[prefix + "/" + k] = v;
    }
};

}  // namespace fibrate
