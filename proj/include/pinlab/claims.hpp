#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pinlab {

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct Check {
    std::string name;
    double measured = 0.0;
    std::string target;
    bool ok = false;
};

struct ClaimContext {
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

struct ClaimResult {
    std::string id;
    std::string criterion;
    Verdict verdict = Verdict::inconclusive;
    std::vector<Check> checks;
    nlohmann::json details = nlohmann::json::object();
    double seconds = 0.0;
};

struct ClaimInfo {
    std::string id;
    std::string criterion;
    std::string description;
    /// Wall-clock budget in seconds; exceeding it fails the claim.
    double budget_seconds = 0.0;
    std::function<void(const ClaimContext&, ClaimResult&)> body;
};

const std::vector<ClaimInfo>& claim_registry();
/// nullptr when unknown.
const ClaimInfo* find_claim(const std::string& id);

/// Runs the preset; verdict is pass only if every check holds.
ClaimResult run_claim(const ClaimInfo& claim, const ClaimContext& ctx);

nlohmann::json to_json(const ClaimResult& r);

}  // namespace pinlab
