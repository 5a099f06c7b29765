// Acceptance driver: runs the registered claim for each criterion and prints one line per criterion.
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "pinlab/claims.hpp"
#include "pinlab/stats.hpp"

int main(int argc, char** argv) {
    std::string only;
    std::uint64_t seed = 1;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = argv[++i];
        } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
            seed = std::stoull(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only AC-n] [--seed s]\n", argv[0]);
            return 3;
        }
    }

    // AC-6 is covered by orthant-exponents; orthant-a05 is its smaller preset.
    std::map<std::string, const pinlab::ClaimInfo*> by_criterion;
    std::vector<std::string> order;
    for (const auto& c : pinlab::claim_registry()) {
        if (c.id == "orthant-a05") continue;
        if (by_criterion.emplace(c.criterion, &c).second) order.push_back(c.criterion);
    }
    if (!only.empty() && !by_criterion.count(only)) {
        std::fprintf(stderr, "unknown criterion %s\n", only.c_str());
        return 3;
    }

    const pinlab::ClaimContext ctx{seed, pinlab::default_workers()};
    int failures = 0;
    for (const std::string& ac : order) {
        if (!only.empty() && ac != only) continue;
        const pinlab::ClaimResult r = pinlab::run_claim(*by_criterion[ac], ctx);
        for (const auto& chk : r.checks)
            std::printf("    %s %s: %.6g (target %s)\n", chk.ok ? "ok  " : "FAIL", chk.name.c_str(), chk.measured,
                        chk.target.c_str());
        const bool pass = r.verdict == pinlab::Verdict::pass;
        std::printf("%s %s (%s, %.1f s)\n", pass ? "PASS" : "FAIL", ac.c_str(), r.id.c_str(), r.seconds);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
