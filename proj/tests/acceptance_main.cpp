// Runs the eight release-gating criteria at full sample sizes and prints one
// line per criterion. Exit 0 only if every criterion passes.
#include <cstdio>
#include <cstring>

#include "refrule/verify.hpp"

int main(int argc, char** argv) {
    refrule::VerifyOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--fast") == 0) opt.fast = true;
    }
    auto results = refrule::run_verification(opt);
    for (const auto& r : results) {
        std::printf("criterion %d: %s  %s (%.1f s)\n", r.id, r.pass ? "pass" : "FAIL",
                    r.title.c_str(), r.seconds);
        for (const auto& c : r.checks) {
            if (!c.pass) std::printf("    FAIL %s: %s\n", c.name.c_str(), c.detail.c_str());
        }
    }
    bool ok = refrule::all_pass(results);
    std::printf("%s\n", ok ? "all criteria pass" : "ACCEPTANCE FAILED");
    return ok ? 0 : 1;
}
