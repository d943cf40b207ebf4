#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace twres {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

/// Runs the eleven acceptance criteria, printing one PASS/FAIL line each as it finishes.
std::vector<CriterionResult> run_acceptance(std::ostream& out, std::uint64_t seed);

}  // namespace twres
