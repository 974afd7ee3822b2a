#pragma once

#include "kfp/solver.hpp"

#include <string>
#include <vector>

namespace kfp::repro {

struct Check {
    std::string name;
    std::string expected;
    std::string computed;
    bool pass = false;
};

struct CaseResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    bool pass = true;
};

// The four embedded case studies, desk-scale and deterministic.
CaseResult case_one();    // three-point map with two fixed points
CaseResult case_two();    // swap map with none
CaseResult case_three();  // linear family thresholds on the default grid
CaseResult case_four();   // two-branch parameter search and discretization
std::vector<CaseResult> run_cases(const std::vector<int>& ids);

std::string render(const std::vector<CaseResult>& results, bool structured);
bool all_pass(const std::vector<CaseResult>& results);

}  // namespace kfp::repro
