#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ecf::acceptance {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

enum class Suite { Quick, Full };

/// Criteria ids in a suite. Quick holds the exact-arithmetic items.
std::vector<int> suite_items(Suite suite);

/// Runs one criterion (1..14). Exceptions are reported as failures.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_suite(Suite suite,
                                       const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 3  title (1.2 s): detail"
std::string format_result(const CriterionResult& result);

} // namespace ecf::acceptance
