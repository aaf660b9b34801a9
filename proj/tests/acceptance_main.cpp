// Acceptance runner: one line per criterion.
//   acceptance            full suite
//   acceptance quick      quick suite
//   acceptance 3 7 12     selected criteria
#include "ecf/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv)
{
    using namespace ecf::acceptance;
    std::vector<int> ids;
    Suite suite = Suite::Full;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "quick") suite = Suite::Quick;
        else if (arg == "full") suite = Suite::Full;
        else ids.push_back(std::atoi(arg.c_str()));
    }
    if (ids.empty()) ids = suite_items(suite);
    bool all = true;
    for (int id : ids) {
        const CriterionResult r = run_criterion(id);
        std::cout << format_result(r) << std::endl;
        all = all && r.passed;
    }
    return all ? 0 : 1;
}
