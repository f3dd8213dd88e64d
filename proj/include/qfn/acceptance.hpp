#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qfn::accept {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs all ten acceptance criteria, printing one pass/fail line per
/// criterion to `out`.  Returns true iff every criterion passed.
bool run_all(std::ostream& out);

}  // namespace qfn::accept
