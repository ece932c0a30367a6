#ifndef FRACLIND_VERIFY_HPP
#define FRACLIND_VERIFY_HPP

#include <ostream>
#include <string>
#include <vector>

namespace fraclind {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the acceptance checks against the canonical model files in modelDir;
/// prints one pass/fail line per criterion to log when given.
std::vector<CriterionResult> run_acceptance(const std::string& modelDir,
                                            std::ostream* log = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace fraclind

#endif
