#ifndef TEAMFORM_VERIFY_HPP
#define TEAMFORM_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace teamform {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int threads = 0;
    std::vector<int> only;  // empty = run everything
};

// Runs the full verification suite: exact checks of the combinatorial
// machinery, statistical checks of the protocol's transition laws, and the
// qualitative convergence-shape studies. Every check replays from the seed
// recorded in its result.
std::vector<CriterionResult> run_acceptance_suite(const VerifyOptions& options);

// Prints one PASS/FAIL line per criterion; returns the number of failures.
int report_results(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace teamform

#endif
