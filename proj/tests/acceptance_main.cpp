// Acceptance gate: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Exit code 0 only if all pass.

#include <iostream>

#include "tsl/acceptance.hpp"

int main() {
    const auto results = tsl::run_acceptance(std::cout);
    bool ok = true;
    for (const tsl::CriterionResult& r : results) ok = ok && r.pass;
    std::cout << (ok ? "acceptance: all criteria passed\n"
                     : "acceptance: FAILURES present\n");
    return ok ? 0 : 1;
}
