// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include "pulsebeam/verify.hpp"

#include <chrono>
#include <iostream>

int main()
{
    using clock = std::chrono::steady_clock;
    int failed = 0;
    const auto start = clock::now();
    for (const auto& check : pulsebeam::verify::run_all()) {
        std::cout << pulsebeam::verify::format(check) << '\n';
        failed += check.passed ? 0 : 1;
    }
    const double seconds = std::chrono::duration<double>(clock::now() - start).count();
    std::cout << (failed == 0 ? "all 12 criteria passed" : std::to_string(failed) + " criteria failed") << " in "
              << seconds << " s\n";
    return failed == 0 ? 0 : 1;
}
