// Acceptance runner: one line per criterion, nonzero exit if any fails.
#include <cstdint>
#include <iostream>
#include <string>

#include "schw/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = schw::kDefaultSeed;
    if (argc > 1) seed = std::stoull(argv[1], nullptr, 0);
    const auto outcomes = schw::run_acceptance(seed);
    schw::write_acceptance_table(std::cout, outcomes);
    for (const auto& o : outcomes)
        if (!o.pass) return 1;
    return 0;
}
