#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "schw/ode.hpp"
#include "schw/report.hpp"

namespace schw {

struct CriterionOutcome {
    int id = 0;
    std::string title;
    bool pass = false;
    std::vector<Check> checks;
    /// Reported quantities that are not pass/fail (e.g. the empirical band).
    Json values = Json::object();
};

/// Runs the nine acceptance criteria. Random draws use a 64-bit Mersenne
/// Twister seeded with `seed`, one stream per criterion.
std::vector<CriterionOutcome> run_acceptance(std::uint64_t seed = kDefaultSeed);

/// Single-criterion entry point, 1 <= id <= 9.
CriterionOutcome run_criterion(int id, std::uint64_t seed = kDefaultSeed);

/// One "criterion N: PASS|FAIL  title" line per outcome, followed by the
/// failing checks.
void write_acceptance_table(std::ostream& out, const std::vector<CriterionOutcome>& outcomes);

/// Report for `verify all`: one check per criterion plus the detailed checks.
Report acceptance_report(const std::vector<CriterionOutcome>& outcomes, std::uint64_t seed);

} // namespace schw
