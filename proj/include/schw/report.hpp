#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schw/jet.hpp"

namespace schw {

using Json = nlohmann::ordered_json;

/// One pass/fail comparison. Missing numbers are NaN and serialise as null.
struct Check {
    std::string name;
    bool pass = false;
    double measured = std::numeric_limits<double>::quiet_NaN();
    double bound = std::numeric_limits<double>::quiet_NaN();
    double tolerance = std::numeric_limits<double>::quiet_NaN();
};

/// Output of one command: {command, inputs, values, checks}. `headline` is
/// the first line of the text rendering and is not serialised.
struct Report {
    std::string command;
    Json inputs = Json::object();
    Json values = Json::object();
    std::vector<Check> checks;
    std::string headline;

    bool all_pass() const;
    Check& add_check(std::string name, bool pass, double measured = std::numeric_limits<double>::quiet_NaN(),
                     double bound = std::numeric_limits<double>::quiet_NaN(),
                     double tolerance = std::numeric_limits<double>::quiet_NaN());
};

Json to_json(Complex z);
Json to_json(const Check& c);
Json to_json(const Report& r);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

void write_json(std::ostream& out, const Report& r);
/// Headline, then one "key: value" line per value and one line per check.
void write_text(std::ostream& out, const Report& r);
/// name,pass,measured,bound,tolerance rows for the checks.
void write_checks_csv(std::ostream& out, const Report& r);

} // namespace schw
