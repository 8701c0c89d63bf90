#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskflow/lifecycle.hpp"
#include "riskflow/register.hpp"

namespace riskflow {

/// Rendered table: header row plus one row per case. Missing steps show "-".
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_markdown() const;
    std::string to_csv() const;  // RFC 4180, CRLF-free ("\n" line ends)
    nlohmann::json to_json() const;
};

Table profile_table(const Register& reg);
Table assessment_table(const Register& reg);
Table evaluation_table(const Register& reg);

/// Case counts per matrix cell. Rows are likelihood descending and columns
/// severity descending, the same orientation as the printed matrix.
struct Heatmap {
    std::vector<Likelihood> rows;
    std::vector<Severity> columns;
    std::vector<std::vector<int>> counts;
    std::vector<std::vector<Rating>> ratings;

    int count(Likelihood l, Severity s) const;
    int total() const;

    std::string to_markdown() const;
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

Heatmap heatmap(const Register& reg);

struct IterationSummary {
    Iteration iteration;
    std::vector<CaseCompletion> cases;
    std::map<Rating, int> ratings;
    std::vector<TieGroup> open_ties;  // default levels, not yet ranked by a complete session

    std::string to_markdown() const;
    nlohmann::json to_json() const;
};

/// Throws "UnknownIteration".
IterationSummary iteration_summary(const Register& reg, std::uint32_t index);

} // namespace riskflow
