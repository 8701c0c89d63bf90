#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "riskflow/register.hpp"

namespace riskflow {

// Register file format: one UTF-8 JSON document, snake_case keys (emitted in
// sorted order), enum values as canonical codes, RFC 3339 UTC timestamps and
// pairwise judgments as "p/q" strings.

using nlohmann::json;

json to_json(const RatingMatrix& m);
json to_json(const RiskProfile& p);
json to_json(const RiskAssessment& a);
json to_json(const RiskEvaluation& e);
json to_json(const TreatmentPlan& t);
json to_json(const MonitoringRecord& m);
json to_json(const StepPayload& payload);
json to_json(const StepRecord& r);
json to_json(const RiskCase& c);
json to_json(const Iteration& it);
json to_json(const PairwiseMatrix& m);
json to_json(const ConsistencyReport& r);
json to_json(const AhpSession& s);
json to_json(const AuditEntry& e);
json to_json(const TieGroup& g);
json to_json(const Register& reg);

// Decoders throw Error "ParseError" with details.location set to a JSON
// pointer of the offending value.
RatingMatrix matrix_from_json(const json& j, const std::string& location = "");
RiskProfile profile_from_json(const json& j, const std::string& location = "");
StepPayload payload_from_json(Step step, const json& j, const std::string& location = "");
Register register_from_json(const json& j);

/// Deterministic: equal registers produce byte-identical output.
std::string save(const Register& reg);

/// Parses, checks schema version, audit chain and register invariants.
/// Throws "ParseError", "UnsupportedVersion", "AuditChainBroken" or
/// "InvariantViolation".
Register load(std::string_view document);

Register load_file(const std::filesystem::path& path);
/// Writes to a temporary sibling then renames over `path`.
void save_file(const Register& reg, const std::filesystem::path& path);

/// The seven-case postal-drone case study: iteration 1 with Profile,
/// Assessment and Evaluation recorded for every case.
Register seed_case_study();

} // namespace riskflow
