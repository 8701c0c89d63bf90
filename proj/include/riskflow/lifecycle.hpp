#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskflow/register.hpp"

namespace riskflow {

// Cycle operations. Each edits a working register (normally the private copy
// inside commit()) and throws riskflow::Error without side effects visible to
// the caller's committed snapshot.

inline constexpr std::uint32_t kMinCadenceDays = 14;
inline constexpr std::uint32_t kMaxCadenceDays = 28;

struct OpenedIteration {
    Iteration iteration;
    std::vector<std::string> warnings;  // CadenceWarning messages
};

/// Throws "IterationAlreadyOpen" or "InvalidCadence" (zero days).
OpenedIteration open_iteration(Register& reg, std::uint32_t cadence_days, Timestamp now);

struct CloseOverride {
    CaseId case_id = 0;
    std::string justification;
};

struct CaseCompletion {
    CaseId case_id = 0;
    std::optional<Step> last_step;
    bool complete = false;
    std::optional<std::string> justification;
};

struct ClosedIteration {
    Iteration iteration;
    std::vector<CaseCompletion> cases;
};

/// Closes the open iteration when every case reached Monitoring or has a
/// justified override. Throws "NoOpenIteration", "UnknownCase" or
/// "IncompleteCases" (details.case_ids).
ClosedIteration close_iteration(Register& reg, std::span<const CloseOverride> overrides,
                                Timestamp now);

/// Creates a case from its profile and records the Profile step. A zero
/// case_id is replaced by max(existing) + 1. Returns the new id.
CaseId add_case(Register& reg, RiskProfile profile, std::string documentation,
                std::string actor, Timestamp now);

/// Appends `record` to the case history in the open iteration. Steps must
/// follow Profile -> Assessment -> Evaluation -> Treatment -> Monitoring;
/// re-recording a reached step supersedes its payload. Assessments get their
/// rating from the register matrix. Throws "NoOpenIteration", "UnknownCase",
/// "DocumentationRequired", "StepOrderViolation" or "InvalidPayload".
const RiskCase& record_step(Register& reg, CaseId case_id, StepRecord record);

/// Highest step reached by the case in `iteration`, counting steps carried
/// over from the previous iteration.
std::optional<Step> reached_step(const Register& reg, const RiskCase& c, std::uint32_t iteration);

struct CaseStatus {
    CaseId case_id = 0;
    std::uint32_t iteration = 0;  // 0 when no iteration exists
    std::optional<Step> current;
    std::optional<Step> next;
    bool complete = false;

    /// "awaiting Profile", "at Assessment, next Evaluation", "at Monitoring, complete".
    std::string describe() const;
};

/// Throws "UnknownCase".
CaseStatus case_status(const Register& reg, CaseId case_id);

} // namespace riskflow
