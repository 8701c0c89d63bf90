#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "riskflow/domain.hpp"
#include "riskflow/time.hpp"

namespace riskflow {

enum class Step { Profile, Assessment, Evaluation, Treatment, Monitoring };
inline constexpr std::array kSteps{Step::Profile, Step::Assessment, Step::Evaluation,
                                   Step::Treatment, Step::Monitoring};

std::string_view to_code(Step s);   // "profile", "assessment", ...
std::string_view display_name(Step s);  // "Profile", "Assessment", ...
Step parse_step(std::string_view text);
std::optional<Step> next_step(Step s);

struct ActionItem {
    std::string text;
    std::string owner;
    std::chrono::year_month_day due;

    friend bool operator==(const ActionItem&, const ActionItem&) = default;
};

struct TreatmentPlan {
    std::vector<ActionItem> mitigation_actions;
    std::vector<std::string> controls;
    std::string validation_note;

    friend bool operator==(const TreatmentPlan&, const TreatmentPlan&) = default;
};

enum class Effectiveness { Effective, Ineffective, Inconclusive };
std::string_view to_code(Effectiveness e);
Effectiveness parse_effectiveness(std::string_view text);

struct MonitoringRecord {
    std::string observation;
    Effectiveness effective = Effectiveness::Inconclusive;
    std::string reviewed_by;

    friend bool operator==(const MonitoringRecord&, const MonitoringRecord&) = default;
};

ValidationReport validate_treatment(const TreatmentPlan& plan);
ValidationReport validate_monitoring(const MonitoringRecord& record);

// Alternative index == Step value.
using StepPayload =
    std::variant<RiskProfile, RiskAssessment, RiskEvaluation, TreatmentPlan, MonitoringRecord>;

struct StepRecord {
    std::uint32_t iteration = 0;
    std::string documentation;
    std::string actor;
    Timestamp timestamp{};
    StepPayload payload;

    Step step() const { return static_cast<Step>(payload.index()); }

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// One risk through its whole life. The current profile, assessment, etc.
/// are the latest record of each step; earlier records stay in `history`.
struct RiskCase {
    CaseId case_id = 0;
    std::vector<StepRecord> history;

    const StepRecord* latest(Step s) const;

    const RiskProfile& profile() const;
    const RiskAssessment* assessment() const;
    const RiskEvaluation* evaluation() const;
    const TreatmentPlan* treatment() const;
    const MonitoringRecord* monitoring() const;

    friend bool operator==(const RiskCase&, const RiskCase&) = default;
};

struct Carryover {
    CaseId case_id = 0;
    std::string justification;
    Step resume_step = Step::Profile;

    friend bool operator==(const Carryover&, const Carryover&) = default;
};

struct Iteration {
    std::uint32_t index = 0;
    Timestamp opened_at{};
    std::optional<Timestamp> closed_at;
    std::uint32_t cadence_days = 21;
    std::vector<Carryover> carryover;

    bool is_open() const { return !closed_at.has_value(); }

    friend bool operator==(const Iteration&, const Iteration&) = default;
};

} // namespace riskflow
