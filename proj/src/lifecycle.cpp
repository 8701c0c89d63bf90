#include "riskflow/lifecycle.hpp"

#include <algorithm>
#include <map>

#include "riskflow/error.hpp"

namespace riskflow {

std::string_view to_code(Step s) {
    switch (s) {
    case Step::Profile: return "profile";
    case Step::Assessment: return "assessment";
    case Step::Evaluation: return "evaluation";
    case Step::Treatment: return "treatment";
    case Step::Monitoring: return "monitoring";
    }
    return "?";
}

std::string_view display_name(Step s) {
    switch (s) {
    case Step::Profile: return "Profile";
    case Step::Assessment: return "Assessment";
    case Step::Evaluation: return "Evaluation";
    case Step::Treatment: return "Treatment";
    case Step::Monitoring: return "Monitoring";
    }
    return "?";
}

Step parse_step(std::string_view text) {
    std::string key;
    for (char c : text) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (Step s : kSteps) {
        if (key == to_code(s)) return s;
    }
    throw Error("UnknownLevel", "unknown step: '" + std::string(text) + "'",
                {{"kind", "step"}, {"text", text}});
}

std::optional<Step> next_step(Step s) {
    if (s == Step::Monitoring) return std::nullopt;
    return static_cast<Step>(static_cast<int>(s) + 1);
}

std::string_view to_code(Effectiveness e) {
    switch (e) {
    case Effectiveness::Effective: return "effective";
    case Effectiveness::Ineffective: return "ineffective";
    case Effectiveness::Inconclusive: return "inconclusive";
    }
    return "?";
}

Effectiveness parse_effectiveness(std::string_view text) {
    std::string key;
    for (char c : text) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (key == "effective" || key == "yes") return Effectiveness::Effective;
    if (key == "ineffective" || key == "no") return Effectiveness::Ineffective;
    if (key == "inconclusive") return Effectiveness::Inconclusive;
    throw Error("UnknownLevel", "unknown effectiveness: '" + std::string(text) + "'",
                {{"kind", "effectiveness"}, {"text", text}});
}

ValidationReport validate_treatment(const TreatmentPlan& plan) {
    ValidationReport report;
    if (plan.mitigation_actions.empty()) report.push_back({"EmptyField", "mitigation_actions"});
    for (const auto& action : plan.mitigation_actions) {
        if (is_blank(action.text)) report.push_back({"EmptyField", "mitigation_actions.text"});
        if (is_blank(action.owner)) report.push_back({"EmptyField", "mitigation_actions.owner"});
        if (!action.due.ok()) report.push_back({"InvalidDate", "mitigation_actions.due"});
    }
    for (const auto& control : plan.controls) {
        if (is_blank(control)) report.push_back({"EmptyField", "controls"});
    }
    return report;
}

ValidationReport validate_monitoring(const MonitoringRecord& record) {
    ValidationReport report;
    if (is_blank(record.observation)) report.push_back({"EmptyField", "observation"});
    return report;
}

const StepRecord* RiskCase::latest(Step s) const {
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (it->step() == s) return &*it;
    }
    return nullptr;
}

const RiskProfile& RiskCase::profile() const {
    const StepRecord* r = latest(Step::Profile);
    if (!r) throw Error("InvariantViolation", "case has no profile record");
    return std::get<RiskProfile>(r->payload);
}

namespace {

template <typename T>
const T* latest_payload(const RiskCase& c, Step s) {
    const StepRecord* r = c.latest(s);
    return r ? &std::get<T>(r->payload) : nullptr;
}

} // namespace

const RiskAssessment* RiskCase::assessment() const {
    return latest_payload<RiskAssessment>(*this, Step::Assessment);
}
const RiskEvaluation* RiskCase::evaluation() const {
    return latest_payload<RiskEvaluation>(*this, Step::Evaluation);
}
const TreatmentPlan* RiskCase::treatment() const {
    return latest_payload<TreatmentPlan>(*this, Step::Treatment);
}
const MonitoringRecord* RiskCase::monitoring() const {
    return latest_payload<MonitoringRecord>(*this, Step::Monitoring);
}

// ---------------------------------------------------------------------------

namespace {

Iteration& require_open(Register& reg) {
    if (auto* it = reg.open_iteration()) return *it;
    throw Error("NoOpenIteration", "no iteration is open; open one first");
}

void trim_in_place(std::string& s) { s = trim(s); }

void normalise(RiskProfile& p) {
    trim_in_place(p.asset);
    trim_in_place(p.description);
    trim_in_place(p.consequence);
}
void normalise(RiskAssessment& a) {
    trim_in_place(a.vulnerability);
    trim_in_place(a.threat);
    trim_in_place(a.threat_agent);
}
void normalise(RiskEvaluation& e) { trim_in_place(e.solution); }
void normalise(TreatmentPlan& t) {
    for (auto& a : t.mitigation_actions) {
        trim_in_place(a.text);
        trim_in_place(a.owner);
    }
    for (auto& c : t.controls) trim_in_place(c);
    trim_in_place(t.validation_note);
}
void normalise(MonitoringRecord& m) {
    trim_in_place(m.observation);
    trim_in_place(m.reviewed_by);
}

ValidationReport validate_payload(const StepPayload& payload) {
    return std::visit(
        [](const auto& p) -> ValidationReport {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RiskProfile>) return validate_profile(p);
            if constexpr (std::is_same_v<T, RiskAssessment>) return validate_assessment(p);
            if constexpr (std::is_same_v<T, RiskEvaluation>) return validate_evaluation(p);
            if constexpr (std::is_same_v<T, TreatmentPlan>) return validate_treatment(p);
            if constexpr (std::is_same_v<T, MonitoringRecord>) return validate_monitoring(p);
        },
        payload);
}

[[noreturn]] void invalid_payload(Step step, const ValidationReport& report) {
    nlohmann::json list = nlohmann::json::array();
    std::string fields;
    for (const auto& v : report) {
        list.push_back({{"code", v.code}, {"field", v.field}});
        if (!fields.empty()) fields += ", ";
        fields += v.code + "(" + v.field + ")";
    }
    throw Error("InvalidPayload",
                std::string(display_name(step)) + " payload rejected: " + fields,
                {{"step", to_code(step)}, {"violations", std::move(list)}});
}

const Carryover* carried_from_previous(const Register& reg, CaseId id, std::uint32_t iteration) {
    if (iteration < 2 || iteration - 1 > reg.iterations.size()) return nullptr;
    const auto& previous = reg.iterations[iteration - 2];
    for (const auto& c : previous.carryover) {
        if (c.case_id == id) return &c;
    }
    return nullptr;
}

} // namespace

std::optional<Step> reached_step(const Register& reg, const RiskCase& c, std::uint32_t iteration) {
    std::array<bool, kSteps.size()> done{};
    if (const auto* carried = carried_from_previous(reg, c.case_id, iteration)) {
        for (Step s : kSteps) {
            if (s < carried->resume_step) done[static_cast<std::size_t>(s)] = true;
        }
    }
    for (const auto& record : c.history) {
        if (record.iteration == iteration) done[static_cast<std::size_t>(record.step())] = true;
    }
    std::optional<Step> reached;
    for (Step s : kSteps) {
        if (!done[static_cast<std::size_t>(s)]) break;
        reached = s;
    }
    return reached;
}

OpenedIteration open_iteration(Register& reg, std::uint32_t cadence_days, Timestamp now) {
    if (const auto* open = reg.open_iteration()) {
        throw Error("IterationAlreadyOpen",
                    "iteration " + std::to_string(open->index) + " is still open",
                    {{"iteration", open->index}});
    }
    if (cadence_days == 0) {
        throw Error("InvalidCadence", "cadence must be a positive number of days");
    }
    Iteration it;
    it.index = static_cast<std::uint32_t>(reg.iterations.size() + 1);
    it.opened_at = now;
    it.cadence_days = cadence_days;
    reg.iterations.push_back(it);

    OpenedIteration result{it, {}};
    if (cadence_days < kMinCadenceDays || cadence_days > kMaxCadenceDays) {
        result.warnings.push_back("CadenceWarning: cadence of " + std::to_string(cadence_days) +
                                  " days is outside the 14-28 day range");
    }
    return result;
}

ClosedIteration close_iteration(Register& reg, std::span<const CloseOverride> overrides,
                                Timestamp now) {
    Iteration& open = require_open(reg);

    std::map<CaseId, std::string> justified;
    for (const auto& o : overrides) {
        reg.get_case(o.case_id);
        justified[o.case_id] = trim(o.justification);
    }

    ClosedIteration result;
    std::vector<CaseId> missing;
    std::vector<Carryover> carryover;
    for (const auto& c : reg.cases) {
        CaseCompletion row;
        row.case_id = c.case_id;
        row.last_step = reached_step(reg, c, open.index);
        row.complete = row.last_step == Step::Monitoring;
        if (!row.complete) {
            auto it = justified.find(c.case_id);
            if (it == justified.end() || it->second.empty()) {
                missing.push_back(c.case_id);
            } else {
                row.justification = it->second;
                const Step resume = row.last_step ? *next_step(*row.last_step) : Step::Profile;
                carryover.push_back({c.case_id, it->second, resume});
            }
        }
        result.cases.push_back(std::move(row));
    }
    if (!missing.empty()) {
        std::string ids;
        for (CaseId id : missing) ids += (ids.empty() ? "" : ", ") + std::to_string(id);
        throw Error("IncompleteCases",
                    "cases not at Monitoring and without justified override: " + ids,
                    {{"case_ids", missing}});
    }
    open.closed_at = now;
    open.carryover = std::move(carryover);
    result.iteration = open;
    return result;
}

CaseId add_case(Register& reg, RiskProfile profile, std::string documentation,
                std::string actor, Timestamp now) {
    require_open(reg);
    if (profile.case_id == 0) {
        CaseId max_id = 0;
        for (const auto& c : reg.cases) max_id = std::max(max_id, c.case_id);
        profile.case_id = max_id + 1;
    }
    if (reg.find_case(profile.case_id)) {
        throw Error("DuplicateCaseId", "case " + std::to_string(profile.case_id) + " already exists",
                    {{"case_id", profile.case_id}});
    }
    const CaseId id = profile.case_id;
    RiskCase c;
    c.case_id = id;
    reg.cases.push_back(c);
    try {
        record_step(reg, id, StepRecord{0, std::move(documentation), std::move(actor), now,
                                        std::move(profile)});
    } catch (...) {
        reg.cases.pop_back();
        throw;
    }
    return id;
}

const RiskCase& record_step(Register& reg, CaseId case_id, StepRecord record) {
    const Iteration& open = require_open(reg);
    RiskCase& c = reg.get_case(case_id);
    const Step step = record.step();

    record.documentation = trim(record.documentation);
    record.actor = trim(record.actor);
    if (record.documentation.empty()) {
        throw Error("DocumentationRequired",
                    std::string(display_name(step)) + " step for case " +
                        std::to_string(case_id) + " needs documentation",
                    {{"case_id", case_id}, {"step", to_code(step)}});
    }

    const auto reached = reached_step(reg, c, open.index);
    for (Step earlier : kSteps) {
        if (earlier >= step) break;
        if (!reached || *reached < earlier) {
            throw Error("StepOrderViolation",
                        "case " + std::to_string(case_id) + " must record " +
                            std::string(display_name(earlier)) + " before " +
                            std::string(display_name(step)),
                        {{"case_id", case_id},
                         {"expected", to_code(earlier)},
                         {"got", to_code(step)}});
        }
    }

    std::visit([](auto& p) { normalise(p); }, record.payload);
    if (auto* p = std::get_if<RiskProfile>(&record.payload)) {
        if (p->case_id == 0) p->case_id = case_id;
        if (p->case_id != case_id) {
            invalid_payload(step, {{"Mismatch", "case_id"}});
        }
    }
    auto report = validate_payload(record.payload);
    if (record.actor.empty()) report.push_back({"EmptyField", "actor"});
    if (!report.empty()) invalid_payload(step, report);

    if (auto* a = std::get_if<RiskAssessment>(&record.payload)) {
        a->rating = rate(reg.matrix, a->likelihood, a->severity);
    }
    record.iteration = open.index;
    c.history.push_back(std::move(record));
    return c;
}

std::string CaseStatus::describe() const {
    if (!current) return "awaiting Profile";
    std::string out = "at " + std::string(display_name(*current));
    if (complete) return out + ", complete";
    return out + ", next " + std::string(display_name(*next));
}

CaseStatus case_status(const Register& reg, CaseId case_id) {
    const RiskCase& c = reg.get_case(case_id);
    CaseStatus status;
    status.case_id = case_id;
    const Iteration* it = reg.current_iteration();
    if (!it) {
        status.next = Step::Profile;
        return status;
    }
    status.iteration = it->index;
    status.current = reached_step(reg, c, it->index);
    status.next = status.current ? next_step(*status.current) : std::optional<Step>(Step::Profile);
    status.complete = status.current == Step::Monitoring;
    return status;
}

} // namespace riskflow
