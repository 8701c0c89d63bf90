#include "riskflow/workbench.hpp"

#include <algorithm>

#include "riskflow/error.hpp"
#include "riskflow/store.hpp"

namespace riskflow {

namespace {

AhpSession& draft_session(Register& reg, std::uint32_t id) {
    AhpSession& s = reg.get_session(id);
    if (s.status != SessionStatus::Draft) {
        throw Error("SessionClosed", "AHP session " + std::to_string(id) + " is already complete",
                    {{"session", id}});
    }
    return s;
}

} // namespace

Workbench::Workbench(Register initial, RegisterHandle::Clock clock,
                     RegisterHandle::CommitHook on_commit)
    : handle_(std::move(initial), clock, std::move(on_commit)), clock_(std::move(clock)) {}

Committed<OpenedIteration> Workbench::open_iteration(std::uint64_t revision,
                                                     const std::string& actor,
                                                     std::uint32_t cadence_days) {
    OpenedIteration out;
    const Timestamp now = clock_();
    auto reg = handle_.commit(revision, {actor, "iteration.open", [&](Register& r) {
                                             out = riskflow::open_iteration(r, cadence_days, now);
                                             std::string summary =
                                                 "opened iteration " +
                                                 std::to_string(out.iteration.index) + " (cadence " +
                                                 std::to_string(cadence_days) + " days)";
                                             for (const auto& w : out.warnings) summary += "; " + w;
                                             return summary;
                                         }});
    return {std::move(reg), std::move(out)};
}

Committed<ClosedIteration> Workbench::close_iteration(std::uint64_t revision,
                                                      const std::string& actor,
                                                      std::vector<CloseOverride> overrides) {
    ClosedIteration out;
    const Timestamp now = clock_();
    auto reg = handle_.commit(revision, {actor, "iteration.close", [&](Register& r) {
                                             out = riskflow::close_iteration(r, overrides, now);
                                             std::string summary =
                                                 "closed iteration " +
                                                 std::to_string(out.iteration.index);
                                             for (const auto& c : out.iteration.carryover) {
                                                 summary += "; carryover case " +
                                                            std::to_string(c.case_id) + ": " +
                                                            c.justification;
                                             }
                                             return summary;
                                         }});
    return {std::move(reg), std::move(out)};
}

Committed<CaseId> Workbench::add_case(std::uint64_t revision, const std::string& actor,
                                      RiskProfile profile, const std::string& documentation) {
    CaseId id = 0;
    const Timestamp now = clock_();
    auto reg = handle_.commit(revision, {actor, "case.add", [&](Register& r) {
                                             id = riskflow::add_case(r, profile, documentation,
                                                                     actor, now);
                                             return "case " + std::to_string(id) +
                                                    ": profile recorded";
                                         }});
    return {std::move(reg), id};
}

Committed<RiskCase> Workbench::record_step(std::uint64_t revision, const std::string& actor,
                                           CaseId case_id, StepPayload payload,
                                           const std::string& documentation) {
    RiskCase out;
    const Timestamp now = clock_();
    const Step step = static_cast<Step>(payload.index());
    auto reg = handle_.commit(
        revision, {actor, "step." + std::string(to_code(step)), [&](Register& r) {
                       const RiskCase& c = riskflow::record_step(
                           r, case_id, StepRecord{0, documentation, actor, now, std::move(payload)});
                       out = c;
                       std::string summary = "case " + std::to_string(case_id) + ": " +
                                             std::string(to_code(step)) + " recorded";
                       if (step == Step::Assessment) {
                           summary += ", rating " + std::string(to_code(c.assessment()->rating));
                       }
                       return summary;
                   }});
    return {std::move(reg), std::move(out)};
}

Committed<std::vector<RatingChange>> Workbench::set_matrix(std::uint64_t revision,
                                                           const std::string& actor,
                                                           const RatingMatrix& matrix) {
    std::vector<RatingChange> changes;
    auto reg = handle_.commit(revision, {actor, "matrix.set", [&](Register& r) {
                                             changes = recompute_ratings(r, matrix);
                                             std::string summary =
                                                 "installed matrix '" + r.matrix.name() +
                                                 "' version " +
                                                 std::to_string(r.matrix.version()) + "; " +
                                                 std::to_string(changes.size()) +
                                                 " rating change(s)";
                                             for (const auto& c : changes) {
                                                 summary += "; case " + std::to_string(c.case_id) +
                                                            " " + std::string(to_code(c.before)) +
                                                            "->" + std::string(to_code(c.after));
                                             }
                                             return summary;
                                         }});
    return {std::move(reg), std::move(changes)};
}

Committed<AhpSession> Workbench::create_session(std::uint64_t revision, const std::string& actor,
                                                std::vector<CaseId> tie_group,
                                                std::vector<std::string> criteria) {
    AhpSession out;
    auto reg = handle_.commit(revision, {actor, "ahp.new", [&](Register& r) {
                                             std::optional<Rating> level;
                                             for (CaseId id : tie_group) {
                                                 const auto* a = r.get_case(id).assessment();
                                                 if (!a) {
                                                     throw Error("InvalidTieGroup",
                                                                 "case " + std::to_string(id) +
                                                                     " has no assessment");
                                                 }
                                                 if (level && *level != a->rating) {
                                                     throw Error("InvalidTieGroup",
                                                                 "tie group cases do not share "
                                                                 "one rating");
                                                 }
                                                 level = a->rating;
                                             }
                                             std::uint32_t next_id = 1;
                                             for (const auto& s : r.ahp_sessions) {
                                                 next_id = std::max(next_id, s.id + 1);
                                             }
                                             out = make_session(next_id,
                                                                level.value_or(Rating::Critical),
                                                                tie_group, criteria);
                                             r.ahp_sessions.push_back(out);
                                             return "AHP session " + std::to_string(out.id) +
                                                    " opened: " + to_json(out).dump();
                                         }});
    return {std::move(reg), std::move(out)};
}

Committed<AhpSession> Workbench::judge(std::uint64_t revision, const std::string& actor,
                                       std::uint32_t session, const std::string& matrix,
                                       const std::string& row, const std::string& column,
                                       Ratio value) {
    AhpSession out;
    auto reg = handle_.commit(revision, {actor, "ahp.judge", [&](Register& r) {
                                             AhpSession& s = draft_session(r, session);
                                             PairwiseMatrix& m = s.matrix(matrix);
                                             const std::size_t i = resolve_item(m, row);
                                             const std::size_t j = resolve_item(m, column);
                                             m.judge(i, j, value);
                                             out = s;
                                             return "AHP session " + std::to_string(session) +
                                                    " matrix '" + matrix + "': " +
                                                    m.labels()[i] + " vs " + m.labels()[j] +
                                                    " = " + to_string(value);
                                         }});
    return {std::move(reg), std::move(out)};
}

Committed<AhpSession> Workbench::override_consistency(std::uint64_t revision,
                                                      const std::string& actor,
                                                      std::uint32_t session,
                                                      const std::string& matrix,
                                                      const std::string& justification) {
    AhpSession out;
    auto reg = handle_.commit(revision, {actor, "ahp.override", [&](Register& r) {
                                             AhpSession& s = draft_session(r, session);
                                             s.matrix(matrix);
                                             const std::string why = trim(justification);
                                             if (why.empty()) {
                                                 throw Error("JustificationRequired",
                                                             "a consistency override needs a "
                                                             "justification");
                                             }
                                             s.overrides.push_back({matrix, why});
                                             out = s;
                                             return "AHP session " + std::to_string(session) +
                                                    " matrix '" + matrix +
                                                    "' consistency override: " + why;
                                         }});
    return {std::move(reg), std::move(out)};
}

Committed<AhpSession> Workbench::complete_session(std::uint64_t revision,
                                                  const std::string& actor,
                                                  std::uint32_t session) {
    AhpSession out;
    auto reg = handle_.commit(revision, {actor, "ahp.complete", [&](Register& r) {
                                             AhpSession& s = draft_session(r, session);
                                             s = rank_session(s);
                                             out = s;
                                             return "AHP session " + std::to_string(session) +
                                                    " ranked: " + to_json(s).dump();
                                         }});
    return {std::move(reg), std::move(out)};
}

Rating what_if(const Register& reg, CaseId case_id, Likelihood likelihood, Severity severity) {
    reg.get_case(case_id);
    return rate(reg.matrix, likelihood, severity);
}

} // namespace riskflow
