#include "riskflow/register.hpp"

#include <algorithm>
#include <set>

#include "riskflow/error.hpp"

namespace riskflow {

RiskCase* Register::find_case(CaseId id) {
    auto it = std::find_if(cases.begin(), cases.end(),
                           [id](const RiskCase& c) { return c.case_id == id; });
    return it == cases.end() ? nullptr : &*it;
}

const RiskCase* Register::find_case(CaseId id) const {
    return const_cast<Register*>(this)->find_case(id);
}

RiskCase& Register::get_case(CaseId id) {
    if (auto* c = find_case(id)) return *c;
    throw Error("UnknownCase", "no case with id " + std::to_string(id), {{"case_id", id}});
}

const RiskCase& Register::get_case(CaseId id) const {
    return const_cast<Register*>(this)->get_case(id);
}

Iteration* Register::open_iteration() {
    if (!iterations.empty() && iterations.back().is_open()) return &iterations.back();
    return nullptr;
}

const Iteration* Register::open_iteration() const {
    return const_cast<Register*>(this)->open_iteration();
}

const Iteration* Register::current_iteration() const {
    return iterations.empty() ? nullptr : &iterations.back();
}

AhpSession& Register::get_session(std::uint32_t id) {
    auto it = std::find_if(ahp_sessions.begin(), ahp_sessions.end(),
                           [id](const AhpSession& s) { return s.id == id; });
    if (it == ahp_sessions.end()) {
        throw Error("UnknownSession", "no AHP session with id " + std::to_string(id),
                    {{"session", id}});
    }
    return *it;
}

const AhpSession& Register::get_session(std::uint32_t id) const {
    return const_cast<Register*>(this)->get_session(id);
}

Register commit(const Register& base, std::uint64_t expected_revision, const Mutation& mutation,
                Timestamp now) {
    if (expected_revision != base.revision) {
        throw Error("StaleRevision",
                    "register is at revision " + std::to_string(base.revision) +
                        ", request was based on " + std::to_string(expected_revision),
                    {{"expected", base.revision}, {"got", expected_revision}});
    }
    Register next = base;
    std::string summary = mutation.apply(next);
    next.revision = base.revision + 1;
    next.audit_log.push_back(
        make_entry(next.audit_log, now, mutation.actor, mutation.operation, std::move(summary)));
    return next;
}

namespace {

[[noreturn]] void violated(const std::string& what) {
    throw Error("InvariantViolation", "register invariant violated: " + what);
}

} // namespace

void check_invariants(const Register& reg) {
    if (!validate_matrix(reg.matrix).empty()) violated("rating matrix is invalid");

    std::set<CaseId> ids;
    for (const auto& c : reg.cases) {
        if (c.case_id == 0 || !ids.insert(c.case_id).second) {
            violated("case id " + std::to_string(c.case_id) + " is zero or duplicated");
        }
        if (c.history.empty() || c.history.front().step() != Step::Profile) {
            violated("case " + std::to_string(c.case_id) + " does not start with a profile");
        }
        for (const auto& record : c.history) {
            if (is_blank(record.documentation)) {
                violated("case " + std::to_string(c.case_id) + " has an undocumented step");
            }
            if (record.iteration == 0 || record.iteration > reg.iterations.size()) {
                violated("case " + std::to_string(c.case_id) + " references unknown iteration");
            }
            if (const auto* p = std::get_if<RiskProfile>(&record.payload);
                p && p->case_id != c.case_id) {
                violated("case " + std::to_string(c.case_id) + " holds a foreign profile");
            }
            if (const auto* a = std::get_if<RiskAssessment>(&record.payload)) {
                const auto expected = reg.matrix.cell(a->likelihood, a->severity);
                if (!expected || *expected != a->rating) {
                    violated("case " + std::to_string(c.case_id) +
                             " has a rating that disagrees with the matrix");
                }
            }
        }
    }

    for (std::size_t i = 0; i < reg.iterations.size(); ++i) {
        const auto& it = reg.iterations[i];
        if (it.index != i + 1) violated("iteration indices must be 1..n");
        if (it.is_open() && i + 1 != reg.iterations.size()) {
            violated("only the last iteration may be open");
        }
        if (it.cadence_days == 0) violated("iteration cadence must be positive");
    }

    std::set<std::uint32_t> session_ids;
    for (const auto& s : reg.ahp_sessions) {
        if (!session_ids.insert(s.id).second) violated("duplicate AHP session id");
        if (s.alternatives.size() != s.criteria.size()) {
            violated("AHP session " + std::to_string(s.id) + " lacks per-criterion matrices");
        }
        if ((s.status == SessionStatus::Complete) != s.result.has_value()) {
            violated("AHP session " + std::to_string(s.id) + " status disagrees with result");
        }
    }

    if (reg.revision < reg.audit_log.size()) {
        violated("revision is behind the audit log");
    }
}

std::vector<RatingChange> recompute_ratings(Register& reg, const RatingMatrix& matrix) {
    require_valid(matrix);
    Register working = reg;
    working.matrix = matrix.with_identity(matrix.name(), reg.matrix.version() + 1);

    std::vector<RatingChange> changes;
    for (auto& c : working.cases) {
        const RiskAssessment* current = c.assessment();
        const std::optional<Rating> before =
            current ? std::optional<Rating>(current->rating) : std::nullopt;
        for (auto& record : c.history) {
            if (auto* a = std::get_if<RiskAssessment>(&record.payload)) {
                a->rating = rate(working.matrix, a->likelihood, a->severity);
            }
        }
        if (before) {
            const Rating after = c.assessment()->rating;
            if (after != *before) changes.push_back({c.case_id, *before, after});
        }
    }
    reg = std::move(working);
    return changes;
}

RegisterHandle::RegisterHandle(Register initial, Clock clock, CommitHook on_commit)
    : current_(std::make_shared<const Register>(std::move(initial))),
      clock_(std::move(clock)),
      on_commit_(std::move(on_commit)) {}

std::shared_ptr<const Register> RegisterHandle::snapshot() const {
    std::lock_guard lock(mutex_);
    return current_;
}

std::shared_ptr<const Register> RegisterHandle::commit(std::uint64_t expected_revision,
                                                       const Mutation& mutation) {
    std::lock_guard lock(mutex_);
    auto next = std::make_shared<const Register>(
        riskflow::commit(*current_, expected_revision, mutation, clock_()));
    if (on_commit_) on_commit_(*next);
    current_ = next;
    return next;
}

} // namespace riskflow
