#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "riskflow/ahp.hpp"
#include "riskflow/audit.hpp"
#include "riskflow/case.hpp"
#include "riskflow/rating.hpp"

namespace riskflow {

inline constexpr std::uint32_t kSchemaVersion = 1;

/// Whole-workbench state. Values are snapshots: every change goes through
/// commit(), which produces a new Register with revision + 1 and one more
/// audit entry.
struct Register {
    std::uint32_t schema_version = kSchemaVersion;
    RatingMatrix matrix = default_matrix();
    std::vector<RiskCase> cases;
    std::vector<Iteration> iterations;
    std::vector<AhpSession> ahp_sessions;
    std::vector<AuditEntry> audit_log;
    std::uint64_t revision = 0;

    RiskCase* find_case(CaseId id);
    const RiskCase* find_case(CaseId id) const;
    /// Throws "UnknownCase".
    RiskCase& get_case(CaseId id);
    const RiskCase& get_case(CaseId id) const;

    Iteration* open_iteration();
    const Iteration* open_iteration() const;
    /// Open iteration, else the most recent one, else null.
    const Iteration* current_iteration() const;

    AhpSession& get_session(std::uint32_t id);
    const AhpSession& get_session(std::uint32_t id) const;

    friend bool operator==(const Register&, const Register&) = default;
};

/// A change applied inside commit(). `apply` edits a private copy of the
/// register and returns the audit summary; throwing aborts the commit.
struct Mutation {
    std::string actor;
    std::string operation;
    std::function<std::string(Register&)> apply;
};

/// All-or-nothing: throws "StaleRevision" when `expected_revision` is not the
/// base revision, propagates errors from `apply`, and otherwise returns the
/// mutated copy with revision + 1 and a chained audit entry.
Register commit(const Register& base, std::uint64_t expected_revision, const Mutation& mutation,
                Timestamp now);

/// Structural checks applied when a register is loaded: unique case ids,
/// iteration numbering, ratings consistent with the matrix, valid matrix.
/// Throws "InvariantViolation".
void check_invariants(const Register& reg);

struct RatingChange {
    CaseId case_id = 0;
    Rating before = Rating::Low;
    Rating after = Rating::Low;

    friend bool operator==(const RatingChange&, const RatingChange&) = default;
};

/// Installs `matrix` (its version becomes the previous version + 1) and
/// re-derives every assessment rating. Rejects invalid matrices and matrices
/// missing a level some assessment uses; `reg` is untouched on error.
std::vector<RatingChange> recompute_ratings(Register& reg, const RatingMatrix& matrix);

/// Single-writer holder of the current snapshot. Readers take shared
/// snapshots; writers are serialised and checked against the revision they
/// last saw.
class RegisterHandle {
public:
    using Clock = std::function<Timestamp()>;
    using CommitHook = std::function<void(const Register&)>;

    explicit RegisterHandle(Register initial, Clock clock = now_utc, CommitHook on_commit = {});

    std::shared_ptr<const Register> snapshot() const;

    /// Commits against the current snapshot; the hook (e.g. persistence) runs
    /// before the new snapshot is published, so a failing hook aborts.
    std::shared_ptr<const Register> commit(std::uint64_t expected_revision,
                                           const Mutation& mutation);

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const Register> current_;
    Clock clock_;
    CommitHook on_commit_;
};

} // namespace riskflow
