#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "riskflow/lifecycle.hpp"
#include "riskflow/register.hpp"

namespace riskflow {

template <typename T>
struct Committed {
    std::shared_ptr<const Register> reg;
    T value;
};

/// The mutating operations of the workbench, each one module operation plus
/// one commit (revision + 1, one audit entry). The CLI and the HTTP service
/// both go through here, so identical operation sequences yield identical
/// registers.
class Workbench {
public:
    explicit Workbench(Register initial, RegisterHandle::Clock clock = now_utc,
                       RegisterHandle::CommitHook on_commit = {});

    std::shared_ptr<const Register> snapshot() const { return handle_.snapshot(); }

    Committed<OpenedIteration> open_iteration(std::uint64_t revision, const std::string& actor,
                                              std::uint32_t cadence_days);
    Committed<ClosedIteration> close_iteration(std::uint64_t revision, const std::string& actor,
                                               std::vector<CloseOverride> overrides);

    Committed<CaseId> add_case(std::uint64_t revision, const std::string& actor,
                               RiskProfile profile, const std::string& documentation);
    Committed<RiskCase> record_step(std::uint64_t revision, const std::string& actor,
                                    CaseId case_id, StepPayload payload,
                                    const std::string& documentation);

    Committed<std::vector<RatingChange>> set_matrix(std::uint64_t revision,
                                                    const std::string& actor,
                                                    const RatingMatrix& matrix);

    /// The tie group must be assessed cases sharing one rating.
    Committed<AhpSession> create_session(std::uint64_t revision, const std::string& actor,
                                         std::vector<CaseId> tie_group,
                                         std::vector<std::string> criteria);
    Committed<AhpSession> judge(std::uint64_t revision, const std::string& actor,
                                std::uint32_t session, const std::string& matrix,
                                const std::string& row, const std::string& column, Ratio value);
    Committed<AhpSession> override_consistency(std::uint64_t revision, const std::string& actor,
                                               std::uint32_t session, const std::string& matrix,
                                               const std::string& justification);
    Committed<AhpSession> complete_session(std::uint64_t revision, const std::string& actor,
                                           std::uint32_t session);

private:
    RegisterHandle handle_;
    RegisterHandle::Clock clock_;
};

/// Rating a case would get at (likelihood, severity) under the active matrix.
Rating what_if(const Register& reg, CaseId case_id, Likelihood likelihood, Severity severity);

} // namespace riskflow
