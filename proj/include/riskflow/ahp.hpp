#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskflow/case.hpp"
#include "riskflow/domain.hpp"

namespace riskflow {

/// A pairwise judgment p/q. Entered judgments must lie on the Saaty scale
/// {1/9, ..., 1/2, 1, 2, ..., 9}; reciprocals are derived exactly.
struct Ratio {
    std::int32_t num = 1;
    std::int32_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    Ratio reciprocal() const { return {den, num}; }
    bool on_saaty_scale() const;

    friend bool operator==(const Ratio&, const Ratio&) = default;
};

std::string to_string(Ratio r);  // always "p/q"
/// Accepts "p/q" or an integer; throws Error "InvalidJudgment" otherwise.
Ratio parse_ratio(std::string_view text);

/// Square reciprocal matrix over labelled items (1 <= n <= 15; criteria
/// matrices may be 1x1 when a single criterion is used).
///
/// Two ways in: judge() enters Saaty-scale judgments one pair at a time
/// (the session path, exact and serialisable), and from_entries() accepts
/// an arbitrary positive reciprocal matrix for numeric work.
class PairwiseMatrix {
public:
    static constexpr std::size_t kMaxSize = 15;

    PairwiseMatrix() = default;
    /// Unjudged matrix: diagonal 1, every off-diagonal pair open.
    explicit PairwiseMatrix(std::vector<std::string> labels);

    /// Throws "InvalidPairwiseMatrix" unless entries are positive,
    /// diagonal is 1 and entry(i,j) * entry(j,i) == 1 within 1e-9.
    static PairwiseMatrix from_entries(std::vector<std::string> labels,
                                       std::vector<double> row_major);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<std::size_t> index_of(std::string_view label) const;

    /// Sets (i,j) and its reciprocal (j,i) together.
    void judge(std::size_t i, std::size_t j, Ratio value);
    std::optional<Ratio> judgment(std::size_t i, std::size_t j) const;

    bool fully_judged() const;
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }

    PairwiseMatrix permuted(std::span<const std::size_t> order) const;

    friend bool operator==(const PairwiseMatrix&, const PairwiseMatrix&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<double> entries_;
    std::vector<std::optional<Ratio>> ratios_;  // n*n, both triangles
    bool numeric_ = false;                      // built by from_entries
};

struct PriorityVector {
    std::vector<double> weights;

    friend bool operator==(const PriorityVector&, const PriorityVector&) = default;
};

/// Random consistency index for an n x n matrix (0 for n <= 2).
double random_index(std::size_t n);

inline constexpr double kAcceptableConsistencyRatio = 0.10;

struct ConsistencyReport {
    double lambda_max = 0.0;
    double ci = 0.0;
    double ri = 0.0;
    double cr = 0.0;
    bool acceptable = true;

    friend bool operator==(const ConsistencyReport&, const ConsistencyReport&) = default;
};

/// Principal right eigenvector by power iteration from the uniform vector,
/// normalised to sum 1; stops when the max-abs change drops below 1e-12 or
/// after 10,000 iterations.
PriorityVector priority_vector(const PairwiseMatrix& m);

ConsistencyReport consistency(const PairwiseMatrix& m);

/// score(alt) = sum_k criteria_weight(k) * local_k(alt).
std::vector<double> synthesize(const PriorityVector& criteria_weights,
                               std::span<const PriorityVector> local);

// ---------------------------------------------------------------------------
// Tie-breaking sessions

struct TieGroup {
    Rating level = Rating::Critical;
    std::vector<CaseId> case_ids;

    friend bool operator==(const TieGroup&, const TieGroup&) = default;
};

/// Groups of two or more assessed cases sharing a current rating in
/// `levels`. Groups come out highest rating first, ids ascending.
std::vector<TieGroup> find_tie_groups(std::span<const RiskCase> cases,
                                      std::span<const Rating> levels);
std::vector<TieGroup> find_tie_groups(std::span<const RiskCase> cases);

enum class SessionStatus { Draft, Complete };
std::string_view to_code(SessionStatus s);

struct ConsistencyOverride {
    std::string matrix;  // "criteria" or a criterion label
    std::string justification;

    friend bool operator==(const ConsistencyOverride&, const ConsistencyOverride&) = default;
};

struct RankedCase {
    CaseId case_id = 0;
    double score = 0.0;

    friend bool operator==(const RankedCase&, const RankedCase&) = default;
};

struct MatrixDiagnostics {
    std::string matrix;
    ConsistencyReport report;

    friend bool operator==(const MatrixDiagnostics&, const MatrixDiagnostics&) = default;
};

struct AhpResult {
    std::vector<RankedCase> ranking;
    PriorityVector criteria_weights;
    std::vector<PriorityVector> local_weights;  // one per criterion
    std::vector<MatrixDiagnostics> diagnostics; // criteria first, then per criterion

    friend bool operator==(const AhpResult&, const AhpResult&) = default;
};

struct AhpSession {
    static constexpr std::string_view kCriteriaKey = "criteria";

    std::uint32_t id = 0;
    Rating level = Rating::Critical;
    std::vector<CaseId> tie_group;
    PairwiseMatrix criteria;
    std::vector<PairwiseMatrix> alternatives;  // labels = tie group ids as text
    std::vector<ConsistencyOverride> overrides;
    SessionStatus status = SessionStatus::Draft;
    std::optional<AhpResult> result;

    /// "criteria" or a criterion label; throws "UnknownMatrix".
    PairwiseMatrix& matrix(std::string_view key);
    const PairwiseMatrix& matrix(std::string_view key) const;
    std::vector<std::string> matrix_keys() const;
    bool overridden(std::string_view key) const;

    friend bool operator==(const AhpSession&, const AhpSession&) = default;
};

/// Draft session over `tie_group` with the given criteria labels.
/// Throws "InvalidTieGroup" / "InvalidCriteria".
AhpSession make_session(std::uint32_t id, Rating level, std::vector<CaseId> tie_group,
                        std::vector<std::string> criteria);

/// Resolve an item reference: exact label first, then 1-based index.
std::size_t resolve_item(const PairwiseMatrix& m, std::string_view ref);

/// Ranks the tie group by global score (descending, ids ascending on exact
/// ties) and returns the session marked Complete with its result.
/// Throws "SessionIncomplete" or "InconsistentJudgments".
AhpSession rank_session(const AhpSession& session);

} // namespace riskflow
