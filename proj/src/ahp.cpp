#include "riskflow/ahp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "riskflow/error.hpp"

namespace riskflow {

namespace {

constexpr double kReciprocalTolerance = 1e-9;
constexpr double kConvergence = 1e-12;
constexpr int kMaxIterations = 10'000;

[[noreturn]] void invalid_matrix(const std::string& why) {
    throw Error("InvalidPairwiseMatrix", "invalid pairwise matrix: " + why);
}

void check_labels(const std::vector<std::string>& labels) {
    if (labels.empty() || labels.size() > PairwiseMatrix::kMaxSize) {
        invalid_matrix("size must be between 1 and " + std::to_string(PairwiseMatrix::kMaxSize));
    }
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (is_blank(l)) invalid_matrix("labels must be non-empty");
        if (!seen.insert(l).second) invalid_matrix("duplicate label '" + l + "'");
    }
}

} // namespace

bool Ratio::on_saaty_scale() const {
    auto in_scale = [](std::int32_t v) { return v >= 1 && v <= 9; };
    return (num == 1 && in_scale(den)) || (den == 1 && in_scale(num));
}

std::string to_string(Ratio r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

Ratio parse_ratio(std::string_view text) {
    auto read = [&](std::string_view part) {
        std::int32_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size() || v <= 0) {
            throw Error("InvalidJudgment", "judgment must be 'p/q' or an integer: '" +
                                               std::string(text) + "'");
        }
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return {read(text), 1};
    return {read(text.substr(0, slash)), read(text.substr(slash + 1))};
}

PairwiseMatrix::PairwiseMatrix(std::vector<std::string> labels) : labels_(std::move(labels)) {
    check_labels(labels_);
    const std::size_t n = labels_.size();
    entries_.assign(n * n, 1.0);
    ratios_.assign(n * n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i) ratios_[i * n + i] = Ratio{1, 1};
}

PairwiseMatrix PairwiseMatrix::from_entries(std::vector<std::string> labels,
                                            std::vector<double> row_major) {
    PairwiseMatrix m(std::move(labels));
    const std::size_t n = m.size();
    if (row_major.size() != n * n) invalid_matrix("expected " + std::to_string(n * n) + " entries");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double a = row_major[i * n + j];
            if (!std::isfinite(a) || a <= 0.0) invalid_matrix("entries must be positive");
            if (i == j && std::abs(a - 1.0) > kReciprocalTolerance) {
                invalid_matrix("diagonal entries must be 1");
            }
            if (std::abs(a * row_major[j * n + i] - 1.0) > kReciprocalTolerance) {
                invalid_matrix("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                               ") is not the reciprocal of its transpose");
            }
        }
    }
    m.entries_ = std::move(row_major);
    m.ratios_.assign(n * n, std::nullopt);
    m.numeric_ = true;
    return m;
}

std::optional<std::size_t> PairwiseMatrix::index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

void PairwiseMatrix::judge(std::size_t i, std::size_t j, Ratio value) {
    const std::size_t n = size();
    if (i >= n || j >= n) {
        throw Error("InvalidJudgment", "item index out of range");
    }
    if (i == j) {
        throw Error("InvalidJudgment", "the diagonal is fixed at 1");
    }
    if (!value.on_saaty_scale()) {
        throw Error("InvalidJudgment", "judgment " + to_string(value) +
                                           " is not on the 1/9..9 scale",
                    {{"value", to_string(value)}});
    }
    ratios_[i * n + j] = value;
    ratios_[j * n + i] = value.reciprocal();
    entries_[i * n + j] = value.value();
    entries_[j * n + i] = value.reciprocal().value();
}

std::optional<Ratio> PairwiseMatrix::judgment(std::size_t i, std::size_t j) const {
    return ratios_[i * size() + j];
}

bool PairwiseMatrix::fully_judged() const {
    if (numeric_) return true;
    return std::all_of(ratios_.begin(), ratios_.end(), [](const auto& r) { return r.has_value(); });
}

PairwiseMatrix PairwiseMatrix::permuted(std::span<const std::size_t> order) const {
    const std::size_t n = size();
    if (order.size() != n) throw Error("DimensionMismatch", "permutation has wrong length");
    PairwiseMatrix out = *this;
    for (std::size_t i = 0; i < n; ++i) {
        out.labels_[i] = labels_[order[i]];
        for (std::size_t j = 0; j < n; ++j) {
            out.entries_[i * n + j] = entries_[order[i] * n + order[j]];
            out.ratios_[i * n + j] = ratios_[order[i] * n + order[j]];
        }
    }
    return out;
}

double random_index(std::size_t n) {
    // Saaty's random consistency indices for n = 1..15.
    static constexpr double kTable[] = {0.0,  0.0,  0.58, 0.90, 1.12, 1.24, 1.32, 1.41,
                                        1.45, 1.49, 1.51, 1.48, 1.56, 1.57, 1.59};
    if (n == 0 || n > std::size(kTable)) {
        throw Error("InvalidPairwiseMatrix", "no random index for n = " + std::to_string(n));
    }
    return kTable[n - 1];
}

namespace {

void require_judged(const PairwiseMatrix& m) {
    if (m.size() == 0) invalid_matrix("matrix is empty");
    if (!m.fully_judged()) invalid_matrix("matrix has unjudged pairs");
}

std::vector<double> multiply(const PairwiseMatrix& m, const std::vector<double>& v) {
    const std::size_t n = m.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += m(i, j) * v[j];
        out[i] = sum;
    }
    return out;
}

} // namespace

PriorityVector priority_vector(const PairwiseMatrix& m) {
    require_judged(m);
    const std::size_t n = m.size();
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        std::vector<double> next = multiply(m, v);
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= total;
            change = std::max(change, std::abs(next[i] - v[i]));
        }
        v = std::move(next);
        if (change < kConvergence) break;
    }
    return {std::move(v)};
}

ConsistencyReport consistency(const PairwiseMatrix& m) {
    const PriorityVector w = priority_vector(m);
    const std::size_t n = m.size();
    const std::vector<double> mw = multiply(m, w.weights);
    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += mw[i] / w.weights[i];
    lambda /= static_cast<double>(n);

    ConsistencyReport report;
    report.lambda_max = lambda;
    report.ci = n >= 2 ? (lambda - static_cast<double>(n)) / static_cast<double>(n - 1) : 0.0;
    report.ri = random_index(n);
    report.cr = n >= 3 ? report.ci / report.ri : 0.0;
    report.acceptable = report.cr <= kAcceptableConsistencyRatio;
    return report;
}

std::vector<double> synthesize(const PriorityVector& criteria_weights,
                               std::span<const PriorityVector> local) {
    if (local.size() != criteria_weights.weights.size()) {
        throw Error("DimensionMismatch",
                    std::to_string(criteria_weights.weights.size()) + " criteria but " +
                        std::to_string(local.size()) + " local priority vectors");
    }
    if (local.empty()) return {};
    const std::size_t alternatives = local.front().weights.size();
    std::vector<double> scores(alternatives, 0.0);
    for (std::size_t k = 0; k < local.size(); ++k) {
        if (local[k].weights.size() != alternatives) {
            throw Error("DimensionMismatch", "local priority vectors differ in length");
        }
        for (std::size_t a = 0; a < alternatives; ++a) {
            scores[a] += criteria_weights.weights[k] * local[k].weights[a];
        }
    }
    return scores;
}

std::vector<TieGroup> find_tie_groups(std::span<const RiskCase> cases,
                                      std::span<const Rating> levels) {
    std::map<Rating, std::vector<CaseId>, std::greater<>> by_rating;
    for (const auto& c : cases) {
        const auto* a = c.assessment();
        if (!a) continue;
        if (std::find(levels.begin(), levels.end(), a->rating) == levels.end()) continue;
        by_rating[a->rating].push_back(c.case_id);
    }
    std::vector<TieGroup> groups;
    for (auto& [rating, ids] : by_rating) {
        if (ids.size() < 2) continue;
        std::sort(ids.begin(), ids.end());
        groups.push_back({rating, std::move(ids)});
    }
    return groups;
}

std::vector<TieGroup> find_tie_groups(std::span<const RiskCase> cases) {
    static constexpr Rating kDefault[] = {Rating::Critical};
    return find_tie_groups(cases, kDefault);
}

std::string_view to_code(SessionStatus s) {
    return s == SessionStatus::Draft ? "draft" : "complete";
}

PairwiseMatrix& AhpSession::matrix(std::string_view key) {
    if (key == kCriteriaKey) return criteria;
    if (const auto idx = criteria.index_of(key)) return alternatives.at(*idx);
    throw Error("UnknownMatrix", "session " + std::to_string(id) + " has no matrix '" +
                                     std::string(key) + "'",
                {{"matrix", key}});
}

const PairwiseMatrix& AhpSession::matrix(std::string_view key) const {
    return const_cast<AhpSession*>(this)->matrix(key);
}

std::vector<std::string> AhpSession::matrix_keys() const {
    std::vector<std::string> keys{std::string(kCriteriaKey)};
    keys.insert(keys.end(), criteria.labels().begin(), criteria.labels().end());
    return keys;
}

bool AhpSession::overridden(std::string_view key) const {
    return std::any_of(overrides.begin(), overrides.end(), [&](const ConsistencyOverride& o) {
        return o.matrix == key && !is_blank(o.justification);
    });
}

AhpSession make_session(std::uint32_t id, Rating level, std::vector<CaseId> tie_group,
                        std::vector<std::string> criteria) {
    if (tie_group.size() < 2 || tie_group.size() > PairwiseMatrix::kMaxSize) {
        throw Error("InvalidTieGroup", "a tie group needs 2 to 15 cases");
    }
    if (std::set<CaseId>(tie_group.begin(), tie_group.end()).size() != tie_group.size()) {
        throw Error("InvalidTieGroup", "tie group lists a case twice");
    }
    for (auto& c : criteria) c = trim(c);
    for (const auto& c : criteria) {
        if (c == AhpSession::kCriteriaKey) {
            throw Error("InvalidCriteria", "'criteria' is reserved and cannot name a criterion");
        }
    }
    AhpSession session;
    session.id = id;
    session.level = level;
    session.tie_group = std::move(tie_group);
    try {
        session.criteria = PairwiseMatrix(std::move(criteria));
    } catch (const Error& e) {
        throw Error("InvalidCriteria", e.what());
    }
    std::vector<std::string> alt_labels;
    for (CaseId id_ : session.tie_group) alt_labels.push_back(std::to_string(id_));
    for (std::size_t k = 0; k < session.criteria.size(); ++k) {
        session.alternatives.emplace_back(alt_labels);
    }
    return session;
}

std::size_t resolve_item(const PairwiseMatrix& m, std::string_view ref) {
    if (const auto idx = m.index_of(ref)) return *idx;
    std::size_t one_based = 0;
    auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), one_based);
    if (ec == std::errc{} && ptr == ref.data() + ref.size() && one_based >= 1 &&
        one_based <= m.size()) {
        return one_based - 1;
    }
    throw Error("UnknownItem", "no item '" + std::string(ref) + "' in matrix",
                {{"item", ref}});
}

AhpSession rank_session(const AhpSession& session) {
    std::vector<std::string> open;
    for (const auto& key : session.matrix_keys()) {
        if (!session.matrix(key).fully_judged()) open.push_back(key);
    }
    if (!open.empty()) {
        throw Error("SessionIncomplete",
                    "session " + std::to_string(session.id) + " has unjudged pairs",
                    {{"matrices", open}});
    }

    AhpResult result;
    for (const auto& key : session.matrix_keys()) {
        const auto report = consistency(session.matrix(key));
        if (!report.acceptable && !session.overridden(key)) {
            throw Error("InconsistentJudgments",
                        "matrix '" + key + "' has CR " + std::to_string(report.cr) +
                            " above 0.10; revise judgments or override with a justification",
                        {{"matrix", key}, {"cr", report.cr}});
        }
        result.diagnostics.push_back({key, report});
    }

    result.criteria_weights = priority_vector(session.criteria);
    for (const auto& alt : session.alternatives) result.local_weights.push_back(priority_vector(alt));
    const auto scores = synthesize(result.criteria_weights, result.local_weights);
    for (std::size_t i = 0; i < session.tie_group.size(); ++i) {
        result.ranking.push_back({session.tie_group[i], scores[i]});
    }
    std::sort(result.ranking.begin(), result.ranking.end(),
              [](const RankedCase& a, const RankedCase& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.case_id < b.case_id;
              });

    AhpSession done = session;
    done.status = SessionStatus::Complete;
    done.result = std::move(result);
    return done;
}

} // namespace riskflow
