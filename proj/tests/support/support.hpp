#pragma once

// Shared generators and helpers for the test binaries. Generators are
// hand-rolled over std::mt19937_64 so every property run is reproducible from
// its seed.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <memory>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "riskflow/lifecycle.hpp"
#include "riskflow/register.hpp"
#include "riskflow/store.hpp"
#include "riskflow/workbench.hpp"

namespace riskflow::testkit {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[uniform(rng, 0, items.size() - 1)];
}

/// Deterministic clock: one second per call from 2024-01-01T00:00:00Z.
class StepClock {
public:
    explicit StepClock(Timestamp start = parse_timestamp("2024-01-01T00:00:00Z")) : next_(start) {}
    Timestamp operator()() {
        const Timestamp t = next_;
        next_ += std::chrono::seconds(1);
        return t;
    }

private:
    Timestamp next_;
};

inline RegisterHandle::Clock step_clock() {
    auto clock = std::make_shared<StepClock>();
    return [clock] { return (*clock)(); };
}

// ---------------------------------------------------------------------------
// Text

/// Free text that exercises escaping in every output format: commas, quotes,
/// pipes, newlines, non-ASCII.
inline std::string random_text(Rng& rng) {
    static const std::vector<std::string> parts{
        "drone", "GNSS spoofing", "battery", "a, b", "\"quoted\"", "pipe|bar", "line\nbreak",
        "Überwachung", "无人机", "tab\there", " padded ", "100%", "<tag>", "back\\slash"};
    std::string out;
    const std::size_t n = uniform(rng, 1, 4);
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += pick(rng, parts);
    }
    return trim(out).empty() ? "x" : trim(out);
}

// ---------------------------------------------------------------------------
// Rating matrices

/// Ascending random non-empty subset of a standard scale.
template <typename Level, std::size_t N>
std::vector<Level> random_axis(Rng& rng, const std::array<Level, N>& scale) {
    std::vector<Level> out;
    while (out.empty()) {
        for (auto l : scale) {
            if (coin(rng, 0.7)) out.push_back(l);
        }
    }
    return out;
}

/// Monotone grid: each cell is a random rating raised to the max of its
/// lower neighbours.
inline RatingMatrix::Grid random_monotone_grid(Rng& rng, std::size_t rows, std::size_t cols) {
    RatingMatrix::Grid g(rows, std::vector<std::optional<Rating>>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            int v = static_cast<int>(uniform(rng, 0, 3));
            if (coin(rng, 0.6)) v = 0;  // bias low so grids are not all Critical
            if (i) v = std::max(v, static_cast<int>(*g[i - 1][j]));
            if (j) v = std::max(v, static_cast<int>(*g[i][j - 1]));
            g[i][j] = static_cast<Rating>(v);
        }
    }
    return g;
}

inline RatingMatrix random_valid_matrix(Rng& rng) {
    auto l = random_axis(rng, kLikelihoods);
    auto s = random_axis(rng, kSeverities);
    auto g = random_monotone_grid(rng, l.size(), s.size());
    return RatingMatrix("random", 1, std::move(l), std::move(s), std::move(g));
}

/// Full-axis valid matrix (every level present) so any assessment can be rated.
inline RatingMatrix random_full_matrix(Rng& rng) {
    std::vector<Likelihood> l(kLikelihoods.begin(), kLikelihoods.end());
    std::vector<Severity> s(kSeverities.begin(), kSeverities.end());
    auto g = random_monotone_grid(rng, l.size(), s.size());
    return RatingMatrix("random", 1, std::move(l), std::move(s), std::move(g));
}

/// Takes a valid matrix and breaks monotonicity on one adjacent pair. Needs at
/// least two cells.
inline RatingMatrix corrupt_monotonicity(Rng& rng, const RatingMatrix& m) {
    auto g = m.cells();
    const std::size_t rows = g.size(), cols = g.front().size();
    for (;;) {
        const std::size_t i = uniform(rng, 0, rows - 1), j = uniform(rng, 0, cols - 1);
        const bool down = coin(rng);
        const std::size_t i2 = down ? i + 1 : i, j2 = down ? j : j + 1;
        if (i2 >= rows || j2 >= cols) continue;
        const int upper = static_cast<int>(uniform(rng, 0, 2));
        const int lower = static_cast<int>(uniform(rng, static_cast<std::size_t>(upper) + 1, 3));
        g[i][j] = static_cast<Rating>(lower);
        g[i2][j2] = static_cast<Rating>(upper);
        return RatingMatrix(m.name(), m.version(), m.likelihood_axis(), m.severity_axis(), g);
    }
}

// ---------------------------------------------------------------------------
// Pairwise matrices

inline std::vector<std::string> item_labels(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
    return labels;
}

struct ConsistentCase {
    std::vector<double> weights;  // normalised to sum 1
    PairwiseMatrix matrix;
};

inline ConsistentCase random_consistent(Rng& rng, std::size_t n) {
    std::vector<double> w(n);
    for (auto& x : w) x = std::exp(uniform_real(rng, -2.5, 2.5));
    std::vector<double> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = i == j ? 1.0 : w[i] / w[j];
    }
    // Enforce exact reciprocity in the stored doubles.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) entries[j * n + i] = 1.0 / entries[i * n + j];
    }
    double total = 0;
    for (double x : w) total += x;
    for (auto& x : w) x /= total;
    return {w, PairwiseMatrix::from_entries(item_labels(n), entries)};
}

inline Ratio random_saaty(Rng& rng) {
    const auto v = static_cast<std::int32_t>(uniform(rng, 1, 9));
    return coin(rng) ? Ratio{v, 1} : Ratio{1, v};
}

/// Reciprocal matrix with independent Saaty judgments above the diagonal
/// (generally inconsistent).
inline PairwiseMatrix random_reciprocal(Rng& rng, std::size_t n) {
    PairwiseMatrix m(item_labels(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) m.judge(i, j, random_saaty(rng));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Registers

inline RiskProfile random_profile(Rng& rng) {
    RiskProfile p;
    p.locus = parse_locus(pick(rng, std::vector<std::string>{"A", "G", "A/G"}));
    p.risk_type = parse_risk_type(pick(rng, std::vector<std::string>{"E", "I", "E/I"}));
    p.asset = random_text(rng);
    p.description = random_text(rng);
    p.consequence = random_text(rng);
    return p;
}

inline RiskAssessment random_assessment(Rng& rng) {
    RiskAssessment a;
    a.vulnerability = random_text(rng);
    a.threat = random_text(rng);
    a.threat_agent = random_text(rng);
    a.impact = parse_impact(pick(rng, std::vector<std::string>{"C", "I", "A", "a", "CIA", "CIAa", "Ia"}));
    a.likelihood = kLikelihoods[uniform(rng, 0, kLikelihoods.size() - 1)];
    a.severity = kSeverities[uniform(rng, 0, kSeverities.size() - 1)];
    return a;
}

inline RiskEvaluation random_evaluation(Rng& rng) {
    return {kDecisions[uniform(rng, 0, kDecisions.size() - 1)], random_text(rng)};
}

inline TreatmentPlan random_treatment(Rng& rng) {
    using namespace std::chrono;
    TreatmentPlan t;
    const std::size_t n = uniform(rng, 1, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const sys_days due = sys_days(2024y / January / 1) + days(uniform(rng, 0, 400));
        t.mitigation_actions.push_back({random_text(rng), random_text(rng), year_month_day(due)});
    }
    const std::size_t c = uniform(rng, 0, 2);
    for (std::size_t i = 0; i < c; ++i) t.controls.push_back(random_text(rng));
    t.validation_note = random_text(rng);
    return t;
}

inline MonitoringRecord random_monitoring(Rng& rng) {
    static const std::vector<Effectiveness> values{Effectiveness::Effective,
                                                   Effectiveness::Ineffective,
                                                   Effectiveness::Inconclusive};
    return {random_text(rng), pick(rng, values), random_text(rng)};
}

inline StepPayload random_payload(Rng& rng, Step step) {
    switch (step) {
    case Step::Profile: return random_profile(rng);
    case Step::Assessment: return random_assessment(rng);
    case Step::Evaluation: return random_evaluation(rng);
    case Step::Treatment: return random_treatment(rng);
    case Step::Monitoring: return random_monitoring(rng);
    }
    return random_profile(rng);
}

/// A register built only through workbench operations (so it satisfies every
/// invariant and carries a full audit chain): one to three iterations, random
/// cases stepped to random depths, sometimes a replacement matrix and an AHP
/// session.
inline Register random_register(Rng& rng) {
    Workbench wb(Register{}, step_clock());
    auto rev = [&] { return wb.snapshot()->revision; };
    const std::string actor = "tester";
    const std::size_t iterations = uniform(rng, 1, 3);
    for (std::size_t it = 0; it < iterations; ++it) {
        wb.open_iteration(rev(), actor, static_cast<std::uint32_t>(uniform(rng, 7, 35)));
        const std::size_t new_cases = uniform(rng, 0, 4);
        for (std::size_t k = 0; k < new_cases; ++k) {
            wb.add_case(rev(), actor, random_profile(rng), random_text(rng));
        }
        const auto walked = wb.snapshot();
        for (const auto& c : walked->cases) {
            auto reached = reached_step(*walked, c, walked->iterations.back().index);
            const int target = static_cast<int>(uniform(rng, 0, 4));
            int at = reached ? static_cast<int>(*reached) : -1;
            while (at < target) {
                const Step next = static_cast<Step>(at + 1);
                wb.record_step(rev(), actor, c.case_id, random_payload(rng, next), random_text(rng));
                ++at;
            }
        }
        if (coin(rng, 0.3)) wb.set_matrix(rev(), actor, random_full_matrix(rng));
        const auto ties = find_tie_groups(wb.snapshot()->cases, kRatings);
        if (!ties.empty() && coin(rng, 0.5)) {
            auto s = wb.create_session(rev(), actor, ties.front().case_ids, {"cost", "impact"});
            if (coin(rng)) {
                for (const auto& key : s.value.matrix_keys()) {
                    const auto labels = s.value.matrix(key).labels();
                    for (std::size_t i = 0; i < labels.size(); ++i) {
                        for (std::size_t j = i + 1; j < labels.size(); ++j) {
                            wb.judge(rev(), actor, s.value.id, key, labels[i], labels[j],
                                     random_saaty(rng));
                        }
                    }
                    wb.override_consistency(rev(), actor, s.value.id, key, "team consensus");
                }
                wb.complete_session(rev(), actor, s.value.id);
            }
        }
        std::vector<CloseOverride> overrides;
        const auto closing = wb.snapshot();
        for (const auto& c : closing->cases) {
            overrides.push_back({c.case_id, "carried: " + random_text(rng)});
        }
        if (it + 1 < iterations || coin(rng)) {
            // Only incomplete cases may be overridden; filter with the status.
            std::vector<CloseOverride> needed;
            for (const auto& o : overrides) {
                if (!case_status(*wb.snapshot(), o.case_id).complete) needed.push_back(o);
            }
            wb.close_iteration(rev(), actor, needed);
        }
    }
    return *wb.snapshot();
}

} // namespace riskflow::testkit
