#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace riskflow {

using CaseId = std::uint64_t;

// Ordered qualitative scales. Enumerator order is the scale order, so the
// built-in comparison operators give N < L < M < H < VH etc.

enum class Likelihood { Negligible, Low, Moderate, High, VeryHigh };
enum class Severity { Low, Moderate, High, Critical };
enum class Rating { Low, Moderate, High, Critical };

inline constexpr std::array kLikelihoods{Likelihood::Negligible, Likelihood::Low,
                                         Likelihood::Moderate, Likelihood::High,
                                         Likelihood::VeryHigh};
inline constexpr std::array kSeverities{Severity::Low, Severity::Moderate, Severity::High,
                                        Severity::Critical};
inline constexpr std::array kRatings{Rating::Low, Rating::Moderate, Rating::High,
                                     Rating::Critical};

/// Nominal probability attached to each likelihood level (N 1%, L 25%, M 50%,
/// H 75%, VH 100%). Informational only; ratings are purely qualitative.
double nominal_probability(Likelihood l);

enum class Decision { Accept, Avoid, Transfer, Mitigate };
inline constexpr std::array kDecisions{Decision::Accept, Decision::Avoid, Decision::Transfer,
                                       Decision::Mitigate};

// Members of the small set-valued fields. Declaration order is the canonical
// rendering order.
enum class Impact { Confidentiality, Integrity, Availability, Accountability };
enum class Origin { External, Internal };
enum class Zone { Air, Ground };

/// Bit set over a small enumeration.
template <typename E>
class FlagSet {
public:
    constexpr FlagSet() = default;
    constexpr FlagSet(std::initializer_list<E> items) {
        for (E e : items) insert(e);
    }

    constexpr void insert(E e) { bits_ |= bit(e); }
    constexpr bool contains(E e) const { return (bits_ & bit(e)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr unsigned bits() const { return bits_; }

    friend constexpr bool operator==(FlagSet, FlagSet) = default;

private:
    static constexpr unsigned bit(E e) { return 1u << static_cast<unsigned>(e); }
    unsigned bits_ = 0;
};

using ImpactSet = FlagSet<Impact>;
using RiskType = FlagSet<Origin>;
using Locus = FlagSet<Zone>;

// Canonical codes. Decisions have no short code and render as their name.
std::string_view to_code(Likelihood l);
std::string_view to_code(Severity s);
std::string_view to_code(Rating r);
std::string_view to_code(Decision d);
std::string to_code(ImpactSet s);  // "CIAa" order
std::string to_code(RiskType t);   // "E", "I", "E/I"
std::string to_code(Locus l);      // "A", "G", "A/G"

std::string_view display_name(Likelihood l);
std::string_view display_name(Severity s);
std::string_view display_name(Rating r);

enum class ImpactParsing {
    Strict,  // a repeated 'A' is rejected as AmbiguousAccountability
    Lenient  // a repeated 'A' is read as accountability ("C I A A" table typography)
};

// Parsers are case-insensitive over codes and full names ("VH", "very-high",
// "Very High"). Failures throw riskflow::Error with codes UnknownLevel,
// EmptyImpact, UnknownImpactLetter or AmbiguousAccountability.
Likelihood parse_likelihood(std::string_view text);
Severity parse_severity(std::string_view text);
Rating parse_rating(std::string_view text);
Decision parse_decision(std::string_view text);
ImpactSet parse_impact(std::string_view text, ImpactParsing mode = ImpactParsing::Strict);
RiskType parse_risk_type(std::string_view text);
Locus parse_locus(std::string_view text);

struct RiskProfile {
    CaseId case_id = 0;
    Locus locus;
    std::string asset;
    RiskType risk_type;
    std::string description;
    std::string consequence;

    friend bool operator==(const RiskProfile&, const RiskProfile&) = default;
};

struct RiskAssessment {
    std::string vulnerability;
    std::string threat;
    std::string threat_agent;
    ImpactSet impact;
    Likelihood likelihood = Likelihood::Negligible;
    Severity severity = Severity::Low;
    // Derived from the active rating matrix; never taken from input.
    Rating rating = Rating::Low;

    friend bool operator==(const RiskAssessment&, const RiskAssessment&) = default;
};

struct RiskEvaluation {
    Decision decision = Decision::Accept;
    std::string solution;

    friend bool operator==(const RiskEvaluation&, const RiskEvaluation&) = default;
};

struct FieldViolation {
    std::string code;   // "EmptyField", "InvalidCaseId"
    std::string field;

    friend bool operator==(const FieldViolation&, const FieldViolation&) = default;
};

using ValidationReport = std::vector<FieldViolation>;

/// True when `text` has no non-whitespace content.
bool is_blank(std::string_view text);
std::string trim(std::string_view text);

ValidationReport validate_profile(const RiskProfile& profile);
ValidationReport validate_assessment(const RiskAssessment& assessment);
ValidationReport validate_evaluation(const RiskEvaluation& evaluation);

} // namespace riskflow
