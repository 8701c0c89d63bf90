#include "riskflow/domain.hpp"

#include <algorithm>
#include <cctype>

#include "riskflow/error.hpp"

namespace riskflow {

namespace {

// Lowercase and drop spaces, hyphens and underscores so "Very-High",
// "very high" and "V H" all compare equal to "veryhigh"/"vh".
std::string fold(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == ' ' || c == '-' || c == '_' || c == '\t') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

[[noreturn]] void unknown_level(std::string_view kind, std::string_view text) {
    throw Error("UnknownLevel",
                "unknown " + std::string(kind) + " level: '" + std::string(text) + "'",
                {{"kind", kind}, {"text", text}});
}

template <typename E, std::size_t N>
E match_level(std::string_view kind, std::string_view text, const std::array<E, N>& levels) {
    const std::string key = fold(text);
    for (E level : levels) {
        if (key == fold(to_code(level)) || key == fold(display_name(level))) return level;
    }
    unknown_level(kind, text);
}

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (c == '/' || c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

} // namespace

double nominal_probability(Likelihood l) {
    switch (l) {
    case Likelihood::Negligible: return 0.01;
    case Likelihood::Low: return 0.25;
    case Likelihood::Moderate: return 0.50;
    case Likelihood::High: return 0.75;
    case Likelihood::VeryHigh: return 1.0;
    }
    return 0.0;
}

std::string_view to_code(Likelihood l) {
    switch (l) {
    case Likelihood::Negligible: return "N";
    case Likelihood::Low: return "L";
    case Likelihood::Moderate: return "M";
    case Likelihood::High: return "H";
    case Likelihood::VeryHigh: return "VH";
    }
    return "?";
}

std::string_view to_code(Severity s) {
    switch (s) {
    case Severity::Low: return "L";
    case Severity::Moderate: return "M";
    case Severity::High: return "H";
    case Severity::Critical: return "C";
    }
    return "?";
}

std::string_view to_code(Rating r) {
    switch (r) {
    case Rating::Low: return "L";
    case Rating::Moderate: return "M";
    case Rating::High: return "H";
    case Rating::Critical: return "C";
    }
    return "?";
}

std::string_view to_code(Decision d) {
    switch (d) {
    case Decision::Accept: return "Accept";
    case Decision::Avoid: return "Avoid";
    case Decision::Transfer: return "Transfer";
    case Decision::Mitigate: return "Mitigate";
    }
    return "?";
}

std::string to_code(ImpactSet s) {
    std::string out;
    if (s.contains(Impact::Confidentiality)) out += 'C';
    if (s.contains(Impact::Integrity)) out += 'I';
    if (s.contains(Impact::Availability)) out += 'A';
    if (s.contains(Impact::Accountability)) out += 'a';
    return out;
}

std::string to_code(RiskType t) {
    if (t.contains(Origin::External) && t.contains(Origin::Internal)) return "E/I";
    if (t.contains(Origin::External)) return "E";
    if (t.contains(Origin::Internal)) return "I";
    return "";
}

std::string to_code(Locus l) {
    if (l.contains(Zone::Air) && l.contains(Zone::Ground)) return "A/G";
    if (l.contains(Zone::Air)) return "A";
    if (l.contains(Zone::Ground)) return "G";
    return "";
}

std::string_view display_name(Likelihood l) {
    switch (l) {
    case Likelihood::Negligible: return "Negligible";
    case Likelihood::Low: return "Low";
    case Likelihood::Moderate: return "Moderate";
    case Likelihood::High: return "High";
    case Likelihood::VeryHigh: return "Very-High";
    }
    return "?";
}

std::string_view display_name(Severity s) {
    switch (s) {
    case Severity::Low: return "Low";
    case Severity::Moderate: return "Moderate";
    case Severity::High: return "High";
    case Severity::Critical: return "Critical";
    }
    return "?";
}

std::string_view display_name(Rating r) {
    switch (r) {
    case Rating::Low: return "Low";
    case Rating::Moderate: return "Moderate";
    case Rating::High: return "High";
    case Rating::Critical: return "Critical";
    }
    return "?";
}

Likelihood parse_likelihood(std::string_view text) {
    return match_level("likelihood", text, kLikelihoods);
}

Severity parse_severity(std::string_view text) {
    return match_level("severity", text, kSeverities);
}

Rating parse_rating(std::string_view text) { return match_level("rating", text, kRatings); }

Decision parse_decision(std::string_view text) {
    const std::string key = fold(text);
    if (key == "accept" || key == "acceptance") return Decision::Accept;
    if (key == "avoid" || key == "avoidance") return Decision::Avoid;
    if (key == "transfer") return Decision::Transfer;
    if (key == "mitigate" || key == "mitigation") return Decision::Mitigate;
    unknown_level("decision", text);
}

ImpactSet parse_impact(std::string_view text, ImpactParsing mode) {
    ImpactSet set;
    bool saw_upper_a = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') continue;
        switch (c) {
        case 'C': set.insert(Impact::Confidentiality); break;
        case 'I': set.insert(Impact::Integrity); break;
        case 'a': set.insert(Impact::Accountability); break;
        case 'A':
            if (!saw_upper_a) {
                set.insert(Impact::Availability);
                saw_upper_a = true;
            } else if (mode == ImpactParsing::Lenient) {
                set.insert(Impact::Accountability);
            } else {
                throw Error("AmbiguousAccountability",
                            "impact '" + std::string(text) +
                                "' repeats 'A'; write accountability as lowercase 'a'",
                            {{"text", text}});
            }
            break;
        default:
            throw Error("UnknownImpactLetter",
                        std::string("unknown impact letter '") + c + "'",
                        {{"letter", std::string(1, c)}});
        }
    }
    if (set.empty()) {
        throw Error("EmptyImpact", "impact set must name at least one of C, I, A, a");
    }
    return set;
}

RiskType parse_risk_type(std::string_view text) {
    RiskType t;
    for (const auto& token : split_tokens(text)) {
        if (token == "e" || token == "external") {
            t.insert(Origin::External);
        } else if (token == "i" || token == "internal") {
            t.insert(Origin::Internal);
        } else {
            unknown_level("risk type", text);
        }
    }
    if (t.empty()) unknown_level("risk type", text);
    return t;
}

Locus parse_locus(std::string_view text) {
    Locus l;
    for (const auto& token : split_tokens(text)) {
        if (token == "a" || token == "air") {
            l.insert(Zone::Air);
        } else if (token == "g" || token == "ground") {
            l.insert(Zone::Ground);
        } else {
            unknown_level("locus", text);
        }
    }
    if (l.empty()) unknown_level("locus", text);
    return l;
}

bool is_blank(std::string_view text) {
    return std::all_of(text.begin(), text.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

std::string trim(std::string_view text) {
    auto space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    auto first = std::find_if_not(text.begin(), text.end(), space);
    auto last = std::find_if_not(text.rbegin(), text.rend(), space).base();
    if (first >= last) return {};
    return std::string(first, last);
}

namespace {

void require_text(ValidationReport& report, std::string_view value, const char* field) {
    if (is_blank(value)) report.push_back({"EmptyField", field});
}

} // namespace

ValidationReport validate_profile(const RiskProfile& profile) {
    ValidationReport report;
    if (profile.case_id == 0) report.push_back({"InvalidCaseId", "case_id"});
    if (profile.locus.empty()) report.push_back({"EmptyField", "locus"});
    require_text(report, profile.asset, "asset");
    if (profile.risk_type.empty()) report.push_back({"EmptyField", "risk_type"});
    require_text(report, profile.description, "description");
    require_text(report, profile.consequence, "consequence");
    return report;
}

ValidationReport validate_assessment(const RiskAssessment& assessment) {
    ValidationReport report;
    require_text(report, assessment.vulnerability, "vulnerability");
    require_text(report, assessment.threat, "threat");
    require_text(report, assessment.threat_agent, "threat_agent");
    if (assessment.impact.empty()) report.push_back({"EmptyField", "impact"});
    return report;
}

ValidationReport validate_evaluation(const RiskEvaluation& evaluation) {
    ValidationReport report;
    require_text(report, evaluation.solution, "solution");
    return report;
}

} // namespace riskflow
