#include "riskflow/store.hpp"

#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "riskflow/error.hpp"

namespace riskflow {

namespace {

[[noreturn]] void parse_error(const std::string& location, const std::string& what) {
    throw Error("ParseError", (location.empty() ? std::string("/") : location) + ": " + what,
                {{"location", location.empty() ? "/" : location}});
}

std::string child(const std::string& location, std::string_view key) {
    return location + "/" + std::string(key);
}

std::string child(const std::string& location, std::size_t index) {
    return location + "/" + std::to_string(index);
}

const json& field(const json& obj, std::string_view key, const std::string& location) {
    if (!obj.is_object()) parse_error(location, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) parse_error(child(location, key), "missing field");
    return *it;
}

std::string get_string(const json& obj, std::string_view key, const std::string& location) {
    const json& v = field(obj, key, location);
    if (!v.is_string()) parse_error(child(location, key), "expected a string");
    return v.get<std::string>();
}

std::string get_string_or(const json& obj, std::string_view key, const std::string& location,
                          std::string fallback) {
    if (obj.is_object() && !obj.contains(key)) return fallback;
    return get_string(obj, key, location);
}

std::uint64_t get_uint(const json& obj, std::string_view key, const std::string& location) {
    const json& v = field(obj, key, location);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        parse_error(child(location, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

double get_double(const json& obj, std::string_view key, const std::string& location) {
    const json& v = field(obj, key, location);
    if (!v.is_number()) parse_error(child(location, key), "expected a number");
    return v.get<double>();
}

const json& get_array(const json& obj, std::string_view key, const std::string& location) {
    const json& v = field(obj, key, location);
    if (!v.is_array()) parse_error(child(location, key), "expected an array");
    return v;
}

// Runs a domain parser, re-labelling its error as a located ParseError.
template <typename F>
auto located(const std::string& location, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == "ParseError") throw;
        parse_error(location, std::string(e.code()) + ": " + e.what());
    }
}

template <typename T, typename F>
T parse_code(const json& obj, std::string_view key, const std::string& location, F parser) {
    const std::string text = get_string(obj, key, location);
    return located(child(location, key), [&] { return parser(text); });
}

Timestamp get_timestamp(const json& obj, std::string_view key, const std::string& location) {
    const std::string text = get_string(obj, key, location);
    return located(child(location, key), [&] { return parse_timestamp(text); });
}

} // namespace

// ---------------------------------------------------------------------------
// Encoding

json to_json(const RatingMatrix& m) {
    json l_axis = json::array();
    for (auto l : m.likelihood_axis()) l_axis.push_back(to_code(l));
    json s_axis = json::array();
    for (auto s : m.severity_axis()) s_axis.push_back(to_code(s));
    // Rows highest likelihood first, columns highest severity first.
    json rows = json::array();
    const auto& grid = m.cells();
    for (auto r = grid.rbegin(); r != grid.rend(); ++r) {
        json row = json::array();
        for (auto c = r->rbegin(); c != r->rend(); ++c) {
            row.push_back(*c ? json(to_code(**c)) : json(nullptr));
        }
        rows.push_back(std::move(row));
    }
    return {{"name", m.name()},
            {"version", m.version()},
            {"likelihood_axis", std::move(l_axis)},
            {"severity_axis", std::move(s_axis)},
            {"cells", std::move(rows)}};
}

json to_json(const RiskProfile& p) {
    return {{"case_id", p.case_id},
            {"locus", to_code(p.locus)},
            {"asset", p.asset},
            {"risk_type", to_code(p.risk_type)},
            {"description", p.description},
            {"consequence", p.consequence}};
}

json to_json(const RiskAssessment& a) {
    return {{"vulnerability", a.vulnerability},
            {"threat", a.threat},
            {"threat_agent", a.threat_agent},
            {"impact", to_code(a.impact)},
            {"likelihood", to_code(a.likelihood)},
            {"severity", to_code(a.severity)},
            {"rating", to_code(a.rating)}};
}

json to_json(const RiskEvaluation& e) {
    return {{"decision", to_code(e.decision)}, {"solution", e.solution}};
}

json to_json(const TreatmentPlan& t) {
    json actions = json::array();
    for (const auto& a : t.mitigation_actions) {
        actions.push_back({{"text", a.text}, {"owner", a.owner}, {"due", format_date(a.due)}});
    }
    return {{"mitigation_actions", std::move(actions)},
            {"controls", t.controls},
            {"validation_note", t.validation_note}};
}

json to_json(const MonitoringRecord& m) {
    return {{"observation", m.observation},
            {"effective", to_code(m.effective)},
            {"reviewed_by", m.reviewed_by}};
}

json to_json(const StepPayload& payload) {
    return std::visit([](const auto& p) { return to_json(p); }, payload);
}

json to_json(const StepRecord& r) {
    return {{"step", to_code(r.step())},
            {"iteration", r.iteration},
            {"documentation", r.documentation},
            {"actor", r.actor},
            {"timestamp", format_timestamp(r.timestamp)},
            {"payload", to_json(r.payload)}};
}

json to_json(const RiskCase& c) {
    json history = json::array();
    for (const auto& r : c.history) history.push_back(to_json(r));
    return {{"case_id", c.case_id}, {"history", std::move(history)}};
}

json to_json(const Iteration& it) {
    json carry = json::array();
    for (const auto& c : it.carryover) {
        carry.push_back({{"case_id", c.case_id},
                         {"justification", c.justification},
                         {"resume_step", to_code(c.resume_step)}});
    }
    return {{"index", it.index},
            {"opened_at", format_timestamp(it.opened_at)},
            {"closed_at", it.closed_at ? json(format_timestamp(*it.closed_at)) : json(nullptr)},
            {"cadence_days", it.cadence_days},
            {"carryover", std::move(carry)}};
}

json to_json(const PairwiseMatrix& m) {
    const std::size_t n = m.size();
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < n; ++j) {
            if (const auto r = m.judgment(i, j)) {
                row.push_back(to_string(*r));
            } else if (i != j && m.fully_judged()) {
                row.push_back(m(i, j));  // numeric matrix
            } else {
                row.push_back(nullptr);
            }
        }
        rows.push_back(std::move(row));
    }
    return {{"labels", m.labels()}, {"entries", std::move(rows)}};
}

json to_json(const ConsistencyReport& r) {
    return {{"lambda_max", r.lambda_max},
            {"ci", r.ci},
            {"ri", r.ri},
            {"cr", r.cr},
            {"acceptable", r.acceptable}};
}

json to_json(const AhpSession& s) {
    json alternatives = json::array();
    for (std::size_t k = 0; k < s.alternatives.size(); ++k) {
        json m = to_json(s.alternatives[k]);
        m["criterion"] = s.criteria.labels()[k];
        alternatives.push_back(std::move(m));
    }
    json overrides = json::array();
    for (const auto& o : s.overrides) {
        overrides.push_back({{"matrix", o.matrix}, {"justification", o.justification}});
    }
    json result = nullptr;
    if (s.result) {
        json ranking = json::array();
        for (const auto& r : s.result->ranking) {
            ranking.push_back({{"case_id", r.case_id}, {"score", r.score}});
        }
        json local = json::array();
        for (const auto& v : s.result->local_weights) local.push_back(v.weights);
        json diagnostics = json::array();
        for (const auto& d : s.result->diagnostics) {
            json item = to_json(d.report);
            item["matrix"] = d.matrix;
            diagnostics.push_back(std::move(item));
        }
        result = {{"ranking", std::move(ranking)},
                  {"criteria_weights", s.result->criteria_weights.weights},
                  {"local_weights", std::move(local)},
                  {"diagnostics", std::move(diagnostics)}};
    }
    return {{"id", s.id},
            {"level", to_code(s.level)},
            {"tie_group", s.tie_group},
            {"status", to_code(s.status)},
            {"criteria", to_json(s.criteria)},
            {"alternatives", std::move(alternatives)},
            {"overrides", std::move(overrides)},
            {"result", std::move(result)}};
}

json to_json(const AuditEntry& e) {
    return {{"seq", e.seq},
            {"timestamp", format_timestamp(e.timestamp)},
            {"actor", e.actor},
            {"operation", e.operation},
            {"summary", e.summary},
            {"prev_hash", e.prev_hash},
            {"entry_hash", e.entry_hash}};
}

json to_json(const TieGroup& g) {
    return {{"level", to_code(g.level)}, {"case_ids", g.case_ids}};
}

json to_json(const Register& reg) {
    json cases = json::array();
    for (const auto& c : reg.cases) cases.push_back(to_json(c));
    json iterations = json::array();
    for (const auto& it : reg.iterations) iterations.push_back(to_json(it));
    json sessions = json::array();
    for (const auto& s : reg.ahp_sessions) sessions.push_back(to_json(s));
    json audit = json::array();
    for (const auto& e : reg.audit_log) audit.push_back(to_json(e));
    return {{"schema_version", reg.schema_version},
            {"revision", reg.revision},
            {"matrix", to_json(reg.matrix)},
            {"cases", std::move(cases)},
            {"iterations", std::move(iterations)},
            {"ahp_sessions", std::move(sessions)},
            {"audit_log", std::move(audit)}};
}

// ---------------------------------------------------------------------------
// Decoding

RatingMatrix matrix_from_json(const json& j, const std::string& location) {
    std::vector<Likelihood> l_axis;
    const json& l_json = get_array(j, "likelihood_axis", location);
    for (std::size_t i = 0; i < l_json.size(); ++i) {
        const auto loc = child(child(location, "likelihood_axis"), i);
        if (!l_json[i].is_string()) parse_error(loc, "expected a likelihood code");
        l_axis.push_back(located(loc, [&] { return parse_likelihood(l_json[i].get<std::string>()); }));
    }
    std::vector<Severity> s_axis;
    const json& s_json = get_array(j, "severity_axis", location);
    for (std::size_t i = 0; i < s_json.size(); ++i) {
        const auto loc = child(child(location, "severity_axis"), i);
        if (!s_json[i].is_string()) parse_error(loc, "expected a severity code");
        s_axis.push_back(located(loc, [&] { return parse_severity(s_json[i].get<std::string>()); }));
    }
    const json& rows = get_array(j, "cells", location);
    RatingMatrix::Grid grid(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto row_loc = child(child(location, "cells"), r);
        if (!rows[r].is_array()) parse_error(row_loc, "expected a row array");
        auto& row = grid[rows.size() - 1 - r];
        row.resize(rows[r].size());
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            const json& cell = rows[r][c];
            auto& slot = row[rows[r].size() - 1 - c];
            if (cell.is_null()) continue;
            if (!cell.is_string()) parse_error(child(row_loc, c), "expected a rating code or null");
            slot = located(child(row_loc, c), [&] { return parse_rating(cell.get<std::string>()); });
        }
    }
    const std::string name = get_string_or(j, "name", location, "custom");
    const std::uint64_t version = j.contains("version") ? get_uint(j, "version", location) : 1;
    return RatingMatrix(name, static_cast<std::uint32_t>(version), std::move(l_axis),
                        std::move(s_axis), std::move(grid));
}

RiskProfile profile_from_json(const json& j, const std::string& location) {
    RiskProfile p;
    p.case_id = j.contains("case_id") ? get_uint(j, "case_id", location) : 0;
    p.locus = parse_code<Locus>(j, "locus", location, parse_locus);
    p.asset = get_string(j, "asset", location);
    p.risk_type = parse_code<RiskType>(j, "risk_type", location, parse_risk_type);
    p.description = get_string(j, "description", location);
    p.consequence = get_string(j, "consequence", location);
    return p;
}

namespace {

RiskAssessment assessment_from_json(const json& j, const std::string& location) {
    RiskAssessment a;
    a.vulnerability = get_string(j, "vulnerability", location);
    a.threat = get_string(j, "threat", location);
    a.threat_agent = get_string(j, "threat_agent", location);
    a.impact = parse_code<ImpactSet>(j, "impact", location,
                                     [](std::string_view t) { return parse_impact(t); });
    a.likelihood = parse_code<Likelihood>(j, "likelihood", location, parse_likelihood);
    a.severity = parse_code<Severity>(j, "severity", location, parse_severity);
    if (j.contains("rating")) a.rating = parse_code<Rating>(j, "rating", location, parse_rating);
    return a;
}

RiskEvaluation evaluation_from_json(const json& j, const std::string& location) {
    RiskEvaluation e;
    e.decision = parse_code<Decision>(j, "decision", location, parse_decision);
    e.solution = get_string(j, "solution", location);
    return e;
}

TreatmentPlan treatment_from_json(const json& j, const std::string& location) {
    TreatmentPlan t;
    const json& actions = get_array(j, "mitigation_actions", location);
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto loc = child(child(location, "mitigation_actions"), i);
        ActionItem a;
        a.text = get_string(actions[i], "text", loc);
        a.owner = get_string(actions[i], "owner", loc);
        const std::string due = get_string(actions[i], "due", loc);
        a.due = located(child(loc, "due"), [&] { return parse_date(due); });
        t.mitigation_actions.push_back(std::move(a));
    }
    if (j.contains("controls")) {
        const json& controls = get_array(j, "controls", location);
        for (std::size_t i = 0; i < controls.size(); ++i) {
            if (!controls[i].is_string()) {
                parse_error(child(child(location, "controls"), i), "expected a string");
            }
            t.controls.push_back(controls[i].get<std::string>());
        }
    }
    t.validation_note = get_string_or(j, "validation_note", location, "");
    return t;
}

MonitoringRecord monitoring_from_json(const json& j, const std::string& location) {
    MonitoringRecord m;
    m.observation = get_string(j, "observation", location);
    m.effective = parse_code<Effectiveness>(j, "effective", location, parse_effectiveness);
    m.reviewed_by = get_string_or(j, "reviewed_by", location, "");
    return m;
}

StepRecord record_from_json(const json& j, const std::string& location) {
    StepRecord r;
    const Step step = parse_code<Step>(j, "step", location, parse_step);
    r.iteration = static_cast<std::uint32_t>(get_uint(j, "iteration", location));
    r.documentation = get_string(j, "documentation", location);
    r.actor = get_string(j, "actor", location);
    r.timestamp = get_timestamp(j, "timestamp", location);
    r.payload = payload_from_json(step, field(j, "payload", location), child(location, "payload"));
    return r;
}

Iteration iteration_from_json(const json& j, const std::string& location) {
    Iteration it;
    it.index = static_cast<std::uint32_t>(get_uint(j, "index", location));
    it.opened_at = get_timestamp(j, "opened_at", location);
    if (!field(j, "closed_at", location).is_null()) {
        it.closed_at = get_timestamp(j, "closed_at", location);
    }
    it.cadence_days = static_cast<std::uint32_t>(get_uint(j, "cadence_days", location));
    const json& carry = get_array(j, "carryover", location);
    for (std::size_t i = 0; i < carry.size(); ++i) {
        const auto loc = child(child(location, "carryover"), i);
        Carryover c;
        c.case_id = get_uint(carry[i], "case_id", loc);
        c.justification = get_string(carry[i], "justification", loc);
        c.resume_step = parse_code<Step>(carry[i], "resume_step", loc, parse_step);
        it.carryover.push_back(std::move(c));
    }
    return it;
}

PairwiseMatrix pairwise_from_json(const json& j, const std::string& location) {
    const json& labels_json = get_array(j, "labels", location);
    std::vector<std::string> labels;
    for (const auto& l : labels_json) {
        if (!l.is_string()) parse_error(child(location, "labels"), "expected strings");
        labels.push_back(l.get<std::string>());
    }
    PairwiseMatrix m = located(location, [&] { return PairwiseMatrix(labels); });
    const std::size_t n = m.size();
    const json& rows = get_array(j, "entries", location);
    if (rows.size() != n) parse_error(child(location, "entries"), "expected n rows");
    auto ratio_at = [&](std::size_t i, std::size_t k) -> std::optional<Ratio> {
        const auto loc = child(child(child(location, "entries"), i), k);
        if (!rows[i].is_array() || rows[i].size() != n) parse_error(loc, "expected n columns");
        const json& cell = rows[i][k];
        if (cell.is_null()) return std::nullopt;
        if (!cell.is_string()) parse_error(loc, "expected \"p/q\" or null");
        return located(loc, [&] { return parse_ratio(cell.get<std::string>()); });
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (ratio_at(i, i) != Ratio{1, 1}) {
            parse_error(child(child(child(location, "entries"), i), i), "diagonal must be \"1/1\"");
        }
        for (std::size_t k = i + 1; k < n; ++k) {
            const auto upper = ratio_at(i, k);
            const auto lower = ratio_at(k, i);
            if (upper.has_value() != lower.has_value() ||
                (upper && *lower != upper->reciprocal())) {
                parse_error(child(child(child(location, "entries"), k), i),
                            "entry is not the exact reciprocal of its transpose");
            }
            if (upper) {
                located(child(child(child(location, "entries"), i), k),
                        [&] { m.judge(i, k, *upper); });
            }
        }
    }
    return m;
}

ConsistencyReport consistency_from_json(const json& j, const std::string& location) {
    ConsistencyReport r;
    r.lambda_max = get_double(j, "lambda_max", location);
    r.ci = get_double(j, "ci", location);
    r.ri = get_double(j, "ri", location);
    r.cr = get_double(j, "cr", location);
    const json& ok = field(j, "acceptable", location);
    if (!ok.is_boolean()) parse_error(child(location, "acceptable"), "expected a boolean");
    r.acceptable = ok.get<bool>();
    return r;
}

std::vector<double> doubles_from_json(const json& arr, const std::string& location) {
    if (!arr.is_array()) parse_error(location, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) parse_error(child(location, i), "expected a number");
        out.push_back(arr[i].get<double>());
    }
    return out;
}

AhpSession session_from_json(const json& j, const std::string& location) {
    AhpSession s;
    s.id = static_cast<std::uint32_t>(get_uint(j, "id", location));
    s.level = parse_code<Rating>(j, "level", location, parse_rating);
    const json& group = get_array(j, "tie_group", location);
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (!group[i].is_number_unsigned()) {
            parse_error(child(child(location, "tie_group"), i), "expected a case id");
        }
        s.tie_group.push_back(group[i].get<CaseId>());
    }
    const std::string status = get_string(j, "status", location);
    if (status == "draft") {
        s.status = SessionStatus::Draft;
    } else if (status == "complete") {
        s.status = SessionStatus::Complete;
    } else {
        parse_error(child(location, "status"), "expected \"draft\" or \"complete\"");
    }
    s.criteria = pairwise_from_json(field(j, "criteria", location), child(location, "criteria"));
    const json& alts = get_array(j, "alternatives", location);
    for (std::size_t i = 0; i < alts.size(); ++i) {
        s.alternatives.push_back(pairwise_from_json(alts[i], child(child(location, "alternatives"), i)));
    }
    const json& overrides = get_array(j, "overrides", location);
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        const auto loc = child(child(location, "overrides"), i);
        s.overrides.push_back(
            {get_string(overrides[i], "matrix", loc), get_string(overrides[i], "justification", loc)});
    }
    const json& result = field(j, "result", location);
    if (!result.is_null()) {
        const auto loc = child(location, "result");
        AhpResult r;
        const json& ranking = get_array(result, "ranking", loc);
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            const auto rloc = child(child(loc, "ranking"), i);
            r.ranking.push_back(
                {get_uint(ranking[i], "case_id", rloc), get_double(ranking[i], "score", rloc)});
        }
        r.criteria_weights.weights =
            doubles_from_json(field(result, "criteria_weights", loc), child(loc, "criteria_weights"));
        const json& local = get_array(result, "local_weights", loc);
        for (std::size_t i = 0; i < local.size(); ++i) {
            r.local_weights.push_back({doubles_from_json(local[i], child(child(loc, "local_weights"), i))});
        }
        const json& diagnostics = get_array(result, "diagnostics", loc);
        for (std::size_t i = 0; i < diagnostics.size(); ++i) {
            const auto dloc = child(child(loc, "diagnostics"), i);
            r.diagnostics.push_back({get_string(diagnostics[i], "matrix", dloc),
                                     consistency_from_json(diagnostics[i], dloc)});
        }
        s.result = std::move(r);
    }
    return s;
}

AuditEntry audit_from_json(const json& j, const std::string& location) {
    AuditEntry e;
    e.seq = get_uint(j, "seq", location);
    e.timestamp = get_timestamp(j, "timestamp", location);
    e.actor = get_string(j, "actor", location);
    e.operation = get_string(j, "operation", location);
    e.summary = get_string(j, "summary", location);
    e.prev_hash = get_string(j, "prev_hash", location);
    e.entry_hash = get_string(j, "entry_hash", location);
    return e;
}

} // namespace

StepPayload payload_from_json(Step step, const json& j, const std::string& location) {
    switch (step) {
    case Step::Profile: return profile_from_json(j, location);
    case Step::Assessment: return assessment_from_json(j, location);
    case Step::Evaluation: return evaluation_from_json(j, location);
    case Step::Treatment: return treatment_from_json(j, location);
    case Step::Monitoring: return monitoring_from_json(j, location);
    }
    parse_error(location, "unknown step");
}

Register register_from_json(const json& j) {
    const std::string root;
    if (!j.is_object()) parse_error(root, "expected a register object");
    const auto version = get_uint(j, "schema_version", root);
    if (version > kSchemaVersion) {
        throw Error("UnsupportedVersion",
                    "register schema_version " + std::to_string(version) +
                        " is newer than supported version " + std::to_string(kSchemaVersion),
                    {{"schema_version", version}, {"supported", kSchemaVersion}});
    }
    Register reg;
    reg.schema_version = static_cast<std::uint32_t>(version);
    reg.revision = get_uint(j, "revision", root);
    reg.matrix = matrix_from_json(field(j, "matrix", root), "/matrix");

    const json& cases = get_array(j, "cases", root);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto loc = child("/cases", i);
        RiskCase c;
        c.case_id = get_uint(cases[i], "case_id", loc);
        const json& history = get_array(cases[i], "history", loc);
        for (std::size_t k = 0; k < history.size(); ++k) {
            c.history.push_back(record_from_json(history[k], child(child(loc, "history"), k)));
        }
        reg.cases.push_back(std::move(c));
    }
    const json& iterations = get_array(j, "iterations", root);
    for (std::size_t i = 0; i < iterations.size(); ++i) {
        reg.iterations.push_back(iteration_from_json(iterations[i], child("/iterations", i)));
    }
    const json& sessions = get_array(j, "ahp_sessions", root);
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        reg.ahp_sessions.push_back(session_from_json(sessions[i], child("/ahp_sessions", i)));
    }
    const json& audit = get_array(j, "audit_log", root);
    for (std::size_t i = 0; i < audit.size(); ++i) {
        reg.audit_log.push_back(audit_from_json(audit[i], child("/audit_log", i)));
    }
    return reg;
}

std::string save(const Register& reg) { return to_json(reg).dump(2) + "\n"; }

Register load(std::string_view document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::parse_error& e) {
        throw Error("ParseError", std::string("malformed register document: ") + e.what(),
                    {{"location", "byte " + std::to_string(e.byte)}});
    }
    Register reg = register_from_json(j);
    verify_chain(reg.audit_log);
    check_invariants(reg);
    return reg;
}

Register load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("RegisterNotFound", "cannot read register file '" + path.string() + "'",
                    {{"path", path.string()}});
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load(buffer.str());
}

void save_file(const Register& reg, const std::filesystem::path& path) {
    const std::string text = save(reg);
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("WriteFailed", "cannot write '" + tmp.string() + "'");
        }
        out << text;
        out.flush();
        if (!out) throw Error("WriteFailed", "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("WriteFailed", "cannot replace '" + path.string() + "': " + ec.message());
    }
}

} // namespace riskflow
