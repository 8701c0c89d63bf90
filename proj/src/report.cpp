#include "riskflow/report.hpp"

#include <algorithm>
#include <numeric>

#include "riskflow/error.hpp"
#include "riskflow/store.hpp"

namespace riskflow {

namespace {

constexpr const char* kDash = "-";

std::string md_cell(const std::string& value) {
    std::string out;
    for (char c : value) {
        if (c == '|') {
            out += "\\|";
        } else if (c == '\n') {
            out += "<br>";
        } else {
            out += c;
        }
    }
    return out;
}

std::string csv_cell(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string md_row(const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& c : cells) out += " " + md_cell(c) + " |";
    return out + "\n";
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_cell(cells[i]);
    }
    return out + "\n";
}

std::vector<const RiskCase*> sorted_cases(const Register& reg) {
    std::vector<const RiskCase*> out;
    for (const auto& c : reg.cases) out.push_back(&c);
    std::sort(out.begin(), out.end(),
              [](const RiskCase* a, const RiskCase* b) { return a->case_id < b->case_id; });
    return out;
}

} // namespace

std::string Table::to_markdown() const {
    std::string out = md_row(columns);
    out += "|";
    for (std::size_t i = 0; i < columns.size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& r : rows) out += md_row(r);
    return out;
}

std::string Table::to_csv() const {
    std::string out = csv_row(columns);
    for (const auto& r : rows) out += csv_row(r);
    return out;
}

nlohmann::json Table::to_json() const { return {{"columns", columns}, {"rows", rows}}; }

Table profile_table(const Register& reg) {
    Table t{{"Case #", "Where(G/A)", "Asset", "Risk Type", "Risk Description", "Consequence"}, {}};
    for (const auto* c : sorted_cases(reg)) {
        const auto& p = c->profile();
        t.rows.push_back({std::to_string(c->case_id), to_code(p.locus), p.asset,
                          to_code(p.risk_type), p.description, p.consequence});
    }
    return t;
}

Table assessment_table(const Register& reg) {
    Table t{{"Case #", "Vulnerability", "Threat", "Source", "Impact on", "Likelihood", "Severity",
             "Rate"},
            {}};
    for (const auto* c : sorted_cases(reg)) {
        if (const auto* a = c->assessment()) {
            t.rows.push_back({std::to_string(c->case_id), a->vulnerability, a->threat,
                              a->threat_agent, to_code(a->impact), std::string(to_code(a->likelihood)),
                              std::string(to_code(a->severity)), std::string(to_code(a->rating))});
        } else {
            std::vector<std::string> row(t.columns.size(), kDash);
            row[0] = std::to_string(c->case_id);
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

Table evaluation_table(const Register& reg) {
    Table t{{"Case #", "Decision", "Solution"}, {}};
    for (const auto* c : sorted_cases(reg)) {
        if (const auto* e = c->evaluation()) {
            t.rows.push_back({std::to_string(c->case_id), std::string(to_code(e->decision)),
                              e->solution});
        } else {
            t.rows.push_back({std::to_string(c->case_id), kDash, kDash});
        }
    }
    return t;
}

// ---------------------------------------------------------------------------

int Heatmap::count(Likelihood l, Severity s) const {
    auto r = std::find(rows.begin(), rows.end(), l);
    auto c = std::find(columns.begin(), columns.end(), s);
    if (r == rows.end() || c == columns.end()) return 0;
    return counts[static_cast<std::size_t>(r - rows.begin())]
                 [static_cast<std::size_t>(c - columns.begin())];
}

int Heatmap::total() const {
    int sum = 0;
    for (const auto& row : counts) sum = std::accumulate(row.begin(), row.end(), sum);
    return sum;
}

std::string Heatmap::to_markdown() const {
    std::vector<std::string> header{"Likelihood \\ Severity"};
    for (auto s : columns) header.emplace_back(to_code(s));
    std::string out = md_row(header);
    out += "|";
    for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
    out += "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<std::string> cells{std::string(to_code(rows[r]))};
        for (std::size_t c = 0; c < columns.size(); ++c) {
            cells.push_back(std::string(to_code(ratings[r][c])) + " (" +
                            std::to_string(counts[r][c]) + ")");
        }
        out += md_row(cells);
    }
    return out;
}

std::string Heatmap::to_csv() const {
    std::string out = csv_row({"likelihood", "severity", "rating", "count"});
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out += csv_row({std::string(to_code(rows[r])), std::string(to_code(columns[c])),
                            std::string(to_code(ratings[r][c])), std::to_string(counts[r][c])});
        }
    }
    return out;
}

nlohmann::json Heatmap::to_json() const {
    nlohmann::json r = nlohmann::json::array();
    for (auto l : rows) r.push_back(to_code(l));
    nlohmann::json c = nlohmann::json::array();
    for (auto s : columns) c.push_back(to_code(s));
    nlohmann::json rating_grid = nlohmann::json::array();
    for (const auto& row : ratings) {
        nlohmann::json out = nlohmann::json::array();
        for (auto v : row) out.push_back(to_code(v));
        rating_grid.push_back(std::move(out));
    }
    return {{"rows", r}, {"columns", c}, {"counts", counts}, {"ratings", rating_grid},
            {"total", total()}};
}

Heatmap heatmap(const Register& reg) {
    Heatmap h;
    const auto& m = reg.matrix;
    h.rows.assign(m.likelihood_axis().rbegin(), m.likelihood_axis().rend());
    h.columns.assign(m.severity_axis().rbegin(), m.severity_axis().rend());
    h.counts.assign(h.rows.size(), std::vector<int>(h.columns.size(), 0));
    for (std::size_t r = 0; r < h.rows.size(); ++r) {
        std::vector<Rating> row;
        for (auto s : h.columns) row.push_back(rate(m, h.rows[r], s));
        h.ratings.push_back(std::move(row));
    }
    for (const auto& c : reg.cases) {
        const auto* a = c.assessment();
        if (!a) continue;
        auto r = std::find(h.rows.begin(), h.rows.end(), a->likelihood);
        auto col = std::find(h.columns.begin(), h.columns.end(), a->severity);
        if (r == h.rows.end() || col == h.columns.end()) continue;
        ++h.counts[static_cast<std::size_t>(r - h.rows.begin())]
                  [static_cast<std::size_t>(col - h.columns.begin())];
    }
    return h;
}

// ---------------------------------------------------------------------------

IterationSummary iteration_summary(const Register& reg, std::uint32_t index) {
    if (index == 0 || index > reg.iterations.size()) {
        throw Error("UnknownIteration", "no iteration " + std::to_string(index),
                    {{"iteration", index}});
    }
    IterationSummary s;
    s.iteration = reg.iterations[index - 1];
    for (const auto* c : sorted_cases(reg)) {
        CaseCompletion row;
        row.case_id = c->case_id;
        row.last_step = reached_step(reg, *c, index);
        row.complete = row.last_step == Step::Monitoring;
        for (const auto& carried : s.iteration.carryover) {
            if (carried.case_id == c->case_id) row.justification = carried.justification;
        }
        s.cases.push_back(std::move(row));
    }
    for (const auto& c : reg.cases) {
        if (const auto* a = c.assessment()) ++s.ratings[a->rating];
    }
    for (auto& group : find_tie_groups(reg.cases)) {
        const bool resolved = std::any_of(
            reg.ahp_sessions.begin(), reg.ahp_sessions.end(), [&](const AhpSession& session) {
                auto ids = session.tie_group;
                std::sort(ids.begin(), ids.end());
                return session.status == SessionStatus::Complete && ids == group.case_ids;
            });
        if (!resolved) s.open_ties.push_back(std::move(group));
    }
    return s;
}

std::string IterationSummary::to_markdown() const {
    std::string out = "## Iteration " + std::to_string(iteration.index) + " (" +
                      (iteration.is_open() ? "open" : "closed") + ", cadence " +
                      std::to_string(iteration.cadence_days) + " days)\n\n";
    Table steps{{"Case #", "Reached", "Complete", "Carryover"}, {}};
    for (const auto& c : cases) {
        steps.rows.push_back({std::to_string(c.case_id),
                              c.last_step ? std::string(display_name(*c.last_step)) : kDash,
                              c.complete ? "yes" : "no", c.justification.value_or(kDash)});
    }
    out += steps.to_markdown() + "\nRatings:";
    for (auto r : kRatings) {
        auto it = ratings.find(r);
        out += " " + std::string(to_code(r)) + "=" + std::to_string(it == ratings.end() ? 0 : it->second);
    }
    out += "\n\nOpen tie groups:";
    if (open_ties.empty()) out += " none";
    for (const auto& g : open_ties) {
        out += "\n- " + std::string(to_code(g.level)) + ":";
        for (std::size_t i = 0; i < g.case_ids.size(); ++i) {
            out += (i ? ", " : " ") + std::to_string(g.case_ids[i]);
        }
    }
    return out + "\n";
}

nlohmann::json IterationSummary::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : cases) {
        rows.push_back({{"case_id", c.case_id},
                        {"reached", c.last_step ? nlohmann::json(to_code(*c.last_step)) : nlohmann::json(nullptr)},
                        {"complete", c.complete},
                        {"justification", c.justification ? nlohmann::json(*c.justification) : nlohmann::json(nullptr)}});
    }
    nlohmann::json dist = nlohmann::json::object();
    for (auto r : kRatings) {
        auto it = ratings.find(r);
        dist[std::string(to_code(r))] = it == ratings.end() ? 0 : it->second;
    }
    nlohmann::json ties = nlohmann::json::array();
    for (const auto& g : open_ties) ties.push_back(riskflow::to_json(g));
    return {{"iteration", riskflow::to_json(iteration)},
            {"cases", std::move(rows)},
            {"ratings", std::move(dist)},
            {"open_ties", std::move(ties)}};
}

} // namespace riskflow
