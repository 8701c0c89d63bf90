#include "riskflow/cli.hpp"

#include <CLI11.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "riskflow/error.hpp"
#include "riskflow/report.hpp"
#include "riskflow/service.hpp"
#include "riskflow/store.hpp"
#include "riskflow/workbench.hpp"

namespace riskflow {

namespace {

namespace fs = std::filesystem;

// Advisory lock on "<register>.lock" held for the duration of a mutating
// command.
class FileLock {
public:
    explicit FileLock(const fs::path& register_path) {
        const std::string lock_path = register_path.string() + ".lock";
        fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0) throw Error("LockFailed", "cannot open lock file " + lock_path);
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw Error("LockFailed", "cannot lock " + lock_path);
        }
    }
    ~FileLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileNotFound", "cannot read " + path.string(), {{"path", path.string()}});
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RatingMatrix read_matrix_file(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw Error("ParseError", path.string() + ": " + e.what(), {{"location", ""}});
    }
    return matrix_from_json(j);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

CaseId parse_case_id(const std::string& text) {
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(text, &used);
        if (used == text.size() && v > 0 && v <= 0xffffffffUL) return static_cast<CaseId>(v);
    } catch (const std::exception&) {
    }
    throw Error("InvalidCaseId", "'" + text + "' is not a case id");
}

std::string matrix_markdown(const RatingMatrix& m) {
    Table t;
    t.columns.push_back("Likelihood \\ Severity");
    for (auto it = m.severity_axis().rbegin(); it != m.severity_axis().rend(); ++it) {
        t.columns.emplace_back(to_code(*it));
    }
    for (auto l = m.likelihood_axis().rbegin(); l != m.likelihood_axis().rend(); ++l) {
        std::vector<std::string> row{std::string(to_code(*l))};
        for (auto s = m.severity_axis().rbegin(); s != m.severity_axis().rend(); ++s) {
            row.emplace_back(to_code(rate(m, *l, *s)));
        }
        t.rows.push_back(std::move(row));
    }
    return "Matrix '" + m.name() + "' version " + std::to_string(m.version()) + "\n\n" +
           t.to_markdown();
}

std::string format_score(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << v;
    return out.str();
}

std::string session_text(const AhpSession& s) {
    std::ostringstream out;
    out << "session " << s.id << " (" << to_code(s.status) << ", level " << to_code(s.level)
        << ", cases";
    for (std::size_t i = 0; i < s.tie_group.size(); ++i) out << (i ? ", " : " ") << s.tie_group[i];
    out << ")\n";
    for (const auto& key : s.matrix_keys()) {
        const auto& m = s.matrix(key);
        out << "  " << key << ": ";
        if (m.fully_judged()) {
            const auto r = consistency(m);
            out << "CR " << format_score(r.cr) << (r.acceptable ? "" : " (above 0.10)");
            if (s.overridden(key)) out << " [override]";
        } else {
            out << "incomplete";
        }
        out << "\n";
    }
    if (s.result) {
        out << "ranking:\n";
        for (std::size_t i = 0; i < s.result->ranking.size(); ++i) {
            const auto& r = s.result->ranking[i];
            out << "  " << (i + 1) << ". case " << r.case_id << "  " << format_score(r.score)
                << "\n";
        }
    }
    return out.str();
}

struct Context {
    fs::path register_path = "risk-register.json";
    std::string actor = "cli";
    bool json_mode = false;
    std::ostream* out = nullptr;

    void emit(const json& as_json, const std::string& text) const {
        if (json_mode) {
            *out << as_json.dump(2) << "\n";
        } else {
            *out << text;
            if (!text.empty() && text.back() != '\n') *out << "\n";
        }
    }

    Register load() const { return load_file(register_path); }

    // One mutating command: lock, load, run one workbench operation, persist.
    template <typename F>
    void mutate(F&& f) const {
        FileLock lock(register_path);
        Register reg = load();
        const auto revision = reg.revision;
        const auto path = register_path;
        Workbench wb(std::move(reg), now_utc, [path](const Register& r) { save_file(r, path); });
        f(wb, revision);
    }
};

// ---------------------------------------------------------------------------

struct AddArgs {
    std::string where, asset, type, desc, consequence, doc;
    CaseId id = 0;
};

struct AssessArgs {
    std::string id, vuln, threat, agent, impact, likelihood, severity, doc;
};

struct EvaluateArgs {
    std::string id, decision, solution, doc;
};

struct TreatArgs {
    std::string id, validation, doc;
    std::vector<std::string> actions, controls;
};

struct MonitorArgs {
    std::string id, observation, effective, reviewed_by, doc;
};

ActionItem parse_action(const std::string& text) {
    const auto parts = split(text, '|');
    if (parts.size() != 3) {
        throw Error("InvalidPayload", "actions are \"text|owner|YYYY-MM-DD\", got '" + text + "'");
    }
    return {parts[0], parts[1], parse_date(trim(parts[2]))};
}

json step_result(const Committed<RiskCase>& done) {
    return {{"revision", done.reg->revision}, {"case", case_view(*done.reg, done.value)}};
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx;
    ctx.out = &out;
    if (const char* env = std::getenv("RISK_REGISTER"); env && *env) ctx.register_path = env;

    CLI::App app{"Risk register workbench: profile, assess, evaluate, treat and monitor risks",
                 "risk"};
    app.require_subcommand(1);
    std::string register_option;
    app.add_option("--register", register_option,
                   "Register file (default ./risk-register.json, or $RISK_REGISTER)");
    app.add_flag("--json", ctx.json_mode, "Print API-shaped JSON");
    app.add_option("--actor", ctx.actor, "Name recorded in the audit log");

    std::function<void()> action;

    // init
    auto* init = app.add_subcommand("init", "Create a register file");
    bool seed = false, force = false;
    init->add_flag("--seed-paper", seed, "Start from the seven-case postal-drone case study");
    init->add_flag("--force", force, "Overwrite an existing register");
    init->callback([&] {
        action = [&] {
            if (fs::exists(ctx.register_path) && !force) {
                throw Error("RegisterExists",
                            ctx.register_path.string() + " already exists (use --force)",
                            {{"path", ctx.register_path.string()}});
            }
            const Register reg = seed ? seed_case_study() : Register{};
            save_file(reg, ctx.register_path);
            ctx.emit({{"revision", reg.revision}, {"cases", reg.cases.size()}},
                     "initialised " + ctx.register_path.string() + " (" +
                         std::to_string(reg.cases.size()) + " cases, revision " +
                         std::to_string(reg.revision) + ")");
        };
    });

    // iteration open / close
    auto* iteration = app.add_subcommand("iteration", "Open or close an iteration");
    iteration->require_subcommand(1);
    auto* it_open = iteration->add_subcommand("open", "Open the next iteration");
    std::uint32_t cadence = 0;
    it_open->add_option("--cadence", cadence, "Cadence in days (14 to 28 recommended)")->required();
    it_open->callback([&] {
        action = [&] {
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.open_iteration(rev, ctx.actor, cadence);
                std::string text = "opened iteration " + std::to_string(done.value.iteration.index);
                for (const auto& w : done.value.warnings) text += "\nwarning: " + w;
                ctx.emit({{"revision", done.reg->revision},
                          {"iteration", to_json(done.value.iteration)},
                          {"warnings", done.value.warnings}},
                         text);
            });
        };
    });
    auto* it_close = iteration->add_subcommand("close", "Close the open iteration");
    std::vector<std::string> close_overrides;
    it_close->add_option("--override", close_overrides,
                         "Carry an incomplete case over: <id>:<justification>");
    it_close->callback([&] {
        action = [&] {
            std::vector<CloseOverride> overrides;
            for (const auto& o : close_overrides) {
                const auto colon = o.find(':');
                if (colon == std::string::npos) {
                    throw Error("InvalidOverride", "overrides are <id>:<justification>, got '" + o + "'");
                }
                overrides.push_back({parse_case_id(o.substr(0, colon)), o.substr(colon + 1)});
            }
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.close_iteration(rev, ctx.actor, overrides);
                std::string text = "closed iteration " + std::to_string(done.value.iteration.index);
                for (const auto& c : done.value.iteration.carryover) {
                    text += "\ncarryover case " + std::to_string(c.case_id) + " resumes at " +
                            std::string(display_name(c.resume_step)) + ": " + c.justification;
                }
                ctx.emit({{"revision", done.reg->revision},
                          {"iteration", to_json(done.value.iteration)}},
                         text);
            });
        };
    });

    // add
    auto* add = app.add_subcommand("add", "Create a case and record its profile");
    AddArgs add_args;
    add->add_option("--id", add_args.id, "Case number (default: next free)");
    add->add_option("--where", add_args.where, "Locus: A, G or A/G")->required();
    add->add_option("--asset", add_args.asset, "Asset at risk");
    add->add_option("--type", add_args.type, "Risk type: E, I or E/I")->required();
    add->add_option("--desc", add_args.desc, "Risk description");
    add->add_option("--consequence", add_args.consequence, "Consequence");
    add->add_option("--doc", add_args.doc, "Step documentation");
    add->callback([&] {
        action = [&] {
            RiskProfile p;
            p.case_id = add_args.id;
            p.locus = parse_locus(add_args.where);
            p.asset = add_args.asset;
            p.risk_type = parse_risk_type(add_args.type);
            p.description = add_args.desc;
            p.consequence = add_args.consequence;
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.add_case(rev, ctx.actor, p, add_args.doc);
                ctx.emit({{"revision", done.reg->revision},
                          {"case", case_view(*done.reg, done.reg->get_case(done.value))}},
                         "case " + std::to_string(done.value) + " added");
            });
        };
    });

    // assess
    auto* assess = app.add_subcommand("assess", "Record the assessment step; prints the rating");
    AssessArgs as;
    assess->add_option("id", as.id, "Case number")->required();
    assess->add_option("--vuln", as.vuln, "Vulnerability");
    assess->add_option("--threat", as.threat, "Threat");
    assess->add_option("--agent", as.agent, "Threat agent (source)");
    assess->add_option("--impact", as.impact, "Impacted properties, e.g. CIAa")->required();
    assess->add_option("--likelihood", as.likelihood, "N, L, M, H or VH")->required();
    assess->add_option("--severity", as.severity, "L, M, H or C")->required();
    assess->add_option("--doc", as.doc, "Step documentation");
    assess->callback([&] {
        action = [&] {
            RiskAssessment a;
            a.vulnerability = as.vuln;
            a.threat = as.threat;
            a.threat_agent = as.agent;
            a.impact = parse_impact(as.impact);
            a.likelihood = parse_likelihood(as.likelihood);
            a.severity = parse_severity(as.severity);
            const CaseId id = parse_case_id(as.id);
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.record_step(rev, ctx.actor, id, a, as.doc);
                ctx.emit(step_result(done), std::string(to_code(done.value.assessment()->rating)));
            });
        };
    });

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Record the evaluation step");
    EvaluateArgs ev;
    evaluate->add_option("id", ev.id, "Case number")->required();
    evaluate->add_option("--decision", ev.decision, "accept, avoid, transfer or mitigate")
        ->required();
    evaluate->add_option("--solution", ev.solution, "Chosen solution");
    evaluate->add_option("--doc", ev.doc, "Step documentation");
    evaluate->callback([&] {
        action = [&] {
            RiskEvaluation e{parse_decision(ev.decision), ev.solution};
            const CaseId id = parse_case_id(ev.id);
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.record_step(rev, ctx.actor, id, e, ev.doc);
                ctx.emit(step_result(done), "case " + std::to_string(id) + ": " +
                                                std::string(to_code(e.decision)));
            });
        };
    });

    // treat
    auto* treat = app.add_subcommand("treat", "Record the treatment plan");
    TreatArgs tr;
    treat->add_option("id", tr.id, "Case number")->required();
    treat->add_option("--action", tr.actions, "Mitigation action: \"text|owner|YYYY-MM-DD\"");
    treat->add_option("--control", tr.controls, "Control put in place");
    treat->add_option("--validation", tr.validation, "How the treatment will be validated");
    treat->add_option("--doc", tr.doc, "Step documentation");
    treat->callback([&] {
        action = [&] {
            TreatmentPlan plan;
            for (const auto& a : tr.actions) plan.mitigation_actions.push_back(parse_action(a));
            plan.controls = tr.controls;
            plan.validation_note = tr.validation;
            const CaseId id = parse_case_id(tr.id);
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.record_step(rev, ctx.actor, id, plan, tr.doc);
                ctx.emit(step_result(done), "case " + std::to_string(id) + ": treatment recorded");
            });
        };
    });

    // monitor
    auto* monitor = app.add_subcommand("monitor", "Record a monitoring review");
    MonitorArgs mo;
    monitor->add_option("id", mo.id, "Case number")->required();
    monitor->add_option("--observation", mo.observation, "What was observed");
    monitor->add_option("--effective", mo.effective, "effective, ineffective or inconclusive")
        ->required();
    monitor->add_option("--reviewed-by", mo.reviewed_by, "Reviewer");
    monitor->add_option("--doc", mo.doc, "Step documentation");
    monitor->callback([&] {
        action = [&] {
            MonitoringRecord m{mo.observation, parse_effectiveness(mo.effective), mo.reviewed_by};
            const CaseId id = parse_case_id(mo.id);
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.record_step(rev, ctx.actor, id, m, mo.doc);
                ctx.emit(step_result(done), "case " + std::to_string(id) + ": monitoring recorded");
            });
        };
    });

    // rate
    auto* rate_cmd = app.add_subcommand("rate", "Look up a rating in the active matrix");
    std::string rate_l, rate_s;
    rate_cmd->add_option("--likelihood", rate_l, "N, L, M, H or VH")->required();
    rate_cmd->add_option("--severity", rate_s, "L, M, H or C")->required();
    rate_cmd->callback([&] {
        action = [&] {
            const RatingMatrix m = fs::exists(ctx.register_path) ? ctx.load().matrix : default_matrix();
            const Rating r = rate(m, parse_likelihood(rate_l), parse_severity(rate_s));
            ctx.emit({{"rating", to_code(r)}}, std::string(to_code(r)));
        };
    });

    // matrix
    auto* matrix = app.add_subcommand("matrix", "Show, replace or check the rating matrix");
    matrix->require_subcommand(1);
    auto* m_show = matrix->add_subcommand("show", "Print the active matrix");
    m_show->callback([&] {
        action = [&] {
            const Register reg = ctx.load();
            ctx.emit({{"revision", reg.revision}, {"matrix", to_json(reg.matrix)}},
                     matrix_markdown(reg.matrix));
        };
    });
    std::string matrix_file;
    auto* m_set = matrix->add_subcommand("set", "Install a matrix and re-rate every case");
    m_set->add_option("file", matrix_file, "Matrix JSON file")->required();
    m_set->callback([&] {
        action = [&] {
            const RatingMatrix m = read_matrix_file(matrix_file);
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.set_matrix(rev, ctx.actor, m);
                json changes = json::array();
                std::string text = "installed matrix '" + done.reg->matrix.name() + "' version " +
                                   std::to_string(done.reg->matrix.version());
                for (const auto& c : done.value) {
                    changes.push_back({{"case_id", c.case_id},
                                       {"before", to_code(c.before)},
                                       {"after", to_code(c.after)}});
                    text += "\ncase " + std::to_string(c.case_id) + ": " +
                            std::string(to_code(c.before)) + " -> " + std::string(to_code(c.after));
                }
                ctx.emit({{"revision", done.reg->revision},
                          {"matrix", to_json(done.reg->matrix)},
                          {"changes", std::move(changes)}},
                         text);
            });
        };
    });
    auto* m_validate = matrix->add_subcommand("validate", "Check a matrix file");
    m_validate->add_option("file", matrix_file, "Matrix JSON file")->required();
    m_validate->callback([&] {
        action = [&] {
            const RatingMatrix m = read_matrix_file(matrix_file);
            require_valid(m);
            ctx.emit({{"valid", true}}, "valid");
        };
    });

    // ties
    auto* ties = app.add_subcommand("ties", "List groups of cases sharing a rating");
    std::vector<std::string> tie_levels{"C"};
    ties->add_option("--levels", tie_levels, "Rating levels, e.g. C,H")->delimiter(',');
    ties->callback([&] {
        action = [&] {
            std::vector<Rating> levels;
            for (const auto& l : tie_levels) levels.push_back(parse_rating(l));
            const Register reg = ctx.load();
            json groups = json::array();
            std::string text;
            for (const auto& g : find_tie_groups(reg.cases, levels)) {
                groups.push_back(to_json(g));
                text += std::string(to_code(g.level)) + ":";
                for (std::size_t i = 0; i < g.case_ids.size(); ++i) {
                    text += (i ? ", " : " ") + std::to_string(g.case_ids[i]);
                }
                text += "\n";
            }
            if (text.empty()) text = "no tie groups";
            ctx.emit({{"revision", reg.revision}, {"groups", std::move(groups)}}, text);
        };
    });

    // ahp
    auto* ahp = app.add_subcommand("ahp", "Break rating ties with pairwise comparisons");
    ahp->require_subcommand(1);
    auto* ahp_new = ahp->add_subcommand("new", "Open a session for a tie group");
    std::vector<std::string> group_ids, criteria;
    ahp_new->add_option("--group", group_ids, "Case numbers, e.g. 3,7")->delimiter(',')->required();
    ahp_new->add_option("--criteria", criteria, "Criterion labels, e.g. cost,impact")
        ->delimiter(',')
        ->required();
    ahp_new->callback([&] {
        action = [&] {
            std::vector<CaseId> ids;
            for (const auto& g : group_ids) ids.push_back(parse_case_id(trim(g)));
            std::vector<std::string> labels;
            for (const auto& c : criteria) labels.push_back(trim(c));
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.create_session(rev, ctx.actor, ids, labels);
                ctx.emit({{"revision", done.reg->revision}, {"session", to_json(done.value)}},
                         session_text(done.value));
            });
        };
    });
    auto* ahp_judge = ahp->add_subcommand("judge", "Enter one pairwise judgment");
    std::uint32_t session_id = 0;
    std::string judge_matrix, judge_i, judge_j, judge_value;
    ahp_judge->add_option("session", session_id, "Session id")->required();
    ahp_judge->add_option("matrix", judge_matrix, "\"criteria\" or a criterion label")->required();
    ahp_judge->add_option("i", judge_i, "Row item (label or 1-based index)")->required();
    ahp_judge->add_option("j", judge_j, "Column item (label or 1-based index)")->required();
    ahp_judge->add_option("value", judge_value, "Saaty judgment, e.g. 3 or 1/5")->required();
    ahp_judge->callback([&] {
        action = [&] {
            const Ratio value = parse_ratio(judge_value);
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.judge(rev, ctx.actor, session_id, judge_matrix, judge_i, judge_j,
                                     value);
                ctx.emit({{"revision", done.reg->revision}, {"session", to_json(done.value)}},
                         session_text(done.value));
            });
        };
    });
    auto* ahp_override = ahp->add_subcommand("override", "Accept a matrix above CR 0.10");
    std::string justification;
    ahp_override->add_option("session", session_id, "Session id")->required();
    ahp_override->add_option("matrix", judge_matrix, "\"criteria\" or a criterion label")
        ->required();
    ahp_override->add_option("--justification", justification, "Why the judgments stand")
        ->required();
    ahp_override->callback([&] {
        action = [&] {
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.override_consistency(rev, ctx.actor, session_id, judge_matrix,
                                                    justification);
                ctx.emit({{"revision", done.reg->revision}, {"session", to_json(done.value)}},
                         session_text(done.value));
            });
        };
    });
    auto* ahp_complete = ahp->add_subcommand("complete", "Rank the tie group");
    ahp_complete->add_option("session", session_id, "Session id")->required();
    ahp_complete->callback([&] {
        action = [&] {
            ctx.mutate([&](Workbench& wb, std::uint64_t rev) {
                auto done = wb.complete_session(rev, ctx.actor, session_id);
                ctx.emit({{"revision", done.reg->revision}, {"session", to_json(done.value)}},
                         session_text(done.value));
            });
        };
    });
    auto* ahp_show = ahp->add_subcommand("show", "Print a session");
    ahp_show->add_option("session", session_id, "Session id")->required();
    ahp_show->callback([&] {
        action = [&] {
            const Register reg = ctx.load();
            const auto& s = reg.get_session(session_id);
            ctx.emit({{"revision", reg.revision}, {"session", to_json(s)}}, session_text(s));
        };
    });

    // report
    auto* report = app.add_subcommand("report", "Render register tables");
    std::string report_kind, report_format = "md", report_out;
    std::uint32_t report_iteration = 0;
    report->add_option("kind", report_kind, "profile, assessment, evaluation, heatmap or summary")
        ->required()
        ->check(CLI::IsMember({"profile", "assessment", "evaluation", "heatmap", "summary"}));
    report->add_option("--format", report_format, "md, csv or json")
        ->check(CLI::IsMember({"md", "csv", "json"}));
    report->add_option("--out", report_out, "Write to a file instead of stdout");
    report->add_option("--iteration", report_iteration, "Iteration for the summary (default: latest)");
    report->callback([&] {
        action = [&] {
            const Register reg = ctx.load();
            std::string md, csv;
            json as_json;
            if (report_kind == "heatmap") {
                const auto h = heatmap(reg);
                md = h.to_markdown();
                csv = h.to_csv();
                as_json = h.to_json();
            } else if (report_kind == "summary") {
                const auto index = report_iteration
                                       ? report_iteration
                                       : static_cast<std::uint32_t>(reg.iterations.size());
                const auto s = iteration_summary(reg, index);
                md = csv = s.to_markdown();
                as_json = s.to_json();
            } else {
                const Table t = report_kind == "profile"      ? profile_table(reg)
                                : report_kind == "assessment" ? assessment_table(reg)
                                                              : evaluation_table(reg);
                md = t.to_markdown();
                csv = t.to_csv();
                as_json = t.to_json();
            }
            const bool as_json_output = ctx.json_mode || report_format == "json";
            const std::string body =
                as_json_output ? as_json.dump(2) + "\n" : report_format == "csv" ? csv : md;
            if (report_out.empty()) {
                out << body;
            } else {
                std::ofstream file(report_out, std::ios::binary);
                if (!(file << body)) throw Error("WriteFailed", "cannot write " + report_out);
            }
        };
    });

    // audit
    auto* audit = app.add_subcommand("audit", "Audit log operations");
    audit->require_subcommand(1);
    auto* verify = audit->add_subcommand("verify", "Check the audit hash chain");
    verify->callback([&] {
        action = [&] {
            const Register reg = ctx.load();
            const std::string head =
                reg.audit_log.empty() ? std::string(kGenesisHash) : reg.audit_log.back().entry_hash;
            ctx.emit({{"ok", true},
                      {"entries", reg.audit_log.size()},
                      {"revision", reg.revision},
                      {"head", head}},
                     "audit chain OK: " + std::to_string(reg.audit_log.size()) +
                         " entries, head " + head.substr(0, 16));
        };
    });

    // status
    auto* status = app.add_subcommand("status", "Show where a case stands in the cycle");
    std::string status_id;
    status->add_option("id", status_id, "Case number")->required();
    status->callback([&] {
        action = [&] {
            const Register reg = ctx.load();
            const CaseId id = parse_case_id(status_id);
            const auto s = case_status(reg, id);
            ctx.emit({{"revision", reg.revision}, {"case", case_view(reg, reg.get_case(id))}},
                     "case " + std::to_string(id) + " (iteration " + std::to_string(s.iteration) +
                         "): " + s.describe());
        };
    });

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
    std::string bind = "127.0.0.1:8080", static_dir;
    serve_cmd->add_option("--bind", bind, "host:port");
    serve_cmd->add_option("--static", static_dir, "Directory of web UI assets to serve at /");
    serve_cmd->callback([&] {
        action = [&] {
            ServeOptions options;
            options.register_path = ctx.register_path;
            parse_bind(bind, options);
            if (!static_dir.empty()) options.static_dir = static_dir;
            serve(options);
        };
    });

    std::vector<const char*> argv{"risk"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    if (!register_option.empty()) ctx.register_path = register_option;

    try {
        if (action) action();
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
        const auto& details = e.details();
        if (details.contains("violations")) {
            for (const auto& v : details["violations"]) {
                err << "  " << v.value("kind", "") << ": " << v.value("message", "") << "\n";
            }
        }
        if (ctx.json_mode) err << e.to_json().dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: InternalError: " << e.what() << "\n";
        return 1;
    }
}

} // namespace riskflow
