#include "riskflow/service.hpp"

#include <httplib.h>

#include <charconv>
#include <iostream>

#include "riskflow/error.hpp"
#include "riskflow/report.hpp"
#include "riskflow/store.hpp"

namespace riskflow {

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const Error& e) {
    json body = e.to_json();
    if (e.code() == "StaleRevision") body["revision"] = e.details().value("expected", json());
    send_json(res, http_status(e.code()), body);
}

json parse_body(const httplib::Request& req) {
    try {
        json body = json::parse(req.body);
        if (!body.is_object()) throw Error("BadRequest", "request body must be a JSON object");
        return body;
    } catch (const json::parse_error& e) {
        throw Error("BadRequest", std::string("malformed JSON body: ") + e.what());
    }
}

std::uint64_t body_revision(const json& body) {
    auto it = body.find("revision");
    if (it == body.end() || !it->is_number_unsigned()) {
        throw Error("BadRequest", "mutating requests must carry the last-seen \"revision\"");
    }
    return it->get<std::uint64_t>();
}

std::string body_string(const json& body, const char* key, std::string fallback = {}) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) return fallback;
    if (!it->is_string()) throw Error("BadRequest", std::string("\"") + key + "\" must be a string");
    return it->get<std::string>();
}

std::string body_actor(const json& body) { return body_string(body, "actor", "api"); }

template <typename T>
T parse_number(const std::string& text, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error("BadRequest", std::string("invalid ") + what + ": '" + text + "'");
    }
    return value;
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

// Every handler funnels module errors into {code, message, details}.
Handler guarded(Handler inner) {
    return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
        try {
            inner(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const std::exception& e) {
            send_error(res, Error("InternalError", e.what()));
        }
    };
}

} // namespace

json case_view(const Register& reg, const RiskCase& c) {
    json out = to_json(c);
    const auto status = case_status(reg, c.case_id);
    out["status"] = status.describe();
    out["current_step"] = status.current ? json(to_code(*status.current)) : json(nullptr);
    out["next_step"] = status.next ? json(to_code(*status.next)) : json(nullptr);
    out["rating"] = c.assessment() ? json(to_code(c.assessment()->rating)) : json(nullptr);
    return out;
}

namespace {

std::vector<Rating> parse_levels(const std::string& text) {
    std::vector<Rating> levels;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto token = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
        if (!is_blank(token)) levels.push_back(parse_rating(trim(token)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return levels;
}

void send_report(httplib::Response& res, const std::string& format, const json& as_json,
                 const std::string& csv, const std::string& md) {
    if (format == "json") {
        send_json(res, 200, as_json);
    } else if (format == "csv") {
        res.set_content(csv, "text/csv; charset=utf-8");
    } else if (format == "md") {
        res.set_content(md, "text/markdown; charset=utf-8");
    } else {
        throw Error("BadRequest", "format must be json, csv or md");
    }
}

} // namespace

int http_status(const std::string& code) {
    if (code == "StaleRevision") return 409;
    if (code == "UnknownCase" || code == "UnknownSession" || code == "UnknownMatrix" ||
        code == "UnknownIteration" || code == "NotFound") {
        return 404;
    }
    if (code == "BadRequest" || code == "ParseError") return 400;
    if (code == "InternalError" || code == "WriteFailed") return 500;
    return 422;
}

void install_routes(httplib::Server& server, std::shared_ptr<Workbench> wb) {
    const std::string base = "/api/v1";

    server.Get(base + "/register", guarded([wb](const auto&, auto& res) {
                   send_json(res, 200, to_json(*wb->snapshot()));
               }));

    server.Get(base + "/cases", guarded([wb](const auto&, auto& res) {
                   const auto reg = wb->snapshot();
                   json cases = json::array();
                   for (const auto& c : reg->cases) cases.push_back(case_view(*reg, c));
                   send_json(res, 200, {{"revision", reg->revision}, {"cases", std::move(cases)}});
               }));

    server.Get(base + R"(/cases/(\d+))", guarded([wb](const auto& req, auto& res) {
                   const auto reg = wb->snapshot();
                   const auto id = parse_number<CaseId>(req.matches[1], "case id");
                   send_json(res, 200,
                             {{"revision", reg->revision},
                              {"case", case_view(*reg, reg->get_case(id))}});
               }));

    server.Post(base + "/cases", guarded([wb](const auto& req, auto& res) {
                    const json body = parse_body(req);
                    if (!body.contains("profile")) throw Error("BadRequest", "missing \"profile\"");
                    const auto profile = profile_from_json(body["profile"], "/profile");
                    auto done = wb->add_case(body_revision(body), body_actor(body), profile,
                                             body_string(body, "documentation"));
                    send_json(res, 201,
                              {{"revision", done.reg->revision},
                               {"case", case_view(*done.reg, done.reg->get_case(done.value))}});
                }));

    server.Post(base + R"(/cases/(\d+)/steps/(\w+))",
                guarded([wb](const auto& req, auto& res) {
                    const json body = parse_body(req);
                    const auto id = parse_number<CaseId>(req.matches[1], "case id");
                    const Step step = parse_step(req.matches[2].str());
                    if (step == Step::Profile) {
                        throw Error("BadRequest", "profiles are recorded via POST /cases");
                    }
                    if (!body.contains("payload")) throw Error("BadRequest", "missing \"payload\"");
                    auto payload = payload_from_json(step, body["payload"], "/payload");
                    auto done = wb->record_step(body_revision(body), body_actor(body), id,
                                                std::move(payload),
                                                body_string(body, "documentation"));
                    send_json(res, 200,
                              {{"revision", done.reg->revision},
                               {"case", case_view(*done.reg, done.value)}});
                }));

    server.Get(base + "/matrix", guarded([wb](const auto&, auto& res) {
                   const auto reg = wb->snapshot();
                   send_json(res, 200, {{"revision", reg->revision}, {"matrix", to_json(reg->matrix)}});
               }));

    server.Put(base + "/matrix", guarded([wb](const auto& req, auto& res) {
                   const json body = parse_body(req);
                   if (!body.contains("matrix")) throw Error("BadRequest", "missing \"matrix\"");
                   const auto matrix = matrix_from_json(body["matrix"], "/matrix");
                   auto done = wb->set_matrix(body_revision(body), body_actor(body), matrix);
                   json changes = json::array();
                   for (const auto& c : done.value) {
                       changes.push_back({{"case_id", c.case_id},
                                          {"before", to_code(c.before)},
                                          {"after", to_code(c.after)}});
                   }
                   send_json(res, 200,
                             {{"revision", done.reg->revision},
                              {"matrix", to_json(done.reg->matrix)},
                              {"changes", std::move(changes)}});
               }));

    server.Get(base + "/ties", guarded([wb](const auto& req, auto& res) {
                   const auto reg = wb->snapshot();
                   std::vector<Rating> levels{Rating::Critical};
                   if (req.has_param("levels")) levels = parse_levels(req.get_param_value("levels"));
                   json groups = json::array();
                   for (const auto& g : find_tie_groups(reg->cases, levels)) {
                       groups.push_back(to_json(g));
                   }
                   send_json(res, 200, {{"revision", reg->revision}, {"groups", std::move(groups)}});
               }));

    server.Get(base + "/whatif", guarded([wb](const auto& req, auto& res) {
                   const auto reg = wb->snapshot();
                   for (const char* p : {"case", "likelihood", "severity"}) {
                       if (!req.has_param(p)) {
                           throw Error("BadRequest", std::string("missing query parameter ") + p);
                       }
                   }
                   const auto id = parse_number<CaseId>(req.get_param_value("case"), "case id");
                   const auto l = parse_likelihood(req.get_param_value("likelihood"));
                   const auto s = parse_severity(req.get_param_value("severity"));
                   const Rating r = what_if(*reg, id, l, s);
                   const auto* current = reg->get_case(id).assessment();
                   send_json(res, 200,
                             {{"revision", reg->revision},
                              {"case_id", id},
                              {"likelihood", to_code(l)},
                              {"severity", to_code(s)},
                              {"rating", to_code(r)},
                              {"current", current ? json(to_code(current->rating)) : json(nullptr)}});
               }));

    server.Post(base + "/ahp/sessions", guarded([wb](const auto& req, auto& res) {
                    const json body = parse_body(req);
                    std::vector<CaseId> group;
                    std::vector<std::string> criteria;
                    try {
                        group = body.at("group").get<std::vector<CaseId>>();
                        criteria = body.at("criteria").get<std::vector<std::string>>();
                    } catch (const json::exception&) {
                        throw Error("BadRequest",
                                    "expected \"group\" (case ids) and \"criteria\" (labels)");
                    }
                    auto done = wb->create_session(body_revision(body), body_actor(body), group,
                                                   criteria);
                    send_json(res, 201,
                              {{"revision", done.reg->revision}, {"session", to_json(done.value)}});
                }));

    server.Get(base + R"(/ahp/sessions/(\d+))", guarded([wb](const auto& req, auto& res) {
                   const auto reg = wb->snapshot();
                   const auto id = parse_number<std::uint32_t>(req.matches[1], "session id");
                   const AhpSession& s = reg->get_session(id);
                   json diagnostics = json::array();
                   for (const auto& key : s.matrix_keys()) {
                       const auto& m = s.matrix(key);
                       json item{{"matrix", key}, {"fully_judged", m.fully_judged()},
                                 {"overridden", s.overridden(key)}};
                       if (m.fully_judged()) item["consistency"] = to_json(consistency(m));
                       diagnostics.push_back(std::move(item));
                   }
                   send_json(res, 200,
                             {{"revision", reg->revision},
                              {"session", to_json(s)},
                              {"diagnostics", std::move(diagnostics)}});
               }));

    server.Put(base + R"(/ahp/sessions/(\d+)/judgments)",
               guarded([wb](const auto& req, auto& res) {
                   const json body = parse_body(req);
                   const auto id = parse_number<std::uint32_t>(req.matches[1], "session id");
                   auto item_ref = [&](const char* key) -> std::string {
                       auto it = body.find(key);
                       if (it == body.end()) throw Error("BadRequest", std::string("missing ") + key);
                       if (it->is_string()) return it->get<std::string>();
                       if (it->is_number_unsigned()) return std::to_string(it->get<std::uint64_t>());
                       throw Error("BadRequest", std::string(key) + " must be a label or 1-based index");
                   };
                   const json& value = body.value("value", json());
                   Ratio ratio;
                   if (value.is_string()) {
                       ratio = parse_ratio(value.get<std::string>());
                   } else if (value.is_number_unsigned()) {
                       ratio = {static_cast<std::int32_t>(value.get<std::uint32_t>()), 1};
                   } else {
                       throw Error("BadRequest", "\"value\" must be \"p/q\" or an integer");
                   }
                   auto done = wb->judge(body_revision(body), body_actor(body), id,
                                         body_string(body, "matrix", "criteria"), item_ref("i"),
                                         item_ref("j"), ratio);
                   send_json(res, 200,
                             {{"revision", done.reg->revision}, {"session", to_json(done.value)}});
               }));

    server.Post(base + R"(/ahp/sessions/(\d+)/overrides)",
                guarded([wb](const auto& req, auto& res) {
                    const json body = parse_body(req);
                    const auto id = parse_number<std::uint32_t>(req.matches[1], "session id");
                    auto done = wb->override_consistency(
                        body_revision(body), body_actor(body), id,
                        body_string(body, "matrix", "criteria"),
                        body_string(body, "justification"));
                    send_json(res, 200,
                              {{"revision", done.reg->revision}, {"session", to_json(done.value)}});
                }));

    server.Post(base + R"(/ahp/sessions/(\d+)/complete)",
                guarded([wb](const auto& req, auto& res) {
                    const json body = parse_body(req);
                    const auto id = parse_number<std::uint32_t>(req.matches[1], "session id");
                    auto done = wb->complete_session(body_revision(body), body_actor(body), id);
                    send_json(res, 200,
                              {{"revision", done.reg->revision}, {"session", to_json(done.value)}});
                }));

    server.Get(base + "/iterations", guarded([wb](const auto&, auto& res) {
                   const auto reg = wb->snapshot();
                   json list = json::array();
                   for (const auto& it : reg->iterations) list.push_back(to_json(it));
                   send_json(res, 200, {{"revision", reg->revision}, {"iterations", std::move(list)}});
               }));

    server.Post(base + "/iterations", guarded([wb](const auto& req, auto& res) {
                    const json body = parse_body(req);
                    const auto cadence = body.value("cadence_days", json(21));
                    if (!cadence.is_number_unsigned()) {
                        throw Error("BadRequest", "\"cadence_days\" must be a positive integer");
                    }
                    auto done = wb->open_iteration(body_revision(body), body_actor(body),
                                                   cadence.get<std::uint32_t>());
                    send_json(res, 201,
                              {{"revision", done.reg->revision},
                               {"iteration", to_json(done.value.iteration)},
                               {"warnings", done.value.warnings}});
                }));

    server.Post(base + "/iterations/close", guarded([wb](const auto& req, auto& res) {
                    const json body = parse_body(req);
                    std::vector<CloseOverride> overrides;
                    for (const auto& o : body.value("overrides", json::array())) {
                        if (!o.is_object() || !o.contains("case_id") ||
                            !o["case_id"].is_number_unsigned()) {
                            throw Error("BadRequest",
                                        "overrides are {\"case_id\", \"justification\"} objects");
                        }
                        overrides.push_back(
                            {o["case_id"].get<CaseId>(), body_string(o, "justification")});
                    }
                    auto done = wb->close_iteration(body_revision(body), body_actor(body),
                                                    std::move(overrides));
                    json cases = json::array();
                    for (const auto& c : done.value.cases) {
                        cases.push_back(
                            {{"case_id", c.case_id},
                             {"reached", c.last_step ? json(to_code(*c.last_step)) : json(nullptr)},
                             {"complete", c.complete},
                             {"justification",
                              c.justification ? json(*c.justification) : json(nullptr)}});
                    }
                    send_json(res, 200,
                              {{"revision", done.reg->revision},
                               {"iteration", to_json(done.value.iteration)},
                               {"cases", std::move(cases)}});
                }));

    server.Get(base + R"(/iterations/(\d+)/summary)", guarded([wb](const auto& req, auto& res) {
                   const auto reg = wb->snapshot();
                   const auto index = parse_number<std::uint32_t>(req.matches[1], "iteration");
                   const auto summary = iteration_summary(*reg, index);
                   const std::string format =
                       req.has_param("format") ? req.get_param_value("format") : "json";
                   send_report(res, format, summary.to_json(), summary.to_markdown(),
                               summary.to_markdown());
               }));

    server.Get(base + R"(/reports/(\w+))", guarded([wb](const auto& req, auto& res) {
                   const auto reg = wb->snapshot();
                   const std::string kind = req.matches[1];
                   const std::string format =
                       req.has_param("format") ? req.get_param_value("format") : "json";
                   if (kind == "heatmap") {
                       const auto h = heatmap(*reg);
                       send_report(res, format, h.to_json(), h.to_csv(), h.to_markdown());
                       return;
                   }
                   Table t;
                   if (kind == "profile") {
                       t = profile_table(*reg);
                   } else if (kind == "assessment") {
                       t = assessment_table(*reg);
                   } else if (kind == "evaluation") {
                       t = evaluation_table(*reg);
                   } else {
                       throw Error("NotFound", "unknown report '" + kind + "'");
                   }
                   send_report(res, format, t.to_json(), t.to_csv(), t.to_markdown());
               }));
}

void parse_bind(const std::string& bind, ServeOptions& options) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) {
        options.host = bind;
        return;
    }
    options.host = bind.substr(0, colon);
    options.port = parse_number<int>(bind.substr(colon + 1), "port");
    if (options.port <= 0 || options.port > 65535) {
        throw Error("BadRequest", "port out of range in '" + bind + "'");
    }
}

void serve(const ServeOptions& options) {
    Register initial;
    if (std::filesystem::exists(options.register_path)) {
        initial = load_file(options.register_path);
    } else {
        save_file(initial, options.register_path);
    }
    const auto path = options.register_path;
    auto wb = std::make_shared<Workbench>(std::move(initial), now_utc,
                                          [path](const Register& r) { save_file(r, path); });

    httplib::Server server;
    install_routes(server, wb);
    if (options.static_dir) {
        if (!server.set_mount_point("/", options.static_dir->string())) {
            throw Error("BadRequest", "static directory '" + options.static_dir->string() +
                                          "' does not exist");
        }
    }
    if (!server.bind_to_port(options.host, options.port)) {
        throw Error("BindFailed", "cannot bind " + options.host + ":" + std::to_string(options.port));
    }
    std::cerr << "serving " << options.register_path.string() << " on http://" << options.host
              << ":" << options.port << "/api/v1\n";
    server.listen_after_bind();
}

} // namespace riskflow
