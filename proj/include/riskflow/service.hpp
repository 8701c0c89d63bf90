#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "riskflow/workbench.hpp"

namespace httplib {
class Server;
}

namespace riskflow {

/// HTTP status for a module error code (409 stale revision, 404 unknown
/// entity, 400 malformed request, 422 otherwise).
int http_status(const std::string& code);

/// A case as served by the API: the stored record plus its step status and
/// current rating.
nlohmann::json case_view(const Register& reg, const RiskCase& c);

/// Registers the /api/v1 endpoint set on `server`.
void install_routes(httplib::Server& server, std::shared_ptr<Workbench> workbench);

struct ServeOptions {
    std::filesystem::path register_path = "risk-register.json";
    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<std::filesystem::path> static_dir;  // web UI assets mounted at "/"
};

/// Parses "host:port" (port optional, defaults to 8080).
void parse_bind(const std::string& bind, ServeOptions& options);

/// Loads (or creates) the register, persists every commit atomically and
/// blocks serving requests. Throws riskflow::Error when the register cannot
/// be loaded or the address cannot be bound.
void serve(const ServeOptions& options);

} // namespace riskflow
