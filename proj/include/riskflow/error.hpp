#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace riskflow {

/// Failure raised by every module. `code` is the stable identifier shared by
/// the CLI, the HTTP API and the register file (e.g. "StepOrderViolation").
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message,
          nlohmann::json details = nlohmann::json::object())
        : std::runtime_error(message), code_(std::move(code)), details_(std::move(details)) {}

    const std::string& code() const noexcept { return code_; }
    const nlohmann::json& details() const noexcept { return details_; }

    nlohmann::json to_json() const {
        return {{"code", code_}, {"message", what()}, {"details", details_}};
    }

private:
    std::string code_;
    nlohmann::json details_;
};

} // namespace riskflow
