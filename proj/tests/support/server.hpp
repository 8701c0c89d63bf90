#pragma once

#include <httplib.h>

#include <memory>
#include <thread>

#include "riskflow/service.hpp"
#include "riskflow/store.hpp"
#include "riskflow/workbench.hpp"

namespace riskflow::testkit {

/// API server on an ephemeral loopback port for the lifetime of the object.
class LiveServer {
public:
    explicit LiveServer(Register initial, RegisterHandle::Clock clock = now_utc)
        : workbench_(std::make_shared<Workbench>(std::move(initial), std::move(clock))) {
        install_routes(server_, workbench_);
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~LiveServer() {
        server_.stop();
        thread_.join();
    }

    LiveServer(const LiveServer&) = delete;
    LiveServer& operator=(const LiveServer&) = delete;

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_connection_timeout(5);
        c.set_read_timeout(10);
        return c;
    }

    const Workbench& workbench() const { return *workbench_; }
    int port() const { return port_; }

private:
    std::shared_ptr<Workbench> workbench_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

inline nlohmann::json body_of(const httplib::Result& r) { return nlohmann::json::parse(r->body); }

/// Register JSON with clock-dependent fields (and the hashes over them) removed.
inline nlohmann::json without_clock(nlohmann::json j) {
    if (j.is_object()) {
        for (const char* key : {"timestamp", "opened_at", "closed_at", "entry_hash", "prev_hash"}) {
            j.erase(key);
        }
        for (auto& [k, v] : j.items()) v = without_clock(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = without_clock(v);
    }
    return j;
}

} // namespace riskflow::testkit
