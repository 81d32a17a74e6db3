// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/item.hpp"
#include "srg/loop.hpp"

namespace httplib {
class Server;
}

namespace srg {

struct ServiceConfig {
    std::string token_env = "SRGRADE_TOKEN";  ///< bearer token for instructor views
    std::chrono::seconds idle_timeout{3600};
    std::size_t max_nodes = 256;
    std::size_t max_edges = 1024;
    std::size_t max_body_bytes = 1 << 20;
    int overlay_width = 1000;   ///< default canvas for feedback overlays
    int overlay_height = 1000;
    std::optional<std::filesystem::path> journal;
    std::optional<std::filesystem::path> static_dir;
    std::function<std::chrono::steady_clock::time_point()> clock = [] { return std::chrono::steady_clock::now(); };
};

/// Transport-neutral request, so routes can be exercised without sockets.
struct ApiRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string authorization;  ///< raw Authorization header
    std::string body;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// Revision-loop state held by the service between steps. The session's
/// iterations are the scoring rounds so far; creating a session scores
/// nothing.
struct Session {
    std::string session_id;
    ItemPtr item;
    Srg current;
    std::vector<LoopIteration> iterations;
    std::optional<Termination> terminated_by;
    std::string created_at;
    std::string updated_at;
    std::chrono::steady_clock::time_point last_used;
    std::mutex mu;

    std::size_t next_t() const noexcept { return iterations.size(); }
};

nlohmann::json session_to_json(const Session& s);

class Service {
public:
    Service(std::vector<ItemPtr> items, ServiceConfig config);
    ~Service();

    ApiResponse handle(const ApiRequest& request);

    /// Registers every route (and the static mount, if configured).
    void bind(httplib::Server& server);

    /// Drops sessions idle for longer than the configured timeout.
    std::size_t expire_idle();
    std::size_t session_count() const;

private:
    ApiResponse list_items() const;
    ApiResponse get_item(const std::string& id, const ApiRequest& req) const;
    ApiResponse get_ontology(const std::string& id) const;
    ApiResponse score(const std::string& id, const ApiRequest& req) const;
    ApiResponse feedback(const std::string& id, const ApiRequest& req) const;
    ApiResponse create_session(const ApiRequest& req);
    ApiResponse step(const std::string& sid, const ApiRequest& req);
    ApiResponse trace(const std::string& sid);

    ItemPtr find_item(const std::string& id) const;
    std::shared_ptr<Session> find_session(const std::string& sid);
    Srg read_student(const nlohmann::json& doc, const ItemSpec& item) const;
    bool authorized(const ApiRequest& req) const;
    void journal(const nlohmann::json& event);

    std::map<std::string, ItemPtr, std::less<>> items_;
    ServiceConfig config_;
    mutable std::mutex sessions_mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex journal_mu_;
    std::ofstream journal_;
};

/// Loads the pack, binds 0.0.0.0:port and blocks until the server stops.
/// Returns a process exit code.
int run_service(const std::filesystem::path& pack, const std::string& host, int port, const ServiceConfig& config);

}  // namespace srg
