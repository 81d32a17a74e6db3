// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/service.hpp"

#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>

#include <httplib.h>

#include "srg/errors.hpp"
#include "srg/timeutil.hpp"

namespace srg {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ApiResponse error(int status, std::string_view kind, const std::string& message) {
    return {status, {{"error", std::string(kind)}, {"message", message}}};
}

ApiResponse from_exception(const Error& e) {
    if (dynamic_cast<const SizeLimitExceeded*>(&e)) return error(413, e.kind(), e.what());
    return error(400, e.kind(), e.what());
}

std::vector<std::string> segments(const std::string& path) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(path);
    while (std::getline(in, part, '/')) {
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

std::string new_session_id() {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mu);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                  static_cast<unsigned long long>(rng()));
    return buf;
}

std::string now_utc() { return utc_timestamp_ms(std::chrono::system_clock::now()); }

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("request body is not JSON: ") + e.what());
    }
}

// A step or create body may be the SRG itself or wrap it under `key`.
const json& graph_member(const json& doc, std::string_view key) {
    if (doc.is_object() && doc.contains(key)) return doc.at(std::string(key));
    if (doc.is_object() && doc.contains("nodes")) return doc;
    throw SchemaError("request body has no \"" + std::string(key) + "\" graph");
}

json step_json(const LoopIteration& it, const Session& s) {
    json hints = json::array();
    for (const VisualHint& h : it.hints) hints.push_back(hint_to_json(h));
    return {{"session_id", s.session_id},
            {"t", it.t},
            {"breakdown", breakdown_to_json(it.breakdown)},
            {"hints", std::move(hints)},
            {"terminated", s.terminated_by.has_value()},
            {"terminated_by", s.terminated_by ? json(std::string(to_string(*s.terminated_by))) : json(nullptr)},
            {"next_t", s.next_t()}};
}

}  // namespace

json session_to_json(const Session& s) {
    return {{"session_id", s.session_id},
            {"item_id", s.item->item_id},
            {"t", s.next_t()},
            {"t_max", s.item->t_max},
            {"current", srg_to_json(s.current)},
            {"terminated", s.terminated_by.has_value()},
            {"terminated_by", s.terminated_by ? json(std::string(to_string(*s.terminated_by))) : json(nullptr)},
            {"created_at", s.created_at},
            {"updated_at", s.updated_at}};
}

Service::Service(std::vector<ItemPtr> items, ServiceConfig config) : config_(std::move(config)) {
    for (ItemPtr& item : items) {
        const std::string id = item->item_id;
        items_.emplace(id, std::move(item));
    }
    if (config_.journal) {
        if (config_.journal->has_parent_path()) fs::create_directories(config_.journal->parent_path());
        journal_.open(*config_.journal, std::ios::app);
        if (!journal_) throw ValueError("cannot open journal " + config_.journal->string());
    }
}

Service::~Service() = default;

ApiResponse Service::handle(const ApiRequest& req) {
    expire_idle();
    if (req.body.size() > config_.max_body_bytes) {
        return error(413, "PayloadTooLarge", "request body exceeds " + std::to_string(config_.max_body_bytes) + " bytes");
    }
    const std::vector<std::string> seg = segments(req.path);
    const std::size_t n = seg.size();
    try {
        if (n >= 2 && seg[0] == "api" && seg[1] == "items") {
            if (n == 2 && req.method == "GET") return list_items();
            if (n == 3 && req.method == "GET") return get_item(seg[2], req);
            if (n == 4 && req.method == "GET" && seg[3] == "ontology") return get_ontology(seg[2]);
            if (n == 4 && req.method == "POST" && seg[3] == "score") return score(seg[2], req);
            if (n == 4 && req.method == "POST" && seg[3] == "feedback") return feedback(seg[2], req);
        }
        if (n >= 2 && seg[0] == "api" && seg[1] == "sessions") {
            if (n == 2 && req.method == "POST") return create_session(req);
            if (n == 4 && req.method == "POST" && seg[3] == "step") return step(seg[2], req);
            if (n == 4 && req.method == "GET" && seg[3] == "trace") return trace(seg[2]);
        }
        return error(404, "NotFound", "no route for " + req.method + " " + req.path);
    } catch (const Error& e) {
        return from_exception(e);
    } catch (const std::exception& e) {
        return error(500, "InternalError", e.what());
    }
}

ItemPtr Service::find_item(const std::string& id) const {
    auto it = items_.find(id);
    return it == items_.end() ? nullptr : it->second;
}

std::shared_ptr<Session> Service::find_session(const std::string& sid) {
    std::lock_guard lock(sessions_mu_);
    auto it = sessions_.find(sid);
    return it == sessions_.end() ? nullptr : it->second;
}

bool Service::authorized(const ApiRequest& req) const {
    if (config_.token_env.empty()) return false;
    const char* token = std::getenv(config_.token_env.c_str());
    if (!token || !*token) return false;
    return req.authorization == std::string("Bearer ") + token;
}

Srg Service::read_student(const json& doc, const ItemSpec& item) const {
    if (doc.is_object()) {
        const auto count = [&](const char* key) {
            auto it = doc.find(key);
            return it != doc.end() && it->is_array() ? it->size() : std::size_t{0};
        };
        if (count("nodes") > config_.max_nodes || count("edges") > config_.max_edges) {
            throw SizeLimitExceeded("graph above the service limit of " + std::to_string(config_.max_nodes) +
                                    " nodes / " + std::to_string(config_.max_edges) + " edges");
        }
    }
    Srg g = srg_from_json(doc);
    if (g.role() != Role::Student) throw SchemaError("graph must have role \"student\"");
    if (g.item_id() != item.item_id) {
        throw SchemaError("graph belongs to item \"" + g.item_id() + "\", not \"" + item.item_id + "\"");
    }
    return g;
}

void Service::journal(const json& event) {
    if (!journal_.is_open()) return;
    std::lock_guard lock(journal_mu_);
    journal_ << event.dump() << '\n';
    journal_.flush();
}

ApiResponse Service::list_items() const {
    json out = json::array();
    for (const auto& [id, item] : items_) out.push_back(item_summary_json(*item));
    return {200, std::move(out)};
}

ApiResponse Service::get_item(const std::string& id, const ApiRequest& req) const {
    const ItemPtr item = find_item(id);
    if (!item) return error(404, "UnknownItem", "no item \"" + id + "\"");
    bool include_gold = false;
    if (auto q = req.query.find("include_gold"); q != req.query.end()) include_gold = q->second == "true";
    if (include_gold && !authorized(req)) {
        return error(401, "Unauthorized", "include_gold requires a valid bearer token");
    }
    return {200, item_to_json(*item, include_gold)};
}

ApiResponse Service::get_ontology(const std::string& id) const {
    const ItemPtr item = find_item(id);
    if (!item) return error(404, "UnknownItem", "no item \"" + id + "\"");
    return {200, ontology_to_json(item->ontology)};
}

ApiResponse Service::score(const std::string& id, const ApiRequest& req) const {
    const ItemPtr item = find_item(id);
    if (!item) return error(404, "UnknownItem", "no item \"" + id + "\"");
    const Srg student = read_student(parse_body(req.body), *item);
    return {200, breakdown_to_json(similarity(student, item->gold, item->ontology, item->scoring))};
}

ApiResponse Service::feedback(const std::string& id, const ApiRequest& req) const {
    const ItemPtr item = find_item(id);
    if (!item) return error(404, "UnknownItem", "no item \"" + id + "\"");
    int width = config_.overlay_width;
    int height = config_.overlay_height;
    try {
        if (auto q = req.query.find("width"); q != req.query.end()) width = std::stoi(q->second);
        if (auto q = req.query.find("height"); q != req.query.end()) height = std::stoi(q->second);
    } catch (const std::exception&) {
        return error(400, "ValueError", "width and height must be integers");
    }
    const Srg student = read_student(parse_body(req.body), *item);
    const Assessment a = assess(student, *item);
    return {200, {{"report", report_to_json(a.report)}, {"overlay", overlay_to_json(render_overlay(a.hints, width, height))}}};
}

ApiResponse Service::create_session(const ApiRequest& req) {
    const json body = parse_body(req.body);
    if (!body.is_object() || !body.contains("item_id") || !body["item_id"].is_string()) {
        return error(400, "SchemaError", "expected {\"item_id\", \"initial\"}");
    }
    const std::string item_id = body["item_id"].get<std::string>();
    const ItemPtr item = find_item(item_id);
    if (!item) return error(404, "UnknownItem", "no item \"" + item_id + "\"");
    Srg initial = read_student(graph_member(body, "initial"), *item);

    auto s = std::make_shared<Session>();
    s->session_id = new_session_id();
    s->item = item;
    s->current = std::move(initial);
    s->created_at = s->updated_at = now_utc();
    s->last_used = config_.clock();
    json out = session_to_json(*s);
    {
        std::lock_guard lock(sessions_mu_);
        sessions_.emplace(s->session_id, s);
    }
    journal({{"event", "create"}, {"at", s->created_at}, {"session_id", s->session_id}, {"item_id", item_id},
             {"initial", srg_to_json(s->current)}});
    return {201, std::move(out)};
}

ApiResponse Service::step(const std::string& sid, const ApiRequest& req) {
    const std::shared_ptr<Session> s = find_session(sid);
    if (!s) return error(404, "UnknownSession", "no session \"" + sid + "\"");
    const json body = parse_body(req.body);

    std::lock_guard lock(s->mu);
    s->last_used = config_.clock();
    if (s->terminated_by) {
        ApiResponse r = error(409, "SessionTerminated", "session ended by " + std::string(to_string(*s->terminated_by)));
        r.body["session"] = session_to_json(*s);
        return r;
    }
    if (body.is_object() && body.contains("expected_t")) {
        const json& et = body["expected_t"];
        if (!et.is_number_unsigned() || et.get<std::size_t>() != s->next_t()) {
            ApiResponse r = error(409, "StaleIteration", "session is at t = " + std::to_string(s->next_t()));
            r.body["session"] = session_to_json(*s);
            return r;
        }
    }
    Srg revised = read_student(graph_member(body, "srg"), *s->item);

    const ItemSpec& item = *s->item;
    LoopIteration it;
    it.t = s->next_t();
    it.student = revised;
    std::optional<Termination> end;
    if (it.t >= item.t_max) {
        it.breakdown = similarity(revised, item.gold, item.ontology, item.scoring);
        end = it.breakdown.s >= item.scoring.tau ? Termination::ThresholdMet : Termination::MaxIterations;
    } else {
        Assessment a = assess(revised, item);
        it.breakdown = a.breakdown;
        if (it.breakdown.s >= item.scoring.tau) {
            end = Termination::ThresholdMet;
        } else {
            it.hints = std::move(a.hints);
        }
    }
    s->current = std::move(revised);
    s->iterations.push_back(std::move(it));
    s->terminated_by = end;
    s->updated_at = now_utc();
    journal({{"event", "step"},
             {"at", s->updated_at},
             {"session_id", s->session_id},
             {"t", s->iterations.back().t},
             {"srg", srg_to_json(s->current)},
             {"s", s->iterations.back().breakdown.s}});
    return {200, step_json(s->iterations.back(), *s)};
}

ApiResponse Service::trace(const std::string& sid) {
    const std::shared_ptr<Session> s = find_session(sid);
    if (!s) return error(404, "UnknownSession", "no session \"" + sid + "\"");
    std::lock_guard lock(s->mu);
    s->last_used = config_.clock();
    LoopTrace tr;
    tr.iterations = s->iterations;
    tr.t_max = s->item->t_max;
    json out = loop_trace_to_json(tr);
    out["terminated_by"] = s->terminated_by ? json(std::string(to_string(*s->terminated_by))) : json(nullptr);
    out["session_id"] = s->session_id;
    out["item_id"] = s->item->item_id;
    return {200, std::move(out)};
}

std::size_t Service::expire_idle() {
    const auto now = config_.clock();
    std::lock_guard lock(sessions_mu_);
    std::size_t dropped = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        bool idle = false;
        {
            std::unique_lock slock(it->second->mu, std::try_to_lock);
            idle = slock.owns_lock() && now - it->second->last_used > config_.idle_timeout;
        }
        if (idle) {
            it = sessions_.erase(it);
            ++dropped;
        } else {
            ++it;
        }
    }
    return dropped;
}

std::size_t Service::session_count() const {
    std::lock_guard lock(sessions_mu_);
    return sessions_.size();
}

void Service::bind(httplib::Server& server) {
    server.set_payload_max_length(config_.max_body_bytes);
    auto adapt = [this](const httplib::Request& in, httplib::Response& out) {
        ApiRequest req{in.method, in.path, {}, in.get_header_value("Authorization"), in.body};
        for (const auto& [k, v] : in.params) req.query[k] = v;
        const ApiResponse r = handle(req);
        out.status = r.status;
        out.set_content(r.body.dump(), "application/json");
    };
    server.Get(R"(/api/.*)", adapt);
    server.Post(R"(/api/.*)", adapt);
    if (config_.static_dir) server.set_mount_point("/", config_.static_dir->string());
}

int run_service(const fs::path& pack, const std::string& host, int port, const ServiceConfig& config) {
    Dataset ds = load_dataset(pack);
    for (const std::string& w : ds.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    Service service(ds.items, config);
    httplib::Server server;
    service.bind(server);
    std::fprintf(stderr, "srgrade: serving %zu items on http://%s:%d\n", ds.items.size(), host.c_str(), port);
    if (!server.listen(host, port)) {
        std::fprintf(stderr, "srgrade: cannot listen on %s:%d\n", host.c_str(), port);
        return 1;
    }
    return 0;
}

}  // namespace srg
