// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/agents.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <openssl/evp.h>

#include "srg/errors.hpp"

namespace srg {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kRubricPromptText =
    "You turn a science assessment rubric into a reference reasoning graph.\n"
    "\n"
    "Return one JSON object with these members and nothing else:\n"
    "  item_id   a short identifier for the item\n"
    "  ontology  {\"root\": concept, \"concepts\": [{\"id\", \"parent\"}], \"relations\": [name]}\n"
    "  gold      an SRG document with role \"gold\" whose concepts and relations come from the ontology\n"
    "  phi       {\"templates\": [{\"key\", \"hint_text\", \"overlay\"}]} with one template per gold node\n"
    "            (key = concept) and per gold edge (key = [source concept, relation, target concept])\n"
    "\n"
    "Each gold node carries a Bloom level (Remember, Understand, Apply, Analyze, Evaluate, Create)\n"
    "and an evidence region in normalized image coordinates.\n"
    "\n"
    "Question:\n{{prompt}}\n"
    "\n"
    "Rubric:\n{{rubric}}\n"
    "\n"
    "Reference images:\n{{images}}\n";

constexpr const char* kSketchPromptText =
    "You read a student's scientific sketch and describe its reasoning as a graph.\n"
    "\n"
    "Item: {{item_id}}\n"
    "Question:\n{{prompt}}\n"
    "\n"
    "Use only these concepts: {{concepts}}\n"
    "Use only these relations: {{relations}}\n"
    "Bloom levels: Remember, Understand, Apply, Analyze, Evaluate, Create\n"
    "\n"
    "Return one SRG document with role \"student\" and item_id \"{{item_id}}\". Give every node the\n"
    "evidence region (normalized [x0, y0, x1, y1]) and any text that supports it. Leave out\n"
    "anything the sketch does not show.\n";

PromptTemplate make_template(std::string id, std::string text) {
    PromptTemplate t{std::move(id), std::move(text), {}};
    t.sha256 = sha256_hex(t.text);
    return t;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (const std::string& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

json bloom_enum() {
    json levels = json::array();
    for (int k = 1; k <= 6; ++k) levels.push_back(std::string(to_string(bloom_from_ordinal(k))));
    return levels;
}

json srg_json_schema() {
    const json rect = {{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 4}, {"maxItems", 4}};
    return {
        {"type", "object"},
        {"required", {"srg_version", "item_id", "role", "nodes", "edges"}},
        {"properties",
         {{"srg_version", {{"type", "string"}, {"enum", {"1"}}}},
          {"item_id", {{"type", "string"}}},
          {"role", {{"type", "string"}, {"enum", {"gold", "student"}}}},
          {"nodes",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"id", "concept", "bloom", "evidence"}},
              {"properties",
               {{"id", {{"type", "string"}}},
                {"concept", {{"type", "string"}}},
                {"bloom", {{"type", "string"}, {"enum", bloom_enum()}}},
                {"evidence",
                 {{"type", "object"},
                  {"properties", {{"region", rect}, {"text", {{"type", "string"}}}}}}}}}}}}},
          {"edges",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"source", "target", "relation"}},
              {"properties",
               {{"source", {{"type", "string"}}},
                {"target", {{"type", "string"}}},
                {"relation", {{"type", "string"}}}}}}}}}}}};
}

// Extracts the assistant message content from a chat-completions body.
std::string message_content(const std::string& body) {
    const json doc = json::parse(body);
    const json& msg = doc.at("choices").at(0).at("message");
    const json& content = msg.at("content");
    if (content.is_string()) return content.get<std::string>();
    throw SchemaViolation("assistant content is not a string");
}

long long elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

std::string_view to_string(AgentRequestLog::Outcome o) noexcept {
    switch (o) {
        case AgentRequestLog::Outcome::Ok: return "ok";
        case AgentRequestLog::Outcome::SchemaRetry: return "schema_retry";
        case AgentRequestLog::Outcome::Failed: return "failed";
    }
    return "failed";
}

json log_to_json(const AgentRequestLog& r) {
    return {{"timestamp", r.timestamp},
            {"backend", r.backend},
            {"model_version", r.model_version},
            {"prompt_id", r.prompt_id},
            {"prompt_sha256", r.prompt_sha256},
            {"attempt", r.attempt},
            {"payload", r.prompt},
            {"response", r.response},
            {"latency_ms", r.latency_ms},
            {"outcome", std::string(to_string(r.outcome))},
            {"error", r.error.empty() ? json(nullptr) : json(r.error)}};
}

AuditLog::AuditLog(const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    out_.open(file, std::ios::app);
    if (!out_) throw ValueError("cannot open audit log " + file.string());
}

void AuditLog::append(const AgentRequestLog& record) {
    std::lock_guard lock(mu_);
    if (out_.is_open()) {
        out_ << log_to_json(record).dump() << '\n';
        out_.flush();
    }
    records_.push_back(record);
}

std::vector<AgentRequestLog> AuditLog::records() const {
    std::lock_guard lock(mu_);
    return records_;
}

std::size_t AuditLog::size() const {
    std::lock_guard lock(mu_);
    return records_.size();
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

const PromptTemplate& rubric_prompt() {
    static const PromptTemplate t = make_template("rubric-to-srg/v1", kRubricPromptText);
    return t;
}

const PromptTemplate& sketch_prompt() {
    static const PromptTemplate t = make_template("sketch-to-srg/v1", kSketchPromptText);
    return t;
}

std::string render_prompt(const PromptTemplate& t, const std::map<std::string, std::string>& vars) {
    std::string out;
    const std::string& s = t.text;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t open = s.find("{{", pos);
        if (open == std::string::npos) break;
        const std::size_t close = s.find("}}", open + 2);
        if (close == std::string::npos) break;
        out.append(s, pos, open - pos);
        const std::string name = s.substr(open + 2, close - open - 2);
        if (auto it = vars.find(name); it != vars.end()) {
            out += it->second;
        } else {
            out.append(s, open, close + 2 - open);
        }
        pos = close + 2;
    }
    out.append(s, pos, std::string::npos);
    return out;
}

Srg decode_student_srg(const json& doc, const ItemSpec& item) {
    Srg g;
    try {
        g = srg_from_json(doc);
    } catch (const json::exception& e) {
        throw SchemaViolation(std::string("not an SRG document: ") + e.what());
    } catch (const Error& e) {
        throw SchemaViolation(e.kind() + ": " + e.what());
    }
    if (g.role() != Role::Student) {
        throw SchemaViolation("role must be \"student\"");
    }
    if (g.item_id() != item.item_id) {
        throw SchemaViolation("item_id \"" + g.item_id() + "\" does not match \"" + item.item_id + "\"");
    }
    return g;
}

ResponseSchema srg_response_schema(const ItemSpec& item) {
    return {"student_srg", srg_json_schema(), [&item](const json& doc) { (void)decode_student_srg(doc, item); }};
}

ResponseSchema rubric_response_schema() {
    json schema = {{"type", "object"},
                   {"required", {"item_id", "ontology", "gold", "phi"}},
                   {"properties",
                    {{"item_id", {{"type", "string"}}},
                     {"ontology", {{"type", "object"}}},
                     {"gold", srg_json_schema()},
                     {"phi", {{"type", "object"}}}}}};
    auto validate = [](const json& doc) {
        try {
            if (!doc.is_object()) throw SchemaViolation("expected an object");
            const Ontology o = ontology_from_json(doc.at("ontology"));
            const Srg gold = srg_from_json(doc.at("gold"));
            if (gold.role() != Role::Gold) throw SchemaViolation("gold graph must have role \"gold\"");
            const ValidationReport r = validate_against_ontology(gold, o);
            if (!r.ok()) throw SchemaViolation("gold does not resolve in the ontology: " + r.summary());
            (void)phi_from_json(doc.at("phi"), gold);
        } catch (const json::exception& e) {
            throw SchemaViolation(e.what());
        } catch (const SchemaViolation&) {
            throw;
        } catch (const Error& e) {
            throw SchemaViolation(e.kind() + ": " + e.what());
        }
    };
    return {"rubric_item", std::move(schema), std::move(validate)};
}

Transport http_transport() {
    return [](const EndpointConfig& ep, const json& body) -> std::string {
        httplib::Client cli(ep.base_url);
        const auto secs = std::chrono::duration_cast<std::chrono::seconds>(ep.timeout);
        const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(ep.timeout - secs);
        cli.set_connection_timeout(secs.count(), usecs.count());
        cli.set_read_timeout(secs.count(), usecs.count());
        cli.set_write_timeout(secs.count(), usecs.count());
        httplib::Headers headers;
        if (!ep.token_env.empty()) {
            if (const char* token = std::getenv(ep.token_env.c_str()); token && *token) {
                headers.emplace("Authorization", std::string("Bearer ") + token);
            }
        }
        const auto res = cli.Post(ep.path, headers, body.dump(), "application/json");
        if (!res) {
            const httplib::Error err = res.error();
            if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                err == httplib::Error::Write) {
                throw Timeout(ep.base_url + ": " + httplib::to_string(err));
            }
            throw NetworkError(ep.base_url + ": " + httplib::to_string(err));
        }
        if (res->status != 200) {
            throw NetworkError(ep.base_url + ": HTTP " + std::to_string(res->status));
        }
        return res->body;
    };
}

json remote_call(const EndpointConfig& endpoint, const PromptTemplate& prompt, const json& user_content,
                 const ResponseSchema& schema, std::size_t retries, AuditLog& log, const Transport& transport,
                 std::string_view backend_id) {
    json messages = json::array();
    messages.push_back({{"role", "user"}, {"content", user_content}});
    std::string last_error;
    for (std::size_t attempt = 1; attempt <= retries + 1; ++attempt) {
        const json body = {{"model", endpoint.model},
                           {"messages", messages},
                           {"temperature", 0},
                           {"response_format",
                            {{"type", "json_schema"},
                             {"json_schema", {{"name", schema.name}, {"schema", schema.schema}, {"strict", false}}}}}};
        AgentRequestLog rec;
        rec.timestamp = utc_timestamp_ms(std::chrono::system_clock::now());
        rec.backend = std::string(backend_id);
        rec.model_version = endpoint.model;
        rec.prompt_id = prompt.id;
        rec.prompt_sha256 = prompt.sha256;
        rec.prompt = body;
        rec.attempt = attempt;

        const auto start = std::chrono::steady_clock::now();
        try {
            rec.response = transport(endpoint, body);
        } catch (const Error& e) {
            rec.latency_ms = elapsed_ms(start);
            rec.outcome = AgentRequestLog::Outcome::Failed;
            rec.error = e.kind() + ": " + e.what();
            log.append(rec);
            throw;
        }
        rec.latency_ms = elapsed_ms(start);

        std::string content;
        try {
            content = message_content(rec.response);
            json doc = json::parse(content);
            schema.validate(doc);
            rec.outcome = AgentRequestLog::Outcome::Ok;
            log.append(rec);
            return doc;
        } catch (const std::exception& e) {
            last_error = e.what();
        }
        rec.error = last_error;
        const bool final_attempt = attempt == retries + 1;
        rec.outcome = final_attempt ? AgentRequestLog::Outcome::Failed : AgentRequestLog::Outcome::SchemaRetry;
        log.append(rec);
        if (final_attempt) break;
        messages.push_back({{"role", "assistant"}, {"content", content}});
        messages.push_back({{"role", "user"},
                            {"content", "That reply was rejected: " + last_error +
                                            "\nAnswer again with a single JSON object that satisfies the schema."}});
    }
    throw SchemaViolation(prompt.id + ": no valid reply after " + std::to_string(retries + 1) +
                          " attempts: " + last_error);
}

FixtureBackend::FixtureBackend(fs::path pack_root, Capabilities caps) : root_(std::move(pack_root)), caps_(caps) {}

json FixtureBackend::parse_rubric(const RubricRequest& request) {
    if (!caps_.rubric_parsing) throw BackendUnavailable("fixture backend: rubric parsing disabled");
    std::error_code ec;
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root_, ec)) {
        if (entry.is_directory() && fs::exists(entry.path() / "item.json")) dirs.push_back(entry.path());
    }
    if (ec) throw BackendUnavailable("fixture backend: cannot read " + root_.string());
    std::sort(dirs.begin(), dirs.end());
    for (const fs::path& dir : dirs) {
        json meta;
        try {
            meta = json::parse(read_text_file((dir / "item.json").string()));
        } catch (const std::exception&) {
            continue;
        }
        if (meta.value("rubric_text", std::string()) != request.rubric_text) continue;
        const ItemSpec item = load_item(dir);
        return {{"item_id", item.item_id},
                {"ontology", ontology_to_json(item.ontology)},
                {"gold", srg_to_json(item.gold)},
                {"phi", phi_to_json(item.phi)}};
    }
    throw BackendUnavailable("fixture backend: no item matches the rubric");
}

json FixtureBackend::perceive(const std::string& image_ref, const ItemSpec& item) {
    if (!caps_.sketch_perception) throw BackendUnavailable("fixture backend: sketch perception disabled");
    constexpr std::string_view kPrefix = "sample:";
    if (!image_ref.starts_with(kPrefix)) {
        throw BackendUnavailable("fixture backend: unsupported image ref \"" + image_ref + "\"");
    }
    const std::string sid = image_ref.substr(kPrefix.size());
    if (sid.empty() || sid.find('/') != std::string::npos || sid.find("..") != std::string::npos) {
        throw BackendUnavailable("fixture backend: bad sample id \"" + sid + "\"");
    }
    const fs::path file = root_ / item.item_id / "samples" / (sid + ".srg.json");
    if (!fs::exists(file)) throw BackendUnavailable("fixture backend: no sample " + file.string());
    try {
        return json::parse(read_text_file(file.string()));
    } catch (const json::exception& e) {
        throw SchemaViolation(file.string() + ": " + e.what());
    }
}

RemoteBackend::RemoteBackend(EndpointConfig endpoint, AuditLog& log, Transport transport, std::size_t retries,
                             Capabilities caps)
    : endpoint_(std::move(endpoint)), log_(log), transport_(std::move(transport)), retries_(retries), caps_(caps) {}

json RemoteBackend::parse_rubric(const RubricRequest& request) {
    if (!caps_.rubric_parsing) throw BackendUnavailable("remote backend: rubric parsing disabled");
    const std::string text = render_prompt(rubric_prompt(), {{"prompt", request.prompt_text},
                                                              {"rubric", request.rubric_text},
                                                              {"images", join(request.image_refs, "\n")}});
    json content = json::array();
    content.push_back({{"type", "text"}, {"text", text}});
    for (const std::string& ref : request.image_refs) {
        content.push_back({{"type", "image_url"}, {"image_url", {{"url", ref}}}});
    }
    return remote_call(endpoint_, rubric_prompt(), content, rubric_response_schema(), retries_, log_, transport_, id());
}

json RemoteBackend::perceive(const std::string& image_ref, const ItemSpec& item) {
    if (!caps_.sketch_perception) throw BackendUnavailable("remote backend: sketch perception disabled");
    std::vector<std::string> concepts;
    for (const auto& c : item.ontology.concepts()) concepts.push_back(c.id);
    const std::string text = render_prompt(sketch_prompt(), {{"item_id", item.item_id},
                                                              {"prompt", item.prompt_text},
                                                              {"concepts", join(concepts, ", ")},
                                                              {"relations", join(item.ontology.relations(), ", ")}});
    json content = json::array();
    content.push_back({{"type", "text"}, {"text", text}});
    content.push_back({{"type", "image_url"}, {"image_url", {{"url", image_ref}}}});
    return remote_call(endpoint_, sketch_prompt(), content, srg_response_schema(item), retries_, log_, transport_,
                       id());
}

ItemSpec rubric_to_item(const RubricRequest& request, PerceptionBackend& backend) {
    if (!backend.capabilities().rubric_parsing) {
        throw BackendUnavailable(backend.id() + " cannot parse rubrics");
    }
    const json doc = backend.parse_rubric(request);
    ItemSpec item;
    try {
        rubric_response_schema().validate(doc);
        item.item_id = doc.at("item_id").get<std::string>();
        item.prompt_text = request.prompt_text;
        item.image_refs = request.image_refs;
        item.rubric_text = request.rubric_text;
        item.ontology = ontology_from_json(doc.at("ontology"));
        item.gold = srg_from_json(doc.at("gold"));
        item.phi = phi_from_json(doc.at("phi"), item.gold);
        item.highest_bloom = item.gold.highest_bloom().value_or(Bloom::Remember);
    } catch (const json::exception& e) {
        throw SchemaViolation(e.what());
    } catch (const SchemaViolation&) {
        throw;
    } catch (const Error& e) {
        throw SchemaViolation(e.kind() + ": " + e.what());
    }
    try {
        validate_item(item);
    } catch (const SpecValidationError& e) {
        throw SchemaViolation(e.what());
    }
    return item;
}

PerceivedSketch sketch_to_srg(const std::string& image_ref, const ItemSpec& item, PerceptionBackend& backend) {
    if (!backend.capabilities().sketch_perception) {
        throw BackendUnavailable(backend.id() + " cannot read sketches");
    }
    Srg g = decode_student_srg(backend.perceive(image_ref, item), item);
    ValidationReport report = validate_against_ontology(g, item.ontology);
    return {std::move(g), std::move(report)};
}

void PipelineConfig::validate() const {
    if (rubric_backend != perception_backend) {
        throw ValueError("both agents must use the same backend (got \"" + rubric_backend + "\" and \"" +
                         perception_backend + "\")");
    }
    if (max_in_flight == 0) throw ValueError("max_in_flight must be positive");
}

PipelineConfig PipelineConfig::from_json(const json& doc) {
    PipelineConfig c;
    try {
        c.rubric_backend = doc.value("rubric_backend", c.rubric_backend);
        c.perception_backend = doc.value("perception_backend", c.perception_backend);
        c.max_in_flight = doc.value("max_in_flight", c.max_in_flight);
    } catch (const json::exception& e) {
        throw ValueError(std::string("pipeline config: ") + e.what());
    }
    c.validate();
    return c;
}

std::vector<PerceiveOutcome> perceive_all(const std::vector<std::string>& refs, const ItemSpec& item,
                                          PerceptionBackend& backend, std::size_t max_in_flight) {
    std::vector<PerceiveOutcome> out(refs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < refs.size(); i = next++) {
            PerceiveOutcome& o = out[i];
            o.image_ref = refs[i];
            try {
                o.sketch = sketch_to_srg(refs[i], item, backend);
            } catch (const Error& e) {
                o.error_kind = e.kind();
                o.error = e.what();
            } catch (const std::exception& e) {
                o.error_kind = "Error";
                o.error = e.what();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(max_in_flight, 1, std::max<std::size_t>(refs.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < workers; ++k) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    return out;
}

}  // namespace srg
