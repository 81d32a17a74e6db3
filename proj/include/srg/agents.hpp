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
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/graph.hpp"
#include "srg/item.hpp"
#include "srg/timeutil.hpp"
#include "srg/validate.hpp"

namespace srg {

/// One network attempt against a model endpoint.
struct AgentRequestLog {
    enum class Outcome { Ok, SchemaRetry, Failed };

    std::string timestamp;  ///< UTC, millisecond precision
    std::string backend;
    std::string model_version;
    std::string prompt_id;
    std::string prompt_sha256;
    nlohmann::json prompt;  ///< full request payload
    std::string response;   ///< raw response body, empty when none arrived
    long long latency_ms = 0;
    Outcome outcome = Outcome::Ok;
    std::size_t attempt = 1;
    std::string error;
};

std::string_view to_string(AgentRequestLog::Outcome o) noexcept;
nlohmann::json log_to_json(const AgentRequestLog& r);

/// Append-only record of remote calls; appends are serialized and, when a
/// path is given, mirrored to a newline-delimited JSON file.
class AuditLog {
public:
    AuditLog() = default;
    explicit AuditLog(const std::filesystem::path& file);

    void append(const AgentRequestLog& record);
    std::vector<AgentRequestLog> records() const;
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::ofstream out_;
    std::vector<AgentRequestLog> records_;
};

struct PromptTemplate {
    std::string id;
    std::string text;
    std::string sha256;
};

std::string sha256_hex(std::string_view data);

const PromptTemplate& rubric_prompt();
const PromptTemplate& sketch_prompt();

/// Replaces every {{name}} with vars[name]; unknown names are left as is.
std::string render_prompt(const PromptTemplate& t, const std::map<std::string, std::string>& vars);

/// A JSON schema for the model plus the authoritative validator, which
/// throws with a human-readable message when the document is unusable.
struct ResponseSchema {
    std::string name;
    nlohmann::json schema;
    std::function<void(const nlohmann::json&)> validate;
};

ResponseSchema srg_response_schema(const ItemSpec& item);
ResponseSchema rubric_response_schema();

struct EndpointConfig {
    std::string base_url;  ///< e.g. "http://127.0.0.1:8080"
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string token_env = "SRGRADE_API_TOKEN";
    std::chrono::milliseconds timeout{30000};
};

/// Sends one chat-completions request body and returns the raw response
/// body. Throws NetworkError or Timeout.
using Transport = std::function<std::string(const EndpointConfig&, const nlohmann::json& body)>;

Transport http_transport();

/// Chat-completions call with structured output. An invalid reply is
/// re-asked up to `retries` times with the validation error appended; every
/// attempt is logged. Throws NetworkError, Timeout or SchemaViolation.
nlohmann::json remote_call(const EndpointConfig& endpoint, const PromptTemplate& prompt, const nlohmann::json& user_content,
                           const ResponseSchema& schema, std::size_t retries, AuditLog& log,
                           const Transport& transport, std::string_view backend_id = "remote");

struct Capabilities {
    bool rubric_parsing = false;
    bool sketch_perception = false;
};

struct RubricRequest {
    std::string rubric_text;
    std::string prompt_text;
    std::vector<std::string> image_refs;
};

/// Source of gold graphs (from rubrics) and student graphs (from sketches).
/// Implementations return raw documents; validation happens at the module
/// boundary in rubric_to_item and sketch_to_srg.
class PerceptionBackend {
public:
    virtual ~PerceptionBackend() = default;
    virtual std::string id() const = 0;
    virtual std::string model_version() const = 0;
    virtual Capabilities capabilities() const = 0;
    /// {"item_id", "ontology", "gold", "phi"}.
    virtual nlohmann::json parse_rubric(const RubricRequest& request) = 0;
    /// An SRG-JSON document with role "student".
    virtual nlohmann::json perceive(const std::string& image_ref, const ItemSpec& item) = 0;
};

/// Serves documents from an item pack. Rubrics match an item by exact
/// rubric text; image refs "sample:<id>" resolve to <item>/samples/<id>.srg.json.
class FixtureBackend final : public PerceptionBackend {
public:
    explicit FixtureBackend(std::filesystem::path pack_root, Capabilities caps = {true, true});

    std::string id() const override { return "fixture"; }
    std::string model_version() const override { return "fixture-1"; }
    Capabilities capabilities() const override { return caps_; }
    nlohmann::json parse_rubric(const RubricRequest& request) override;
    nlohmann::json perceive(const std::string& image_ref, const ItemSpec& item) override;

private:
    std::filesystem::path root_;
    Capabilities caps_;
};

class RemoteBackend final : public PerceptionBackend {
public:
    RemoteBackend(EndpointConfig endpoint, AuditLog& log, Transport transport = http_transport(),
                  std::size_t retries = 2, Capabilities caps = {true, true});

    std::string id() const override { return "remote"; }
    std::string model_version() const override { return endpoint_.model; }
    Capabilities capabilities() const override { return caps_; }
    nlohmann::json parse_rubric(const RubricRequest& request) override;
    nlohmann::json perceive(const std::string& image_ref, const ItemSpec& item) override;

private:
    EndpointConfig endpoint_;
    AuditLog& log_;
    Transport transport_;
    std::size_t retries_;
    Capabilities caps_;
};

/// Builds and validates an item from a rubric. Throws BackendUnavailable,
/// SchemaViolation or IncompleteMapping.
ItemSpec rubric_to_item(const RubricRequest& request, PerceptionBackend& backend);

struct PerceivedSketch {
    Srg graph;
    ValidationReport report;  ///< unknown concepts and relations are kept but listed here
};

/// Throws BackendUnavailable or SchemaViolation.
PerceivedSketch sketch_to_srg(const std::string& image_ref, const ItemSpec& item, PerceptionBackend& backend);

/// Decodes a raw student graph for `item`. Throws SchemaViolation.
Srg decode_student_srg(const nlohmann::json& doc, const ItemSpec& item);

/// Which backend each agent uses. Both agents must share one backend.
struct PipelineConfig {
    std::string rubric_backend = "fixture";
    std::string perception_backend = "fixture";
    std::size_t max_in_flight = 4;

    /// Throws ValueError.
    void validate() const;
    static PipelineConfig from_json(const nlohmann::json& doc);
};

struct PerceiveOutcome {
    std::string image_ref;
    std::optional<PerceivedSketch> sketch;
    std::string error_kind;
    std::string error;
};

/// Runs sketch_to_srg over many refs with at most `max_in_flight` calls
/// outstanding. Results are in input order.
std::vector<PerceiveOutcome> perceive_all(const std::vector<std::string>& refs, const ItemSpec& item,
                                          PerceptionBackend& backend, std::size_t max_in_flight);

}  // namespace srg
