// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "srg/agents.hpp"
#include "srg/errors.hpp"
#include "srg/evaluate.hpp"
#include "srg/item.hpp"
#include "srg/loop.hpp"
#include "srg/service.hpp"
#include "srg/synth.hpp"
#include "srg/validate.hpp"

namespace srg {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kDefaultPack = "data/fixtures";

// Thrown for failed checks that are not engine errors, e.g. an invalid graph
// reported by `validate`.
class CheckFailed : public Error {
public:
    explicit CheckFailed(const std::string& message) : Error("ValidationFailed", message) {}
};

ItemSpec load_pack_item(const fs::path& pack, const std::string& id) {
    const fs::path dir = pack / id;
    if (!fs::is_directory(dir)) throw LayoutError("no item \"" + id + "\" in " + pack.string());
    return load_item(dir);
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path);
    f << text;
    if (!f) throw LayoutError("cannot write " + path.string());
}

ScoringParams params_override(const ScoringParams& base, const std::string& file) {
    if (file.empty()) return base;
    ScoringParams p = scoring_params_from_json(json::parse(read_text_file(file)), base);
    p.validate();
    return p;
}

struct BackendOptions {
    std::string kind = "fixture";
    std::string base_url;
    std::string model;
    std::string token_env = "SRGRADE_API_TOKEN";
    std::string audit;
    std::size_t retries = 2;
    int timeout_ms = 30000;
};

void add_backend_options(CLI::App* cmd, BackendOptions& b) {
    cmd->add_option("--backend", b.kind, "fixture or remote")->check(CLI::IsMember({"fixture", "remote"}));
    cmd->add_option("--base-url", b.base_url, "chat-completions endpoint base URL");
    cmd->add_option("--model", b.model, "model name sent to the endpoint");
    cmd->add_option("--token-env", b.token_env, "environment variable holding the API token");
    cmd->add_option("--audit", b.audit, "append request logs to this NDJSON file");
    cmd->add_option("--retries", b.retries, "re-asks after an invalid reply");
    cmd->add_option("--timeout-ms", b.timeout_ms, "per-request timeout");
}

struct BackendHandle {
    std::unique_ptr<AuditLog> log;
    std::unique_ptr<PerceptionBackend> backend;
};

BackendHandle make_backend(const BackendOptions& b, const fs::path& pack) {
    BackendHandle h;
    h.log = b.audit.empty() ? std::make_unique<AuditLog>() : std::make_unique<AuditLog>(b.audit);
    if (b.kind == "fixture") {
        h.backend = std::make_unique<FixtureBackend>(pack);
    } else {
        if (b.base_url.empty() || b.model.empty()) throw ValueError("remote backend needs --base-url and --model");
        EndpointConfig ep;
        ep.base_url = b.base_url;
        ep.model = b.model;
        ep.token_env = b.token_env;
        ep.timeout = std::chrono::milliseconds(b.timeout_ms);
        h.backend = std::make_unique<RemoteBackend>(ep, *h.log, http_transport(), b.retries);
    }
    return h;
}

std::string hints_text(const std::vector<VisualHint>& hints) {
    std::string out;
    for (std::size_t i = 0; i < hints.size(); ++i) {
        out += "  " + std::to_string(i + 1) + ". " + hints[i].text + "\n";
    }
    return out;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"srgrade: sketch reasoning graph assessment"};
    app.require_subcommand(1);
    std::string pack = kDefaultPack;
    app.add_option("--pack", pack, "item pack directory")->envname("SRGRADE_PACK");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "check SRG files or item directories");
    std::vector<std::string> validate_paths;
    std::string validate_item_id;
    validate_cmd->add_option("paths", validate_paths, "SRG-JSON files or item directories")->required();
    validate_cmd->add_option("--item", validate_item_id, "also resolve graphs against this item's ontology");

    // score
    auto* score_cmd = app.add_subcommand("score", "score a student graph");
    std::string score_item, score_file, score_params;
    score_cmd->add_option("--item", score_item, "item id")->required();
    score_cmd->add_option("file", score_file, "student SRG-JSON")->required();
    score_cmd->add_option("--params", score_params, "JSON file overriding scoring parameters");

    // feedback
    auto* feedback_cmd = app.add_subcommand("feedback", "feedback report and hint overlay");
    std::string fb_item, fb_file, fb_format = "json", fb_overlay;
    int fb_width = 1000, fb_height = 1000;
    feedback_cmd->add_option("--item", fb_item, "item id")->required();
    feedback_cmd->add_option("file", fb_file, "student SRG-JSON")->required();
    feedback_cmd->add_option("--format", fb_format, "json or text")->check(CLI::IsMember({"json", "text"}));
    feedback_cmd->add_option("--width", fb_width, "overlay canvas width in pixels");
    feedback_cmd->add_option("--height", fb_height, "overlay canvas height in pixels");
    feedback_cmd->add_option("--overlay", fb_overlay, "also write the overlay script to this file");

    // loop
    auto* loop_cmd = app.add_subcommand("loop", "run the revision loop");
    std::string loop_item, loop_file;
    double loop_p = 1.0;
    std::uint64_t loop_seed = 0;
    std::size_t loop_t_max = 0;
    bool loop_interactive = false, loop_summary = false;
    loop_cmd->add_option("--item", loop_item, "item id")->required();
    loop_cmd->add_option("file", loop_file, "initial student SRG-JSON")->required();
    loop_cmd->add_option("--p", loop_p, "probability that the simulated student applies a hint")
        ->check(CLI::Range(0.0, 1.0));
    loop_cmd->add_option("--seed", loop_seed, "simulated student seed");
    loop_cmd->add_option("--t-max", loop_t_max, "revision budget (default: the item's)");
    loop_cmd->add_flag("--interactive", loop_interactive, "read revised graph paths from stdin");
    loop_cmd->add_flag("--summary", loop_summary, "one line per round instead of the JSON trace");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "banding accuracy against human labels");
    std::string eval_format = "text", eval_json, eval_label = "srgrade", eval_params;
    std::size_t eval_parallel = std::max(1u, std::thread::hardware_concurrency());
    eval_cmd->add_option("--format", eval_format, "text, markdown or csv")
        ->check(CLI::IsMember({"text", "markdown", "md", "csv"}));
    eval_cmd->add_option("--json", eval_json, "write per-sample results to this file");
    eval_cmd->add_option("--label", eval_label, "row label in the table");
    eval_cmd->add_option("--parallel", eval_parallel, "worker threads")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--params", eval_params, "JSON file overriding every item's scoring parameters");

    // calibrate
    auto* cal_cmd = app.add_subcommand("calibrate", "grid-search gamma1 (and optionally alpha) on labeled samples");
    double cal_step = 0.05;
    std::vector<double> cal_alpha;
    cal_cmd->add_option("--step", cal_step, "gamma1 grid step")->check(CLI::Range(1e-6, 1.0));
    cal_cmd->add_option("--alpha", cal_alpha, "alpha values to search");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "write the synthetic item pack");
    std::string gen_out = "data/synthetic";
    SynthOptions gen_opts;
    gen_cmd->add_option("--out", gen_out, "output directory");
    gen_cmd->add_option("--samples", gen_opts.samples_per_item, "samples per item")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen_opts.seed, "generator seed");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "HTTP API");
    int serve_port = 8080;
    std::string serve_host = "127.0.0.1", serve_journal, serve_static;
    long serve_idle = 3600;
    ServiceConfig serve_cfg;
    serve_cmd->add_option("--port", serve_port, "listen port")->check(CLI::Range(1, 65535));
    serve_cmd->add_option("--host", serve_host, "listen address");
    serve_cmd->add_option("--token-env", serve_cfg.token_env, "environment variable holding the instructor token");
    serve_cmd->add_option("--journal", serve_journal, "append session events to this NDJSON file");
    serve_cmd->add_option("--static", serve_static, "serve a static directory at /");
    serve_cmd->add_option("--idle-timeout", serve_idle, "seconds before an idle session expires")
        ->check(CLI::PositiveNumber);
    serve_cmd->add_option("--max-nodes", serve_cfg.max_nodes, "largest accepted graph");

    // perceive
    auto* perceive_cmd = app.add_subcommand("perceive", "turn sketch images into student graphs");
    std::string perceive_item;
    std::vector<std::string> perceive_images;
    std::size_t perceive_in_flight = 4;
    BackendOptions perceive_backend;
    perceive_cmd->add_option("--item", perceive_item, "item id")->required();
    perceive_cmd->add_option("--image", perceive_images, "image reference (fixture: sample:<id>)")->required();
    perceive_cmd->add_option("--max-in-flight", perceive_in_flight, "concurrent backend calls")
        ->check(CLI::PositiveNumber);
    add_backend_options(perceive_cmd, perceive_backend);

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "build an item from a rubric");
    std::string ingest_rubric, ingest_prompt, ingest_out;
    std::vector<std::string> ingest_images;
    BackendOptions ingest_backend;
    ingest_cmd->add_option("--rubric", ingest_rubric, "rubric text file")->required()->check(CLI::ExistingFile);
    ingest_cmd->add_option("--prompt", ingest_prompt, "question text file")->check(CLI::ExistingFile);
    ingest_cmd->add_option("--image", ingest_images, "reference image");
    ingest_cmd->add_option("--out", ingest_out, "write the item directory here");
    add_backend_options(ingest_cmd, ingest_backend);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate_cmd) {
            std::optional<ItemSpec> item;
            if (!validate_item_id.empty()) item = load_pack_item(pack, validate_item_id);
            json results = json::array();
            bool all_ok = true;
            for (const std::string& p : validate_paths) {
                if (fs::is_directory(p)) {
                    const ItemSpec it = load_item(p);
                    results.push_back({{"path", p}, {"kind", "item"}, {"item_id", it.item_id}, {"ok", true}});
                    continue;
                }
                const Srg g = load_srg_file(p);
                json r = {{"path", p},
                          {"kind", "srg"},
                          {"item_id", g.item_id()},
                          {"nodes", g.node_count()},
                          {"edges", g.edge_count()},
                          {"ok", true}};
                if (item) {
                    const ValidationReport rep = validate_against_ontology(g, item->ontology);
                    r["issues"] = report_to_json(rep);
                    r["ok"] = rep.ok();
                    all_ok = all_ok && rep.ok();
                }
                results.push_back(std::move(r));
            }
            out << results.dump(2) << "\n";
            if (!all_ok) throw CheckFailed("some graphs do not resolve in the item ontology");
            return kExitOk;
        }
        if (*score_cmd) {
            const ItemSpec item = load_pack_item(pack, score_item);
            const Srg student = load_srg_file(score_file);
            const ScoringParams p = params_override(item.scoring, score_params);
            out << breakdown_to_json(similarity(student, item.gold, item.ontology, p)).dump(2) << "\n";
            return kExitOk;
        }
        if (*feedback_cmd) {
            const ItemSpec item = load_pack_item(pack, fb_item);
            const Assessment a = assess(load_srg_file(fb_file), item);
            const OverlayScript overlay = render_overlay(a.hints, fb_width, fb_height);
            if (!fb_overlay.empty()) write_text(fb_overlay, overlay_to_json(overlay).dump(2) + "\n");
            if (fb_format == "text") {
                out << report_to_text(a.report);
            } else {
                out << json{{"report", report_to_json(a.report)}, {"overlay", overlay_to_json(overlay)}}.dump(2)
                    << "\n";
            }
            return kExitOk;
        }
        if (*loop_cmd) {
            const ItemSpec item = load_pack_item(pack, loop_item);
            const Srg initial = load_srg_file(loop_file);
            const std::size_t t_max = loop_t_max ? loop_t_max : item.t_max;
            std::unique_ptr<StudentModel> model;
            if (loop_interactive) {
                model = std::make_unique<CallbackStudent>(
                    [&](const Srg& current, const std::vector<VisualHint>& hints, std::size_t t) -> Srg {
                        out << "round " << t << " hints:\n" << hints_text(hints);
                        out << "revised graph file (empty keeps the current graph): " << std::flush;
                        std::string line;
                        if (!std::getline(in, line) || line.empty()) return current;
                        return load_srg_file(line);
                    });
            } else {
                model = std::make_unique<SimulatedStudent>(item.gold, loop_p, loop_seed);
            }
            const LoopTrace trace = loop_run(initial, *model, item, t_max);
            if (loop_summary) {
                for (const LoopIteration& it : trace.iterations) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf, "t=%zu s=%.4f band=%s hints=%zu\n", it.t, it.breakdown.s,
                                  std::string(to_string(it.breakdown.band)).c_str(), it.hints.size());
                    out << buf;
                }
                out << "terminated_by=" << to_string(trace.terminated_by) << "\n";
            } else {
                out << loop_trace_to_json(trace).dump(2) << "\n";
            }
            return kExitOk;
        }
        if (*eval_cmd) {
            const Dataset ds = load_dataset(pack);
            for (const std::string& w : ds.warnings) err << "warning: " << w << "\n";
            std::optional<ScoringParams> params;
            if (!eval_params.empty()) params = params_override(ScoringParams{}, eval_params);
            const EvalResult r = evaluate(ds, eval_parallel, params);
            if (!eval_json.empty()) write_text(eval_json, eval_result_to_json(r).dump(2) + "\n");
            out << render_table(table_from_result(r, eval_label), table_format_from_string(eval_format));
            return kExitOk;
        }
        if (*cal_cmd) {
            const Dataset ds = load_dataset(pack);
            for (const std::string& w : ds.warnings) err << "warning: " << w << "\n";
            std::vector<CalibrationRecord> records;
            for (const ItemPtr& item : ds.items) {
                auto it = ds.samples.find(item->item_id);
                if (it == ds.samples.end()) continue;
                for (const LabeledSample& s : it->second) {
                    records.push_back({s.student, item->gold, &item->ontology, s.human_band});
                }
            }
            CalibrationGrid grid;
            const int steps = static_cast<int>(std::lround(1.0 / cal_step));
            for (int k = 0; k <= steps; ++k) grid.gamma1.push_back(std::min(1.0, k * cal_step));
            grid.alpha = cal_alpha;
            const CalibrationResult res = calibrate(records, grid);
            out << json{{"params", scoring_params_to_json(res.params)},
                        {"accuracy", res.accuracy},
                        {"records", records.size()}}
                       .dump(2)
                << "\n";
            return kExitOk;
        }
        if (*gen_cmd) {
            const std::size_t n = write_synthetic_pack(gen_out, gen_opts);
            out << json{{"out", gen_out}, {"items", synthetic_items().size()}, {"samples", n}}.dump(2) << "\n";
            return kExitOk;
        }
        if (*serve_cmd) {
            serve_cfg.idle_timeout = std::chrono::seconds(serve_idle);
            if (!serve_journal.empty()) serve_cfg.journal = serve_journal;
            if (!serve_static.empty()) serve_cfg.static_dir = serve_static;
            return run_service(pack, serve_host, serve_port, serve_cfg);
        }
        if (*perceive_cmd) {
            const ItemSpec item = load_pack_item(pack, perceive_item);
            BackendHandle h = make_backend(perceive_backend, pack);
            const auto outcomes = perceive_all(perceive_images, item, *h.backend, perceive_in_flight);
            json results = json::array();
            bool all_ok = true;
            for (const PerceiveOutcome& o : outcomes) {
                if (o.sketch) {
                    results.push_back({{"image_ref", o.image_ref},
                                       {"srg", srg_to_json(o.sketch->graph)},
                                       {"issues", report_to_json(o.sketch->report)}});
                } else {
                    all_ok = false;
                    results.push_back({{"image_ref", o.image_ref}, {"error", o.error_kind}, {"message", o.error}});
                }
            }
            out << results.dump(2) << "\n";
            if (!all_ok) throw CheckFailed("some images could not be perceived");
            return kExitOk;
        }
        if (*ingest_cmd) {
            BackendHandle h = make_backend(ingest_backend, pack);
            RubricRequest req;
            req.rubric_text = read_text_file(ingest_rubric);
            while (!req.rubric_text.empty() && std::isspace(static_cast<unsigned char>(req.rubric_text.back()))) {
                req.rubric_text.pop_back();
            }
            if (!ingest_prompt.empty()) req.prompt_text = read_text_file(ingest_prompt);
            req.image_refs = ingest_images;
            const ItemSpec item = rubric_to_item(req, *h.backend);
            if (!ingest_out.empty()) write_item(ingest_out, item);
            out << item_summary_json(item).dump(2) << "\n";
            return kExitOk;
        }
    } catch (const Error& e) {
        err << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        return kExitDataError;
    } catch (const json::exception& e) {
        err << json{{"error", "SchemaError"}, {"message", e.what()}}.dump() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        err << json{{"error", "IOError"}, {"message", e.what()}}.dump() << "\n";
        return kExitDataError;
    }
    return kExitUsage;
}

}  // namespace srg
