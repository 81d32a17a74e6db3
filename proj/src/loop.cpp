// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/loop.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "srg/errors.hpp"

namespace srg {

using nlohmann::json;

Assessment assess(const Srg& student, const ItemSpec& item) {
    Assessment a;
    a.breakdown = similarity(student, item.gold, item.ontology, item.scoring);
    a.deficiencies = deficiencies(student, item.gold, a.breakdown.alignment, item.ontology);
    HintOptions opts;
    opts.limit = item.hint_limit;
    opts.guided = needs_guided_reconstruction(student);
    a.hints = hints(a.deficiencies, item.phi, opts);
    a.report = feedback_report(a.breakdown, student, item.gold, a.deficiencies, a.hints);
    return a;
}

namespace {

/// Mutable copy of a student graph used while applying repairs.
class Draft {
public:
    Draft(const Srg& student, const Srg& gold) : student_(student), gold_(gold) {
        nodes_ = student.nodes();
        edges_ = student.edges();
        for (const SrgNode& n : nodes_) ids_.insert(n.id);
    }

    bool has_node(const std::string& id) const { return ids_.contains(id); }

    /// Student id standing in for a gold node, inserting a copy if needed.
    std::string ensure_gold_node(const std::string& gold_id, const std::string& aligned_student_id) {
        if (!aligned_student_id.empty() && has_node(aligned_student_id)) {
            return aligned_student_id;
        }
        if (auto it = inserted_.find(gold_id); it != inserted_.end()) {
            return it->second;
        }
        const SrgNode* g = gold_.find_node(gold_id);
        SrgNode copy = *g;
        copy.id = fresh_id(gold_id);
        ids_.insert(copy.id);
        inserted_.emplace(gold_id, copy.id);
        nodes_.push_back(std::move(copy));
        return nodes_.back().id;
    }

    void add_edge(const std::string& source, const std::string& target, const SrgEdge& gold_edge) {
        const bool exists = std::any_of(edges_.begin(), edges_.end(), [&](const SrgEdge& e) {
            return e.source == source && e.target == target && e.relation == gold_edge.relation;
        });
        if (exists || source == target) return;
        SrgEdge e = gold_edge;
        e.source = source;
        e.target = target;
        edges_.push_back(std::move(e));
    }

    void raise_bloom(const std::string& id, Bloom level) {
        for (SrgNode& n : nodes_) {
            if (n.id == id && ordinal(n.bloom) < ordinal(level)) n.bloom = level;
        }
    }

    Srg finish() const { return Srg(student_.item_id(), student_.role(), nodes_, edges_); }

private:
    std::string fresh_id(const std::string& base) const {
        if (!has_node(base)) return base;
        for (int n = 2;; ++n) {
            std::string candidate = base + "_" + std::to_string(n);
            if (!has_node(candidate)) return candidate;
        }
    }

    const Srg& student_;
    const Srg& gold_;
    std::vector<SrgNode> nodes_;
    std::vector<SrgEdge> edges_;
    std::set<std::string> ids_;
    std::map<std::string, std::string> inserted_;  // gold id -> inserted student id
};

const SrgEdge* find_gold_edge(const Srg& gold, const ElementRef& ref) {
    for (const SrgEdge& e : gold.edges()) {
        if (e.source == ref.source && e.target == ref.target && e.relation == ref.relation) return &e;
    }
    return nullptr;
}

}  // namespace

Srg simulated_student(const Srg& student, const std::vector<VisualHint>& hs, const Srg& gold, double p,
                      std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValueError("student repair probability must lie in [0, 1]");
    }
    std::mt19937_64 rng(seed);
    Draft draft(student, gold);
    for (const VisualHint& h : hs) {
        const Deficiency& d = h.deficiency;
        const bool repair = d.kind == DeficiencyKind::MissingNode || d.kind == DeficiencyKind::MissingEdge ||
                            d.kind == DeficiencyKind::BloomRegression;
        if (!repair || !d.gold_ref) continue;
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (!(u < p)) continue;

        switch (d.kind) {
            case DeficiencyKind::MissingNode:
                if (gold.find_node(d.gold_ref->id) != nullptr) draft.ensure_gold_node(d.gold_ref->id, {});
                break;
            case DeficiencyKind::MissingEdge:
                if (const SrgEdge* ge = find_gold_edge(gold, *d.gold_ref)) {
                    const std::string s = draft.ensure_gold_node(ge->source, d.student_source);
                    const std::string t = draft.ensure_gold_node(ge->target, d.student_target);
                    draft.add_edge(s, t, *ge);
                }
                break;
            case DeficiencyKind::BloomRegression:
                if (d.student_ref && d.expected_bloom) draft.raise_bloom(d.student_ref->id, *d.expected_bloom);
                break;
            default:
                break;
        }
    }
    return draft.finish();
}

SimulatedStudent::SimulatedStudent(Srg gold, double p, std::uint64_t seed)
    : gold_(std::move(gold)), p_(p), seed_(seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValueError("student repair probability must lie in [0, 1]");
    }
}

Srg SimulatedStudent::revise(const Srg& current, const std::vector<VisualHint>& hints, std::size_t iteration) {
    return simulated_student(current, hints, gold_, p_, seed_ + iteration);
}

std::string_view to_string(Termination t) noexcept {
    return t == Termination::ThresholdMet ? "threshold_met" : "max_iterations";
}

LoopTrace loop_run(const Srg& initial, StudentModel& student, const ItemSpec& item, std::size_t t_max) {
    if (t_max == 0) {
        throw ValueError("t_max must be at least 1");
    }
    LoopTrace trace;
    trace.t_max = t_max;
    Srg current = initial;
    for (std::size_t t = 0;; ++t) {
        Assessment a = assess(current, item);
        LoopIteration it;
        it.t = t;
        it.student = current;
        it.breakdown = std::move(a.breakdown);
        if (it.breakdown.s >= item.scoring.tau) {
            trace.iterations.push_back(std::move(it));
            trace.terminated_by = Termination::ThresholdMet;
            break;
        }
        if (t == t_max) {
            trace.iterations.push_back(std::move(it));
            trace.terminated_by = Termination::MaxIterations;
            break;
        }
        it.hints = std::move(a.hints);
        trace.iterations.push_back(std::move(it));
        const LoopIteration& last = trace.iterations.back();
        try {
            current = student.revise(current, last.hints, t);
        } catch (const Error&) {
            // A failing reviser leaves the sketch as it was.
        }
    }
    return trace;
}

json loop_iteration_to_json(const LoopIteration& it) {
    json hints = json::array();
    for (const VisualHint& h : it.hints) hints.push_back(hint_to_json(h));
    return {{"t", it.t},
            {"student", srg_to_json(it.student)},
            {"breakdown", breakdown_to_json(it.breakdown)},
            {"hints", std::move(hints)}};
}

json loop_trace_to_json(const LoopTrace& trace) {
    json iterations = json::array();
    for (const LoopIteration& it : trace.iterations) iterations.push_back(loop_iteration_to_json(it));
    return {{"t_max", trace.t_max},
            {"terminated_by", std::string(to_string(trace.terminated_by))},
            {"iterations", std::move(iterations)}};
}

}  // namespace srg
