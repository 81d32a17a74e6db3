// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "srg/feedback.hpp"
#include "srg/item.hpp"
#include "srg/scoring.hpp"

namespace srg {

/// Everything one scoring round produces for a student graph.
struct Assessment {
    SimilarityBreakdown breakdown;
    std::vector<Deficiency> deficiencies;
    std::vector<VisualHint> hints;
    FeedbackReport report;
};

/// Scores, diagnoses and builds hints with the item's parameters.
Assessment assess(const Srg& student, const ItemSpec& item);

/// The reviser in the loop: receives the hints of one round and returns the
/// next graph.
class StudentModel {
public:
    virtual ~StudentModel() = default;
    virtual Srg revise(const Srg& current, const std::vector<VisualHint>& hints, std::size_t iteration) = 0;
};

/// Applies nothing.
class NullStudent final : public StudentModel {
public:
    Srg revise(const Srg& current, const std::vector<VisualHint>&, std::size_t) override { return current; }
};

/// Applies each repair hint independently with probability p.
/// Round t uses seed + t.
class SimulatedStudent final : public StudentModel {
public:
    SimulatedStudent(Srg gold, double p, std::uint64_t seed);
    Srg revise(const Srg& current, const std::vector<VisualHint>& hints, std::size_t iteration) override;

private:
    Srg gold_;
    double p_;
    std::uint64_t seed_;
};

/// Delegates to a callback, e.g. for an interactive reviser.
class CallbackStudent final : public StudentModel {
public:
    using Fn = std::function<Srg(const Srg&, const std::vector<VisualHint>&, std::size_t)>;
    explicit CallbackStudent(Fn fn) : fn_(std::move(fn)) {}
    Srg revise(const Srg& current, const std::vector<VisualHint>& hints, std::size_t iteration) override {
        return fn_(current, hints, iteration);
    }

private:
    Fn fn_;
};

/// For each repair hint, draws u in [0, 1) from a seeded mt19937_64 and
/// applies the repair iff u < p: inserts the missing gold node or edge
/// (with any missing endpoints) or raises a regressed Bloom level to the
/// gold level. Cautions are ignored. Throws ValueError unless 0 <= p <= 1.
Srg simulated_student(const Srg& student, const std::vector<VisualHint>& hints, const Srg& gold, double p,
                      std::uint64_t seed);

enum class Termination { ThresholdMet, MaxIterations };

std::string_view to_string(Termination t) noexcept;

struct LoopIteration {
    std::size_t t = 0;
    Srg student;
    SimilarityBreakdown breakdown;
    std::vector<VisualHint> hints;
};

struct LoopTrace {
    std::vector<LoopIteration> iterations;
    Termination terminated_by = Termination::MaxIterations;
    std::size_t t_max = kDefaultTMax;
};

/// Score, stop at s >= tau, otherwise hint and let the student revise; at
/// most t_max + 1 scoring rounds. The last round issues no hints. Throws
/// ValueError for t_max == 0.
LoopTrace loop_run(const Srg& initial, StudentModel& student, const ItemSpec& item, std::size_t t_max);

nlohmann::json loop_iteration_to_json(const LoopIteration& it);
nlohmann::json loop_trace_to_json(const LoopTrace& trace);

}  // namespace srg
