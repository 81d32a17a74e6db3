// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace srg {

/// Fixed-point cost/weight units used by the combinatorial solvers. Every
/// per-pair weight and per-operation edit cost is rounded to 1e-9 before
/// optimization so optima compare exactly regardless of summation order.
using Units = std::int64_t;

inline constexpr double kUnitsPerOne = 1e9;

inline Units to_units(double x) noexcept { return static_cast<Units>(std::llround(x * kUnitsPerOne)); }
inline double from_units(Units u) noexcept { return static_cast<double>(u) / kUnitsPerOne; }

/// Dense row-major square matrix.
class CostMatrix {
public:
    explicit CostMatrix(std::size_t n = 0, Units fill = 0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }
    Units& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
    Units operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }

private:
    std::size_t n_;
    std::vector<Units> data_;
};

struct AssignmentResult {
    std::vector<int> row_to_col;
    Units total = 0;
};

/// Minimum-cost perfect assignment (Kuhn-Munkres with potentials, O(n^3)).
/// Exact in integer arithmetic.
AssignmentResult solve_min_cost_assignment(const CostMatrix& cost);

}  // namespace srg
