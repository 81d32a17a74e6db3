// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include "srg/assignment.hpp"

#include <algorithm>
#include <limits>

namespace srg {

AssignmentResult solve_min_cost_assignment(const CostMatrix& cost) {
    const std::size_t n = cost.size();
    AssignmentResult result;
    result.row_to_col.assign(n, -1);
    if (n == 0) {
        return result;
    }
    constexpr Units kInf = std::numeric_limits<Units>::max() / 4;

    // 1-based potentials; col_owner[j] is the row assigned to column j.
    std::vector<Units> u(n + 1, 0), v(n + 1, 0), min_slack(n + 1);
    std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);

    for (std::size_t i = 1; i <= n; ++i) {
        col_owner[0] = i;
        std::size_t j0 = 0;
        std::fill(min_slack.begin(), min_slack.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = col_owner[j0];
            Units delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const Units cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < min_slack[j]) {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    for (std::size_t j = 1; j <= n; ++j) {
        result.row_to_col[col_owner[j] - 1] = static_cast<int>(j - 1);
    }
    for (std::size_t r = 0; r < n; ++r) {
        result.total += cost(r, static_cast<std::size_t>(result.row_to_col[r]));
    }
    return result;
}

}  // namespace srg
