// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace srg {

/// Cognitive level of a concept, ordered Remember (1) through Create (6).
enum class Bloom : std::uint8_t {
    Remember = 1,
    Understand = 2,
    Apply = 3,
    Analyze = 4,
    Evaluate = 5,
    Create = 6,
};

inline constexpr std::array<Bloom, 6> kAllBloomLevels = {
    Bloom::Remember, Bloom::Understand, Bloom::Apply,
    Bloom::Analyze,  Bloom::Evaluate,   Bloom::Create,
};

inline constexpr int kMaxBloomGap = 5;

constexpr int ordinal(Bloom b) noexcept { return static_cast<int>(b); }

/// Throws ValueError outside 1..6.
Bloom bloom_from_ordinal(int ordinal);

std::string_view to_string(Bloom b) noexcept;

/// Exact, case-sensitive level name. Throws ValueError for anything else.
Bloom bloom_from_string(std::string_view name);

}  // namespace srg
