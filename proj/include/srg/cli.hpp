// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace srg {

/// Exit codes of the srgrade command line.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;  ///< stderr carries {"error": kind, "message": ...}
inline constexpr int kExitUsage = 2;

/// Entry point of the srgrade tool, with injectable streams for tests.
int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace srg
