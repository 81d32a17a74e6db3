// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>

namespace srg {

/// "2026-01-02T03:04:05.678Z".
std::string utc_timestamp_ms(std::chrono::system_clock::time_point t);

}  // namespace srg
