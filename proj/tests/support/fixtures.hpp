// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "srg/graph.hpp"
#include "srg/item.hpp"

namespace srg::testing {

inline std::filesystem::path data_dir() { return std::filesystem::path(SRG_SOURCE_DIR) / "data"; }

inline std::filesystem::path water_dye_dir() { return data_dir() / "fixtures" / "water-dye"; }

inline const ItemSpec& water_dye() {
    static const ItemSpec item = load_item(water_dye_dir());
    return item;
}

inline Srg water_dye_sample(const std::string& name) {
    return load_srg_file((water_dye_dir() / "samples" / (name + ".srg.json")).string());
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("srgrade-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace srg::testing
