// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/raw_image.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace quadraw {

/// On-disk mosaic format: a little-endian unsigned 16-bit row-major payload
/// (<stem>.raw, no padding) plus a JSON sidecar (<stem>.json) holding
/// {width, height, cfa, bit_depth, black_level, white_level, gain_db,
/// scene_id}. Missing sidecar fields default to bit_depth 10, black 0,
/// white 1023, gain 0.
struct LoadedRaw {
    RawImage image;
    std::string scene_id;
    int bit_depth = 16;
};

/// Digital numbers are clamp(round(v * (white - black) + black), 0, 2^bit_depth - 1);
/// loading normalizes back to [0,1]. Integer DN content round-trips exactly.
void save_container(const std::filesystem::path& raw_path, const RawImage& raw,
                    const std::string& scene_id, int bit_depth = 16);

LoadedRaw load_container(const std::filesystem::path& raw_path);

/// Sorted list of the *.raw payload paths in a directory.
std::vector<std::filesystem::path> list_containers(const std::filesystem::path& dir);

std::filesystem::path sidecar_path(const std::filesystem::path& raw_path);

} // namespace quadraw
