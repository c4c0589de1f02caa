// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/isp.hpp"
#include "quadraw/metrics.hpp"
#include "quadraw/remosaic.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace quadraw {

struct NoiseConfig {
    double k_shot = 2.5e-4;
    double k_read = 1.0e-3;
    std::vector<double> gains_db = {0.0, 24.0, 42.0};
    uint64_t seed = 0;
};

struct AlgorithmConfig {
    std::string name = "interp";
    AlgoOptions options;
};

/// Everything a run depends on; serialized into every report fingerprint.
struct RunConfig {
    NoiseConfig noise;
    IspConfig isp;
    MetricParams metrics;
    AlgorithmConfig algorithm;
    int bit_depth = 16; // container output depth
};

RunConfig load_run_config(const std::filesystem::path& path);
void validate_config(const RunConfig& cfg);

/// Canonical JSON dump (stable key order, full precision).
std::string canonical_config(const RunConfig& cfg);
std::string config_fingerprint(const RunConfig& cfg);

} // namespace quadraw
