// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/raw_image.hpp"

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace quadraw {

/// Plane-wise bilateral pre-filter settings. strength is the noise sigma
/// estimate; 0 disables the filter. The range kernel sigma is
/// range_sigma * strength.
struct DenoiseConfig {
    double strength = 0.0;
    int window = 5; // odd, >= 3
    double range_sigma = 3.0;
};

/// Pure swap rearrangement (quad_swap). Fastest baseline; exact on flat
/// signal, one-pixel displacement artifacts elsewhere.
RawImage remosaic_swap(const RawImage& quad);

/// Interpolating baseline: copies samples whose Quad color already matches
/// the target Bayer color and estimates the rest by inverse-distance
/// averaging of the four nearest same-color Quad samples (mirrored borders).
RawImage remosaic_interp(const RawImage& quad);

/// Filters each of the 16 Quad color planes with a bilateral filter and
/// recomposes. strength 0 returns the input bit-identically.
RawImage denoise_quad(const RawImage& quad, const DenoiseConfig& cfg);

/// denoise_quad followed by remosaic_interp.
RawImage remosaic_joint(const RawImage& quad, const DenoiseConfig& cfg);

using AlgoOptions = std::map<std::string, double>;

/// A named Quad -> Bayer algorithm. Output dimensions equal input
/// dimensions; output pattern is Bayer RGGB; values stay in [0,1].
struct RemosaicAlgorithm {
    std::string name;
    AlgoOptions options;
    std::function<RawImage(const RawImage&, const AlgoOptions&)> run;

    RawImage operator()(const RawImage& quad) const { return run(quad, options); }
};

/// Looks up "swap", "interp", or "joint" (case-insensitive). Unknown names
/// raise NotFoundError listing the available algorithms.
RemosaicAlgorithm registry_lookup(std::string_view name);
std::vector<std::string> registry_names();

/// The strength used by "joint" when the options map does not pin one:
/// the model sigma estimate at mid-gray for the frame's gain tag.
double resolve_strength(const AlgoOptions& options, double gain_db);

} // namespace quadraw
