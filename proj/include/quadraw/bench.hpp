// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "quadraw/raw_image.hpp"
#include "quadraw/remosaic.hpp"

namespace quadraw {

struct RuntimeStats {
    std::string algorithm;
    int width = 0;
    int height = 0;
    int reps = 0;
    int threads = 1;
    double median_seconds = 0.0;
    double mean_seconds = 0.0;
    double stddev_seconds = 0.0;
};

/// Wall-clock timing of the algorithm alone (no file I/O). One untimed
/// warm-up run, then reps >= 3 timed repetitions whose outputs are checked
/// bit-identical to guard against skew from lazy or stateful evaluation.
RuntimeStats time_algorithm(const RemosaicAlgorithm& algo, const RawImage& input, int reps);

/// Estimated seconds at the target sensor size, scaling the measured median
/// linearly in pixel count (1 megapixel = 1e6 pixels).
double extrapolate(const RuntimeStats& stats, double target_megapixels);

} // namespace quadraw
