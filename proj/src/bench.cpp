// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>

namespace quadraw {

namespace {

uint64_t hash_image(const RawImage& raw) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* bytes, size_t n) {
        const auto* p = static_cast<const unsigned char*>(bytes);
        for (size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    mix(raw.data.data(), raw.data.size() * sizeof(float));
    mix(&raw.width, sizeof raw.width);
    mix(&raw.height, sizeof raw.height);
    return h;
}

} // namespace

RuntimeStats time_algorithm(const RemosaicAlgorithm& algo, const RawImage& input, int reps) {
    if (reps < 3)
        throw ConfigError("benchmark needs reps >= 3");
    validate_raw(input);

    const uint64_t reference = hash_image(algo(input)); // warm-up, untimed

    std::vector<double> samples;
    samples.reserve(reps);
    for (int i = 0; i < reps; ++i) {
        const auto start = std::chrono::steady_clock::now();
        const RawImage out = algo(input);
        const auto stop = std::chrono::steady_clock::now();
        if (hash_image(out) != reference)
            throw Error("algorithm \"" + algo.name + "\" produced differing outputs across runs");
        samples.push_back(std::chrono::duration<double>(stop - start).count());
    }

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    const double median =
        n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    double mean = 0.0;
    for (double s : samples)
        mean += s;
    mean /= n;
    double var = 0.0;
    for (double s : samples)
        var += (s - mean) * (s - mean);
    var /= (n - 1);

    RuntimeStats stats;
    stats.algorithm = algo.name;
    stats.width = input.width;
    stats.height = input.height;
    stats.reps = reps;
    stats.threads = 1;
    stats.median_seconds = median;
    stats.mean_seconds = mean;
    stats.stddev_seconds = std::sqrt(var);
    return stats;
}

double extrapolate(const RuntimeStats& stats, double target_megapixels) {
    const double measured_pixels = double(stats.width) * stats.height;
    if (measured_pixels <= 0.0)
        throw InvalidInput("cannot extrapolate from zero measured pixels");
    return stats.median_seconds * (target_megapixels * 1e6) / measured_pixels;
}

} // namespace quadraw
