// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadraw/bench.hpp"
#include "quadraw/commands.hpp"
#include "test_support.hpp"

using namespace quadraw;

TEST_CASE("time_algorithm returns the requested number of samples") {
    const RawImage input = make_bench_input(64, 64, 24.0, {});
    const RuntimeStats stats = time_algorithm(registry_lookup("swap"), input, 5);
    CHECK(stats.reps == 5);
    CHECK(stats.algorithm == "swap");
    CHECK(stats.width == 64);
    CHECK(stats.height == 64);
    CHECK(stats.median_seconds >= 0.0);
    CHECK(stats.mean_seconds >= 0.0);
    CHECK(stats.threads == 1);
}

TEST_CASE("median stays below mean plus one stddev") {
    const RawImage input = make_bench_input(128, 128, 24.0, {});
    const RuntimeStats stats = time_algorithm(registry_lookup("interp"), input, 7);
    CHECK(stats.median_seconds <= stats.mean_seconds + stats.stddev_seconds);
}

TEST_CASE("time grows with input area (monotone sanity)") {
    const RawImage small = make_bench_input(128, 96, 24.0, {});
    const RawImage large = make_bench_input(1024, 768, 24.0, {});
    const RemosaicAlgorithm interp = registry_lookup("interp");
    const RuntimeStats t_small = time_algorithm(interp, small, 5);
    const RuntimeStats t_large = time_algorithm(interp, large, 5);
    CHECK(t_large.median_seconds > t_small.median_seconds);
}

TEST_CASE("reps below 3 are rejected") {
    const RawImage input = make_bench_input(64, 64, 24.0, {});
    CHECK_THROWS_AS(time_algorithm(registry_lookup("swap"), input, 1), ConfigError);
    CHECK_THROWS_AS(time_algorithm(registry_lookup("swap"), input, 2), ConfigError);
}

TEST_CASE("nondeterministic algorithms are caught by the output guard") {
    RemosaicAlgorithm flaky;
    flaky.name = "flaky";
    int counter = 0;
    flaky.run = [&counter](const RawImage& quad, const AlgoOptions&) {
        RawImage out = quad_swap(quad);
        out.data[0] = static_cast<float>(++counter) / 100.0f;
        return out;
    };
    const RawImage input = make_bench_input(64, 64, 24.0, {});
    CHECK_THROWS_AS(time_algorithm(flaky, input, 3), Error);
}

TEST_CASE("timing does not alter outputs") {
    const RawImage input = make_bench_input(64, 64, 24.0, {});
    const RemosaicAlgorithm interp = registry_lookup("interp");
    const RawImage before = interp(input);
    (void)time_algorithm(interp, input, 3);
    const RawImage after = interp(input);
    CHECK(before.data == after.data);
}

TEST_CASE("extrapolation is linear in pixel count, matching the published anchors") {
    RuntimeStats stats;
    stats.width = 1200;
    stats.height = 1800;
    stats.median_seconds = 1.0;

    const double at_64mp = extrapolate(stats, 64.0);
    CHECK(at_64mp >= 29.5);
    CHECK(at_64mp <= 29.7);
    CHECK(at_64mp == doctest::Approx(64e6 / (1200.0 * 1800.0)).epsilon(1e-12));

    stats.median_seconds = 6.1;
    CHECK(extrapolate(stats, 64.0) == doctest::Approx(180.7).epsilon(1e-3));
    stats.median_seconds = 4.4;
    CHECK(extrapolate(stats, 64.0) == doctest::Approx(130.4).epsilon(1e-3));
}

TEST_CASE("extrapolating to the measured size returns the measured time") {
    RuntimeStats stats;
    stats.width = 1000;
    stats.height = 500;
    stats.median_seconds = 0.25;
    CHECK(extrapolate(stats, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("extrapolate rejects zero measured pixels") {
    RuntimeStats stats;
    CHECK_THROWS_AS(extrapolate(stats, 64.0), InvalidInput);
}
