// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/remosaic.hpp"

#include "quadraw/sim_pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

namespace quadraw {

RawImage remosaic_swap(const RawImage& quad) {
    return quad_swap(quad);
}

namespace {

struct Tap {
    int dr, dc;
    double weight; // 1/d, unnormalized
};

constexpr int kSearchRadius = 5;

bool tap_order(const Tap& a, const Tap& b) {
    const int da = a.dr * a.dr + a.dc * a.dc;
    const int db = b.dr * b.dr + b.dc * b.dc;
    if (da != db)
        return da < db;
    if (a.dr != b.dr)
        return a.dr < b.dr;
    return a.dc < b.dc;
}

// Up to four nearest same-color Quad sites per (phase row, phase col, target
// color), valid wherever all taps land in bounds. Empty when the site itself
// already carries the target color.
struct InterpTable {
    std::array<std::vector<Tap>, 16 * 3> taps;
    std::array<double, 16 * 3> weight_sum{};
    int max_extent = 0; // largest |dr| or |dc| across all selected taps

    static const InterpTable& instance() {
        static const InterpTable table;
        return table;
    }

private:
    InterpTable() {
        const CfaPattern quad = CfaPattern::quad();
        for (int pr = 0; pr < 4; ++pr) {
            for (int pc = 0; pc < 4; ++pc) {
                for (int color = 0; color < 3; ++color) {
                    const size_t key = (static_cast<size_t>(pr) * 4 + pc) * 3 + color;
                    if (static_cast<int>(quad.color_at(pr, pc)) == color)
                        continue; // copied, not interpolated

                    std::vector<Tap> candidates;
                    for (int dr = -kSearchRadius; dr <= kSearchRadius; ++dr)
                        for (int dc = -kSearchRadius; dc <= kSearchRadius; ++dc)
                            if (static_cast<int>(quad.color_at(pr + dr, pc + dc)) == color)
                                candidates.push_back(
                                    {dr, dc, 1.0 / std::sqrt(double(dr) * dr + double(dc) * dc)});
                    std::sort(candidates.begin(), candidates.end(), tap_order);
                    candidates.resize(std::min<size_t>(4, candidates.size()));
                    double sum = 0.0;
                    for (const Tap& t : candidates) {
                        sum += t.weight;
                        max_extent = std::max({max_extent, std::abs(t.dr), std::abs(t.dc)});
                    }
                    taps[key] = std::move(candidates);
                    weight_sum[key] = sum;
                }
            }
        }
    }
};

// Border fallback: the mosaic is extended by whole-sample mirroring, and the
// virtual image's color map is the mirror of the real one (a reflection does
// not preserve the 4-periodic Quad phase). Gathering against the mirrored
// color map keeps same-color interpolation color-correct at the edges.
float interp_at_border(const RawImage& quad, int r, int c, int target) {
    std::array<Tap, 4> best{};
    int found = 0;
    auto insert = [&](const Tap& tap) {
        int i;
        if (found < 4)
            i = found++;
        else if (tap_order(tap, best[3]))
            i = 3;
        else
            return;
        best[i] = tap;
        for (; i > 0 && tap_order(best[i], best[i - 1]); --i)
            std::swap(best[i], best[i - 1]);
    };
    for (int dr = -kSearchRadius; dr <= kSearchRadius; ++dr) {
        for (int dc = -kSearchRadius; dc <= kSearchRadius; ++dc) {
            if (dr == 0 && dc == 0)
                continue;
            const int mr = mirror_index(r + dr, quad.height);
            const int mc = mirror_index(c + dc, quad.width);
            if (static_cast<int>(quad.pattern.color_at(mr, mc)) != target)
                continue;
            insert({dr, dc, 1.0 / std::sqrt(double(dr) * dr + double(dc) * dc)});
        }
    }
    if (found == 0)
        throw Error("no same-color sample within the interpolation radius");
    double acc = 0.0, wsum = 0.0;
    for (int i = 0; i < found; ++i) {
        const int mr = mirror_index(r + best[i].dr, quad.height);
        const int mc = mirror_index(c + best[i].dc, quad.width);
        acc += best[i].weight * quad.at(mr, mc);
        wsum += best[i].weight;
    }
    return static_cast<float>(acc / wsum);
}

} // namespace

RawImage remosaic_interp(const RawImage& quad) {
    validate_raw(quad);
    if (!quad.pattern.is_quad())
        throw PatternMismatch("remosaic_interp expects a quad4 mosaic, got " + quad.pattern.name());

    const CfaPattern bayer = CfaPattern::bayer_rggb();
    const InterpTable& table = InterpTable::instance();
    const int margin = table.max_extent;

    RawImage out = quad;
    out.pattern = bayer;
    for (int r = 0; r < quad.height; ++r) {
        const bool row_interior = r >= margin && r < quad.height - margin;
        for (int c = 0; c < quad.width; ++c) {
            const int target = static_cast<int>(bayer.color_at(r, c));
            if (static_cast<int>(quad.pattern.color_at(r, c)) == target)
                continue; // sample preserved
            if (row_interior && c >= margin && c < quad.width - margin) {
                const size_t key = (static_cast<size_t>(r % 4) * 4 + c % 4) * 3 + target;
                double acc = 0.0;
                for (const Tap& t : table.taps[key])
                    acc += t.weight * quad.at(r + t.dr, c + t.dc);
                out.at(r, c) = static_cast<float>(acc / table.weight_sum[key]);
            } else {
                out.at(r, c) = interp_at_border(quad, r, c, target);
            }
        }
    }
    return out;
}

namespace {

void bilateral_plane(std::vector<float>& plane, int width, int height, int window,
                     double sigma_range) {
    const int half = window / 2;
    const double sigma_space = window / 4.0;
    const double inv_2ss = 1.0 / (2.0 * sigma_space * sigma_space);
    const double inv_2sr = 1.0 / (2.0 * sigma_range * sigma_range);

    std::vector<double> spatial(static_cast<size_t>(window) * window);
    for (int dr = -half; dr <= half; ++dr)
        for (int dc = -half; dc <= half; ++dc)
            spatial[static_cast<size_t>(dr + half) * window + dc + half] =
                std::exp(-(double(dr) * dr + double(dc) * dc) * inv_2ss);

    std::vector<float> out(plane.size());
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double center = plane[static_cast<size_t>(r) * width + c];
            double acc = 0.0, wsum = 0.0;
            for (int dr = -half; dr <= half; ++dr) {
                const int rr = mirror_index(r + dr, height);
                for (int dc = -half; dc <= half; ++dc) {
                    const int cc = mirror_index(c + dc, width);
                    const double v = plane[static_cast<size_t>(rr) * width + cc];
                    const double diff = v - center;
                    const double w = spatial[static_cast<size_t>(dr + half) * window + dc + half] *
                                     std::exp(-diff * diff * inv_2sr);
                    acc += w * v;
                    wsum += w;
                }
            }
            out[static_cast<size_t>(r) * width + c] = static_cast<float>(acc / wsum);
        }
    }
    plane = std::move(out);
}

} // namespace

RawImage denoise_quad(const RawImage& quad, const DenoiseConfig& cfg) {
    if (cfg.window < 3 || cfg.window % 2 == 0)
        throw ConfigError("denoise window must be an odd integer >= 3");
    if (cfg.strength < 0.0)
        throw ConfigError("denoise strength must be nonnegative");
    if (!(cfg.range_sigma > 0.0))
        throw ConfigError("denoise range_sigma must be positive");
    validate_raw(quad);
    if (!quad.pattern.is_quad())
        throw PatternMismatch("denoise_quad expects a quad4 mosaic, got " + quad.pattern.name());
    if (cfg.strength == 0.0)
        return quad;

    ColorPlaneSet set = decompose_planes(quad);
    const double sigma_range = cfg.range_sigma * cfg.strength;
    for (auto& plane : set.planes)
        bilateral_plane(plane, set.plane_width, set.plane_height, cfg.window, sigma_range);
    return recompose_planes(set);
}

RawImage remosaic_joint(const RawImage& quad, const DenoiseConfig& cfg) {
    return remosaic_interp(denoise_quad(quad, cfg));
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double option_or(const AlgoOptions& options, const std::string& key, double fallback) {
    auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
}

void reject_unknown_keys(const AlgoOptions& options, std::initializer_list<const char*> known) {
    for (const auto& [key, value] : options) {
        (void)value;
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end()) {
            std::ostringstream os;
            os << "unknown algorithm option \"" << key << "\"";
            throw ConfigError(os.str());
        }
    }
}

DenoiseConfig denoise_config_from(const AlgoOptions& options, double gain_db) {
    DenoiseConfig cfg;
    cfg.strength = resolve_strength(options, gain_db);
    cfg.window = static_cast<int>(option_or(options, "window", cfg.window));
    cfg.range_sigma = option_or(options, "range_sigma", cfg.range_sigma);
    return cfg;
}

} // namespace

double resolve_strength(const AlgoOptions& options, double gain_db) {
    auto it = options.find("strength");
    if (it != options.end())
        return it->second;
    NoiseParams params;
    params.gain_db = gain_db;
    params.k_shot = option_or(options, "k_shot", params.k_shot);
    params.k_read = option_or(options, "k_read", params.k_read);
    return noise_sigma_estimate(params);
}

RemosaicAlgorithm registry_lookup(std::string_view name) {
    const std::string key = lower(name);
    if (key == "swap") {
        return {"swap", {}, [](const RawImage& quad, const AlgoOptions& options) {
                    reject_unknown_keys(options, {});
                    return remosaic_swap(quad);
                }};
    }
    if (key == "interp") {
        return {"interp", {}, [](const RawImage& quad, const AlgoOptions& options) {
                    reject_unknown_keys(options, {});
                    return remosaic_interp(quad);
                }};
    }
    if (key == "joint") {
        return {"joint", {}, [](const RawImage& quad, const AlgoOptions& options) {
                    reject_unknown_keys(options,
                                        {"strength", "window", "range_sigma", "k_shot", "k_read"});
                    return remosaic_joint(quad, denoise_config_from(options, quad.gain_db));
                }};
    }

    std::ostringstream os;
    os << "unknown remosaic algorithm \"" << name << "\"; available:";
    for (const auto& n : registry_names())
        os << " " << n;
    throw NotFoundError(os.str());
}

std::vector<std::string> registry_names() {
    return {"swap", "interp", "joint"};
}

} // namespace quadraw
