// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/run_config.hpp"

#include <json.hpp>

#include <fstream>

namespace quadraw {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json to_json(const RunConfig& cfg) {
    ordered_json j;
    j["noise"] = {{"k_shot", cfg.noise.k_shot},
                  {"k_read", cfg.noise.k_read},
                  {"gains_db", cfg.noise.gains_db},
                  {"seed", cfg.noise.seed}};
    j["isp"] = {{"demosaic", to_string(cfg.isp.demosaic)},
                {"wb_gains", cfg.isp.wb_gains},
                {"gamma", cfg.isp.gamma == GammaCurve::srgb ? "srgb" : "power"},
                {"gamma_exponent", cfg.isp.gamma_exponent},
                {"clip", cfg.isp.clip}};
    j["metrics"] = {{"kld_bins", cfg.metrics.kld_bins},
                    {"kld_epsilon", cfg.metrics.kld_epsilon},
                    {"ssim_window", cfg.metrics.ssim_window},
                    {"ssim_sigma", cfg.metrics.ssim_sigma},
                    {"ssim_k1", cfg.metrics.ssim_k1},
                    {"ssim_k2", cfg.metrics.ssim_k2},
                    {"psnr_cap", cfg.metrics.psnr_cap}};
    j["algorithm"] = {{"name", cfg.algorithm.name}, {"options", cfg.algorithm.options}};
    j["bit_depth"] = cfg.bit_depth;
    return j;
}

} // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed config " + path.string() + ": " + e.what());
    }

    RunConfig cfg;
    try {
        if (j.contains("noise")) {
            const auto& n = j["noise"];
            cfg.noise.k_shot = n.value("k_shot", cfg.noise.k_shot);
            cfg.noise.k_read = n.value("k_read", cfg.noise.k_read);
            cfg.noise.gains_db = n.value("gains_db", cfg.noise.gains_db);
            cfg.noise.seed = n.value("seed", cfg.noise.seed);
        }
        if (j.contains("isp")) {
            const auto& i = j["isp"];
            cfg.isp.demosaic = demosaic_from_name(i.value("demosaic", to_string(cfg.isp.demosaic)));
            cfg.isp.wb_gains = i.value("wb_gains", cfg.isp.wb_gains);
            const std::string gamma = i.value("gamma", std::string("srgb"));
            if (gamma != "srgb" && gamma != "power")
                throw ConfigError("gamma must be \"srgb\" or \"power\"");
            cfg.isp.gamma = gamma == "srgb" ? GammaCurve::srgb : GammaCurve::power;
            cfg.isp.gamma_exponent = i.value("gamma_exponent", cfg.isp.gamma_exponent);
            cfg.isp.clip = i.value("clip", cfg.isp.clip);
        }
        if (j.contains("metrics")) {
            const auto& m = j["metrics"];
            cfg.metrics.kld_bins = m.value("kld_bins", cfg.metrics.kld_bins);
            cfg.metrics.kld_epsilon = m.value("kld_epsilon", cfg.metrics.kld_epsilon);
            cfg.metrics.ssim_window = m.value("ssim_window", cfg.metrics.ssim_window);
            cfg.metrics.ssim_sigma = m.value("ssim_sigma", cfg.metrics.ssim_sigma);
            cfg.metrics.ssim_k1 = m.value("ssim_k1", cfg.metrics.ssim_k1);
            cfg.metrics.ssim_k2 = m.value("ssim_k2", cfg.metrics.ssim_k2);
            cfg.metrics.psnr_cap = m.value("psnr_cap", cfg.metrics.psnr_cap);
        }
        if (j.contains("algorithm")) {
            const auto& a = j["algorithm"];
            cfg.algorithm.name = a.value("name", cfg.algorithm.name);
            if (a.contains("options"))
                cfg.algorithm.options = a["options"].get<AlgoOptions>();
        }
        cfg.bit_depth = j.value("bit_depth", cfg.bit_depth);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid config " + path.string() + ": " + e.what());
    }
    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.noise.k_shot < 0.0 || cfg.noise.k_read < 0.0)
        throw ConfigError("noise coefficients must be nonnegative");
    for (double g : cfg.noise.gains_db)
        if (g < 0.0)
            throw ConfigError("gains must be nonnegative decibels");
    for (double g : cfg.isp.wb_gains)
        if (!(g > 0.0))
            throw ConfigError("white balance gains must be positive");
    if (!(cfg.isp.gamma_exponent > 0.0))
        throw ConfigError("gamma exponent must be positive");
    if (cfg.metrics.kld_bins < 2)
        throw ConfigError("kld_bins must be >= 2");
    if (!(cfg.metrics.kld_epsilon > 0.0))
        throw ConfigError("kld_epsilon must be positive");
    if (cfg.metrics.ssim_window < 3 || cfg.metrics.ssim_window % 2 == 0)
        throw ConfigError("ssim_window must be an odd integer >= 3");
    if (!(cfg.metrics.ssim_sigma > 0.0))
        throw ConfigError("ssim_sigma must be positive");
    if (cfg.bit_depth < 1 || cfg.bit_depth > 16)
        throw ConfigError("bit_depth must be in [1,16]");
}

std::string canonical_config(const RunConfig& cfg) {
    return to_json(cfg).dump();
}

std::string config_fingerprint(const RunConfig& cfg) {
    return fingerprint_hex(canonical_config(cfg));
}

} // namespace quadraw
