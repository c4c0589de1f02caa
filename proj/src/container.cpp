// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/container.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace quadraw {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::filesystem::path sidecar_path(const std::filesystem::path& raw_path) {
    fs::path p = raw_path;
    p.replace_extension(".json");
    return p;
}

namespace {

void atomic_write(const fs::path& path, const std::string& bytes) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), std::streamsize(bytes.size()));
        if (!out)
            throw IoError("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

} // namespace

void save_container(const fs::path& raw_path, const RawImage& raw, const std::string& scene_id,
                    int bit_depth) {
    validate_raw(raw);
    if (bit_depth < 1 || bit_depth > 16)
        throw ConfigError("container bit_depth must be in [1,16]");
    if (!(raw.white_level > raw.black_level))
        throw InvalidInput("white_level must exceed black_level");

    const long max_dn = (1L << bit_depth) - 1;
    const double scale = raw.white_level - raw.black_level;
    std::string payload(raw.pixel_count() * 2, '\0');
    for (size_t i = 0; i < raw.data.size(); ++i) {
        const long dn =
            std::clamp(std::lround(double(raw.data[i]) * scale + raw.black_level), 0L, max_dn);
        payload[2 * i] = static_cast<char>(dn & 0xff);
        payload[2 * i + 1] = static_cast<char>((dn >> 8) & 0xff);
    }
    atomic_write(raw_path, payload);

    ordered_json header;
    header["width"] = raw.width;
    header["height"] = raw.height;
    header["cfa"] = raw.pattern.name();
    header["bit_depth"] = bit_depth;
    header["black_level"] = raw.black_level;
    header["white_level"] = raw.white_level;
    header["gain_db"] = raw.gain_db;
    header["scene_id"] = scene_id;
    atomic_write(sidecar_path(raw_path), header.dump(2) + "\n");
}

LoadedRaw load_container(const fs::path& raw_path) {
    const fs::path sidecar = sidecar_path(raw_path);
    std::ifstream side_in(sidecar);
    if (!side_in)
        throw IoError("cannot open sidecar " + sidecar.string());
    ordered_json header;
    try {
        side_in >> header;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed sidecar " + sidecar.string() + ": " + e.what());
    }

    LoadedRaw loaded;
    try {
        loaded.image.width = header.at("width").get<int>();
        loaded.image.height = header.at("height").get<int>();
        loaded.image.pattern = CfaPattern::from_name(header.at("cfa").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw IoError("sidecar " + sidecar.string() + " is missing required fields: " + e.what());
    }
    loaded.bit_depth = header.value("bit_depth", 10);
    loaded.image.black_level = header.value("black_level", 0.0);
    loaded.image.white_level = header.value("white_level", 1023.0);
    loaded.image.gain_db = header.value("gain_db", 0.0);
    loaded.scene_id = header.value("scene_id", raw_path.stem().string());
    if (!(loaded.image.white_level > loaded.image.black_level))
        throw IoError("sidecar " + sidecar.string() + " has white_level <= black_level");

    std::ifstream in(raw_path, std::ios::binary);
    if (!in)
        throw IoError("cannot open payload " + raw_path.string());
    std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    const size_t expected =
        static_cast<size_t>(loaded.image.width) * loaded.image.height * 2;
    if (payload.size() != expected) {
        std::ostringstream os;
        os << raw_path.string() << ": payload holds " << payload.size() << " bytes, expected "
           << expected << " (" << loaded.image.width << "x" << loaded.image.height << " u16)";
        throw IoError(os.str());
    }

    const double scale = loaded.image.white_level - loaded.image.black_level;
    loaded.image.data.resize(loaded.image.pixel_count());
    for (size_t i = 0; i < loaded.image.data.size(); ++i) {
        const unsigned lo = static_cast<unsigned char>(payload[2 * i]);
        const unsigned hi = static_cast<unsigned char>(payload[2 * i + 1]);
        const double dn = double((hi << 8) | lo);
        loaded.image.data[i] = static_cast<float>(
            std::clamp((dn - loaded.image.black_level) / scale, 0.0, 1.0));
    }
    validate_raw(loaded.image);
    return loaded;
}

std::vector<fs::path> list_containers(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw IoError(dir.string() + " is not a directory");
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".raw")
            paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    return paths;
}

} // namespace quadraw
