// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#include "quadraw/png_io.hpp"

#include "quadraw/error.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace quadraw {

namespace {

constexpr unsigned char kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

uint32_t get_u32(const unsigned char* p) {
    return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

void append_chunk(std::vector<unsigned char>& out, const char type[4],
                  const std::vector<unsigned char>& data) {
    put_u32(out, static_cast<uint32_t>(data.size()));
    const size_t type_pos = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc = crc32(crc32(0L, Z_NULL, 0), out.data() + type_pos, uInt(4 + data.size()));
    put_u32(out, static_cast<uint32_t>(crc));
}

std::vector<unsigned char> zlib_compress(const std::vector<unsigned char>& raw) {
    uLongf bound = compressBound(uLong(raw.size()));
    std::vector<unsigned char> out(bound);
    if (compress2(out.data(), &bound, raw.data(), uLong(raw.size()), Z_DEFAULT_COMPRESSION) != Z_OK)
        throw IoError("PNG deflate failed");
    out.resize(bound);
    return out;
}

std::vector<unsigned char> zlib_decompress(const std::vector<unsigned char>& comp,
                                           size_t expected_size) {
    std::vector<unsigned char> out(expected_size);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK)
        throw IoError("PNG inflate init failed");
    zs.next_in = const_cast<Bytef*>(comp.data());
    zs.avail_in = uInt(comp.size());
    zs.next_out = out.data();
    zs.avail_out = uInt(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != expected_size)
        throw IoError("PNG pixel data is truncated or corrupt");
    return out;
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc)
        return a;
    return pb <= pc ? b : c;
}

void unfilter(std::vector<unsigned char>& raw, int height, size_t stride, int bpp) {
    std::vector<unsigned char> prev(stride - 1, 0);
    for (int r = 0; r < height; ++r) {
        unsigned char* row = raw.data() + size_t(r) * stride;
        const int filter = row[0];
        unsigned char* cur = row + 1;
        const size_t n = stride - 1;
        switch (filter) {
        case 0:
            break;
        case 1: // Sub
            for (size_t i = bpp; i < n; ++i)
                cur[i] = static_cast<unsigned char>(cur[i] + cur[i - bpp]);
            break;
        case 2: // Up
            for (size_t i = 0; i < n; ++i)
                cur[i] = static_cast<unsigned char>(cur[i] + prev[i]);
            break;
        case 3: // Average
            for (size_t i = 0; i < n; ++i) {
                const int left = i >= size_t(bpp) ? cur[i - bpp] : 0;
                cur[i] = static_cast<unsigned char>(cur[i] + ((left + prev[i]) >> 1));
            }
            break;
        case 4: // Paeth
            for (size_t i = 0; i < n; ++i) {
                const int left = i >= size_t(bpp) ? cur[i - bpp] : 0;
                const int upleft = i >= size_t(bpp) ? prev[i - bpp] : 0;
                cur[i] = static_cast<unsigned char>(cur[i] + paeth(left, prev[i], upleft));
            }
            break;
        default:
            throw IoError("PNG scanline uses an unknown filter type");
        }
        std::memcpy(prev.data(), cur, n);
    }
}

} // namespace

RgbImage read_png(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open PNG file " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0)
        throw IoError(path.string() + " is not a PNG file");

    uint32_t width = 0, height = 0;
    int bit_depth = 0, color_type = 0;
    bool seen_ihdr = false;
    std::vector<unsigned char> idat;

    size_t pos = 8;
    while (pos + 8 <= bytes.size()) {
        const uint32_t len = get_u32(&bytes[pos]);
        if (pos + 12 + size_t(len) > bytes.size())
            throw IoError(path.string() + ": truncated PNG chunk");
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const unsigned char* data = &bytes[pos + 8];

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13)
                throw IoError(path.string() + ": malformed IHDR");
            width = get_u32(data);
            height = get_u32(data + 4);
            bit_depth = data[8];
            color_type = data[9];
            if (data[12] != 0)
                throw IoError(path.string() + ": interlaced PNG is not supported");
            if (color_type == 3)
                throw IoError(path.string() + ": palette PNG is not supported");
            if (bit_depth != 8 && bit_depth != 16)
                throw IoError(path.string() + ": only 8- and 16-bit PNG is supported");
            seen_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + size_t(len);
    }
    if (!seen_ihdr || width == 0 || height == 0)
        throw IoError(path.string() + ": missing or empty IHDR");

    const int channels = color_type == 0 ? 1 : color_type == 2 ? 3 : color_type == 4 ? 2 : 4;
    if (color_type != 0 && color_type != 2 && color_type != 4 && color_type != 6)
        throw IoError(path.string() + ": unsupported PNG color type");

    const int bytes_per_sample = bit_depth / 8;
    const int bpp = channels * bytes_per_sample;
    const size_t stride = 1 + size_t(width) * bpp;
    auto raw = zlib_decompress(idat, stride * height);
    unfilter(raw, int(height), stride, bpp);

    RgbImage rgb = make_rgb(int(width), int(height), 0, 0, 0, RgbDomain::gamma);
    const double maxval = bit_depth == 16 ? 65535.0 : 255.0;
    const int color_channels = channels >= 3 ? 3 : 1;
    for (uint32_t r = 0; r < height; ++r) {
        const unsigned char* row = raw.data() + size_t(r) * stride + 1;
        for (uint32_t c = 0; c < width; ++c) {
            const unsigned char* px = row + size_t(c) * bpp;
            for (int ch = 0; ch < 3; ++ch) {
                const unsigned char* s = px + std::min(ch, color_channels - 1) * bytes_per_sample;
                const unsigned v = bit_depth == 16 ? (unsigned(s[0]) << 8) | s[1] : s[0];
                rgb.planes[ch][size_t(r) * width + c] = static_cast<float>(v / maxval);
            }
        }
    }
    return rgb;
}

void write_png16(const RgbImage& rgb, const std::filesystem::path& path) {
    if (rgb.width <= 0 || rgb.height <= 0)
        throw InvalidInput("cannot write an empty PNG");

    std::vector<unsigned char> scanlines;
    scanlines.reserve(size_t(rgb.height) * (1 + size_t(rgb.width) * 6));
    for (int r = 0; r < rgb.height; ++r) {
        scanlines.push_back(0); // filter: none
        for (int c = 0; c < rgb.width; ++c) {
            for (int ch = 0; ch < 3; ++ch) {
                const double v = std::clamp(double(rgb.at(ch, r, c)), 0.0, 1.0);
                const auto dn = static_cast<uint16_t>(std::lround(v * 65535.0));
                scanlines.push_back(static_cast<unsigned char>(dn >> 8));
                scanlines.push_back(static_cast<unsigned char>(dn & 0xff));
            }
        }
    }

    std::vector<unsigned char> ihdr;
    put_u32(ihdr, uint32_t(rgb.width));
    put_u32(ihdr, uint32_t(rgb.height));
    ihdr.push_back(16); // bit depth
    ihdr.push_back(2);  // truecolor
    ihdr.push_back(0);  // deflate
    ihdr.push_back(0);  // adaptive filtering
    ihdr.push_back(0);  // no interlace

    std::vector<unsigned char> file(kSignature, kSignature + 8);
    append_chunk(file, "IHDR", ihdr);
    append_chunk(file, "IDAT", zlib_compress(scanlines));
    append_chunk(file, "IEND", {});

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(file.data()), std::streamsize(file.size()));
    if (!out)
        throw IoError("short write to " + path.string());
}

} // namespace quadraw
