// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/image.hpp"

#include <array>

namespace cct {

ForegroundMask ForegroundMask::from_image(const Image8& m) {
    if (m.channels != 1)
        throw InvalidMask("mask must be single-channel, got " +
                          std::to_string(m.channels) + " channels");
    ForegroundMask out;
    out.width = m.width;
    out.height = m.height;
    out.fg.resize(m.pixels.size());
    for (std::size_t i = 0; i < m.pixels.size(); ++i) {
        const std::uint8_t v = m.pixels[i];
        if (v != 0 && v != 255)
            throw InvalidMask("mask pixel value " + std::to_string(v) +
                              " is neither 0 nor 255");
        out.fg[i] = v ? 1 : 0;
        out.fg_count += out.fg[i];
    }
    if (out.fg_count == 0)
        throw EmptyMask("mask has no foreground pixels");
    return out;
}

ImageF decode_linear(const Image8& src) {
    if (src.channels != 3)
        throw DimensionMismatch("decode_linear expects a 3-channel image");
    // One LUT entry per byte level keeps the decode exact and cheap.
    static const std::array<float, 256> lut = [] {
        std::array<float, 256> t{};
        for (int v = 0; v < 256; ++v)
            t[v] = static_cast<float>(
                srgb_channel_to_linear(static_cast<std::uint8_t>(v)));
        return t;
    }();
    ImageF out(src.width, src.height);
    for (std::size_t i = 0; i < src.pixels.size(); ++i)
        out.pixels[i] = lut[src.pixels[i]];
    return out;
}

Image8 encode_srgb(const ImageF& src) {
    Image8 out(src.width, src.height, 3);
    for (std::size_t i = 0; i < src.pixels.size(); ++i)
        out.pixels[i] = linear_channel_to_srgb(src.pixels[i]);
    return out;
}

} // namespace cct
