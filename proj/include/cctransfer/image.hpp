// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cctransfer/color.hpp"
#include "cctransfer/errors.hpp"

namespace cct {

/// Interleaved 8-bit raster, 1 (gray/mask) or 3 (sRGB) channels.
struct Image8 {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> pixels; // row-major, interleaved

    Image8() = default;
    Image8(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c),
          pixels(static_cast<std::size_t>(w) * h * c, fill) {}

    std::uint8_t& at(int x, int y, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
};

/// Interleaved linear-light RGB raster, float storage.
struct ImageF {
    int width = 0;
    int height = 0;
    std::vector<float> pixels; // row-major, r,g,b interleaved

    ImageF() = default;
    ImageF(int w, int h, float fill = 0.f)
        : width(w), height(h),
          pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

    std::size_t offset(int x, int y) const {
        return (static_cast<std::size_t>(y) * width + x) * 3;
    }
    LinearColor color_at(int x, int y) const {
        const std::size_t o = offset(x, y);
        return {pixels[o], pixels[o + 1], pixels[o + 2]};
    }
    void set_color(int x, int y, const LinearColor& c) {
        const std::size_t o = offset(x, y);
        pixels[o] = static_cast<float>(c.r);
        pixels[o + 1] = static_cast<float>(c.g);
        pixels[o + 2] = static_cast<float>(c.b);
    }
};

/// Binary foreground mask. Stored as 0/1 bytes with a cached count.
struct ForegroundMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> fg; // 0 = background, 1 = foreground
    std::size_t fg_count = 0;

    bool is_fg(int x, int y) const {
        return fg[static_cast<std::size_t>(y) * width + x] != 0;
    }

    /// Build from a single-channel mask image. Pixels must be exactly 0 or
    /// 255; anything else is an input error. Throws EmptyMask when no pixel
    /// is foreground.
    static ForegroundMask from_image(const Image8& m);
};

/// sRGB-decode an 8-bit 3-channel image to linear light.
ImageF decode_linear(const Image8& src);

/// Encode a linear image to 8-bit sRGB. Channels are clipped to [0,1].
Image8 encode_srgb(const ImageF& src);

} // namespace cct
