// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/transfer.hpp"

namespace cct {

namespace {

void require_same_dims(const ImageF& image, const ForegroundMask& mask) {
    if (image.width != mask.width || image.height != mask.height)
        throw DimensionMismatch(
            "mask " + std::to_string(mask.width) + "x" +
            std::to_string(mask.height) + " does not match image " +
            std::to_string(image.width) + "x" + std::to_string(image.height));
}

} // namespace

ImageF transfer_region(const ImageF& image, const ForegroundMask& mask,
                       const ColorTransform& t, double clip_max) {
    require_same_dims(image, mask);
    ImageF out = image;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (!mask.is_fg(x, y))
                continue;
            out.set_color(x, y, apply_transform(t, image.color_at(x, y), clip_max));
        }
    }
    return out;
}

ImageF transitive_transfer(const ImageF& image, const ForegroundMask& mask,
                           const ColorTransform& forward_src,
                           const ColorTransform& inverse_ref) {
    const ImageF neutral =
        transfer_region(image, mask, forward_src, kIntermediateClipMax);
    return transfer_region(neutral, mask, inverse_ref, 1.0);
}

} // namespace cct
