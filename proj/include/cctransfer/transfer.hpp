// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include "cctransfer/color.hpp"
#include "cctransfer/image.hpp"

namespace cct {

/// Apply a color transform to every foreground pixel; background pixels
/// pass through bit-identical. Output channels on foreground pixels are
/// clipped to [0, clip_max].
ImageF transfer_region(const ImageF& image, const ForegroundMask& mask,
                       const ColorTransform& t,
                       double clip_max = kIntermediateClipMax);

/// Re-illuminate the masked foreground through the chart-referenced
/// condition: forward map of the source image first, then the inverse map
/// of the reference image. Intermediate values are clipped at
/// kIntermediateClipMax only; the final result is clipped to [0,1].
ImageF transitive_transfer(const ImageF& image, const ForegroundMask& mask,
                           const ColorTransform& forward_src,
                           const ColorTransform& inverse_ref);

} // namespace cct
