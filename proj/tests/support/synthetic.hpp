// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.
//
// Synthetic fixtures: rendered charts with known painted colors, and small
// two-illuminant scenes with a chart, a masked object and a procedural
// background. Everything is deterministic in its parameters.

#pragma once

#include <array>

#include "cctransfer/compose.hpp"
#include "cctransfer/image.hpp"
#include "cctransfer/patches.hpp"

namespace cct::testing {

struct RenderedChart {
    ImageF image;
    CheckerAnnotation ann;
};

/// Axis-aligned chart: square cells of cell_px pixels, top-left cell origin
/// at (origin_x, origin_y). Cells are painted with the exact given colors;
/// everything else is background.
RenderedChart render_flat_chart(const PatchSet& colors, int cell_px,
                                int origin_x, int origin_y, int image_w,
                                int image_h,
                                const LinearColor& background = {0.2, 0.2, 0.2});

/// Chart warped onto an arbitrary convex quad (TL, TR, BR, BL). Each pixel
/// is painted by mapping its center back to grid coordinates with an
/// independently solved homography and picking that cell's color.
RenderedChart render_warped_chart(const PatchSet& colors,
                                  const std::array<Vec2, 4>& quad, int image_w,
                                  int image_h,
                                  const LinearColor& background = {0.2, 0.2, 0.2});

/// 24 distinct dyadic patch colors (small multiples of 1/256). Chosen so
/// that trimmed means of identical samples reproduce them bit-exactly.
PatchSet dyadic_patch_colors();

/// A reflectance scene rendered under one illuminant. The chart occupies
/// a fixed block (its patch reflectances are the canonical chart colors),
/// a rectangular object carries variant-dependent procedural reflectance,
/// and so does the rest of the background.
struct RenderedScene {
    ImageF image;
    CheckerAnnotation ann;
    ForegroundMask mask; // the object region
};

constexpr int kSceneW = 240;
constexpr int kSceneH = 160;

/// Per-channel multiplicative illuminant. Values chosen by callers must
/// keep reflectance * illuminant within [0, 1] for 8-bit round trips.
RenderedScene render_scene(const PatchSet& chart_reflectance,
                           const LinearColor& illuminant, int variant);

/// Foreground rectangle of render_scene's mask (half-open), fixed across
/// variants: x in [150, 220), y in [30, 130).
RectI scene_object_rect();

} // namespace cct::testing
