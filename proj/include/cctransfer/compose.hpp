// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include "cctransfer/image.hpp"
#include "cctransfer/patches.hpp"

namespace cct {

/// Half-open pixel rectangle [x0,x1) x [y0,y1).
struct RectI {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    long long area() const {
        return static_cast<long long>(width()) * height();
    }
    bool intersects(const RectI& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
    bool operator==(const RectI&) const = default;
};

/// Default inflation around the annotated corners when deriving the chart
/// bounding box, and the minimum crop-to-image area ratio below which the
/// chart is considered too central to crop around.
constexpr int kBboxMarginPx = 10;
constexpr double kCropMinAreaFrac = 0.25;

/// Pixelwise selection: mask ? foreground_img : background_img, every
/// channel clipped to [0,1].
ImageF composite(const ImageF& foreground_img, const ImageF& background_img,
                 const ForegroundMask& mask);

/// Axis-aligned bounding box of the annotation corners, inflated by
/// margin_px and clamped to the image bounds.
RectI checker_bbox(const CheckerAnnotation& ann, int image_w, int image_h,
                   int margin_px = kBboxMarginPx);

/// Largest axis-aligned rectangle avoiding the chart box. The four
/// candidates (left / right / above / below the box, each spanning the
/// image's full extent in the other axis) are exhaustive for a single
/// obstacle, so the winner is the true maximal empty rectangle. Ties go to
/// the larger width, then the topmost-leftmost origin. Throws
/// CheckerDominates when the best candidate covers less than
/// min_area_frac of the image.
RectI crop_excluding_checker(int image_w, int image_h, const RectI& bbox,
                             double min_area_frac = kCropMinAreaFrac);

ImageF crop(const ImageF& image, const RectI& r);
Image8 crop(const Image8& image, const RectI& r);

/// Crop a mask. Throws EmptyMask when no foreground pixel survives.
ForegroundMask crop(const ForegroundMask& mask, const RectI& r);

} // namespace cct
