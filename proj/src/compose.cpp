// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/compose.hpp"

#include <algorithm>
#include <cmath>

namespace cct {

ImageF composite(const ImageF& foreground_img, const ImageF& background_img,
                 const ForegroundMask& mask) {
    if (foreground_img.width != background_img.width ||
        foreground_img.height != background_img.height ||
        foreground_img.width != mask.width ||
        foreground_img.height != mask.height)
        throw DimensionMismatch("composite inputs must share dimensions");

    ImageF out(foreground_img.width, foreground_img.height);
    const std::size_t n = out.pixels.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pix = i / 3;
        const float v = mask.fg[pix] ? foreground_img.pixels[i]
                                     : background_img.pixels[i];
        out.pixels[i] = std::clamp(v, 0.f, 1.f);
    }
    return out;
}

RectI checker_bbox(const CheckerAnnotation& ann, int image_w, int image_h,
                   int margin_px) {
    double min_x = ann.corners[0].x, max_x = ann.corners[0].x;
    double min_y = ann.corners[0].y, max_y = ann.corners[0].y;
    for (const Vec2& c : ann.corners) {
        min_x = std::min(min_x, c.x);
        max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y);
        max_y = std::max(max_y, c.y);
    }
    RectI r;
    r.x0 = std::max(0, static_cast<int>(std::floor(min_x)) - margin_px);
    r.y0 = std::max(0, static_cast<int>(std::floor(min_y)) - margin_px);
    r.x1 = std::min(image_w, static_cast<int>(std::ceil(max_x)) + margin_px);
    r.y1 = std::min(image_h, static_cast<int>(std::ceil(max_y)) + margin_px);
    return r;
}

RectI crop_excluding_checker(int image_w, int image_h, const RectI& bbox,
                             double min_area_frac) {
    if (bbox.x0 < 0 || bbox.y0 < 0 || bbox.x1 > image_w || bbox.y1 > image_h ||
        bbox.width() <= 0 || bbox.height() <= 0)
        throw Error("crop_excluding_checker: bbox outside image bounds");

    const RectI candidates[4] = {
        {0, 0, bbox.x0, image_h},       // left of box
        {bbox.x1, 0, image_w, image_h}, // right of box
        {0, 0, image_w, bbox.y0},       // above box
        {0, bbox.y1, image_w, image_h}, // below box
    };

    const RectI* best = nullptr;
    for (const RectI& c : candidates) {
        if (c.width() <= 0 || c.height() <= 0)
            continue;
        if (!best) {
            best = &c;
            continue;
        }
        if (c.area() != best->area()) {
            if (c.area() > best->area())
                best = &c;
            continue;
        }
        if (c.width() != best->width()) {
            if (c.width() > best->width())
                best = &c;
            continue;
        }
        if (c.y0 < best->y0 || (c.y0 == best->y0 && c.x0 < best->x0))
            best = &c;
    }

    const double image_area = static_cast<double>(image_w) * image_h;
    if (!best || best->area() < min_area_frac * image_area)
        throw CheckerDominates(
            "no crop candidate reaches " +
            std::to_string(static_cast<int>(min_area_frac * 100)) +
            "% of the image area (chart too central)");
    return *best;
}

namespace {

void require_contained(int w, int h, const RectI& r) {
    if (r.x0 < 0 || r.y0 < 0 || r.x1 > w || r.y1 > h || r.width() <= 0 ||
        r.height() <= 0)
        throw Error("crop rectangle outside image bounds");
}

} // namespace

ImageF crop(const ImageF& image, const RectI& r) {
    require_contained(image.width, image.height, r);
    ImageF out(r.width(), r.height());
    for (int y = 0; y < r.height(); ++y) {
        const std::size_t src = image.offset(r.x0, r.y0 + y);
        const std::size_t dst = out.offset(0, y);
        std::copy_n(image.pixels.begin() + src,
                    static_cast<std::size_t>(r.width()) * 3,
                    out.pixels.begin() + dst);
    }
    return out;
}

Image8 crop(const Image8& image, const RectI& r) {
    require_contained(image.width, image.height, r);
    Image8 out(r.width(), r.height(), image.channels);
    for (int y = 0; y < r.height(); ++y) {
        const std::size_t src =
            (static_cast<std::size_t>(r.y0 + y) * image.width + r.x0) *
            image.channels;
        const std::size_t dst =
            static_cast<std::size_t>(y) * out.width * out.channels;
        std::copy_n(image.pixels.begin() + src,
                    static_cast<std::size_t>(r.width()) * image.channels,
                    out.pixels.begin() + dst);
    }
    return out;
}

ForegroundMask crop(const ForegroundMask& mask, const RectI& r) {
    require_contained(mask.width, mask.height, r);
    ForegroundMask out;
    out.width = r.width();
    out.height = r.height();
    out.fg.resize(static_cast<std::size_t>(out.width) * out.height);
    for (int y = 0; y < r.height(); ++y) {
        for (int x = 0; x < r.width(); ++x) {
            const std::uint8_t v =
                mask.fg[static_cast<std::size_t>(r.y0 + y) * mask.width + r.x0 + x];
            out.fg[static_cast<std::size_t>(y) * out.width + x] = v;
            out.fg_count += v;
        }
    }
    if (out.fg_count == 0)
        throw EmptyMask("foreground lies entirely outside the crop");
    return out;
}

} // namespace cct
