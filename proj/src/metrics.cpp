// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/metrics.hpp"

#include <cmath>
#include <limits>

namespace cct {

namespace {

void require_comparable(const Image8& a, const Image8& b) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels)
        throw DimensionMismatch("metric inputs must share dimensions");
}

} // namespace

double mse(const Image8& a, const Image8& b) {
    require_comparable(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = double(a.pixels[i]) - double(b.pixels[i]);
        sum += d * d;
    }
    return sum / a.pixels.size();
}

double fmse(const Image8& a, const Image8& b, const ForegroundMask& mask) {
    require_comparable(a, b);
    if (a.width != mask.width || a.height != mask.height)
        throw DimensionMismatch("fmse mask must match image dimensions");
    if (mask.fg_count == 0)
        throw EmptyMask("fmse needs a nonempty mask");

    double sum = 0.0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            if (!mask.is_fg(x, y))
                continue;
            for (int c = 0; c < a.channels; ++c) {
                const double d = double(a.at(x, y, c)) - double(b.at(x, y, c));
                sum += d * d;
            }
        }
    }
    return sum / (static_cast<double>(mask.fg_count) * a.channels);
}

double psnr(const Image8& a, const Image8& b) {
    const double e = mse(a, b);
    if (e == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / e);
}

} // namespace cct
