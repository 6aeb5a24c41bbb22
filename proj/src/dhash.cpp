// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/dhash.hpp"

#include <bit>

namespace cct {

namespace {

constexpr int kThumbW = 9;
constexpr int kThumbH = 8;

double gray_at(const Image8& img, int x, int y) {
    if (img.channels == 1)
        return img.at(x, y, 0);
    return 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) +
           0.114 * img.at(x, y, 2);
}

} // namespace

std::uint64_t dhash64(const Image8& image) {
    if (image.width < kThumbW || image.height < kThumbH)
        throw Error("dhash64: image smaller than the 9x8 thumbnail");
    if (image.channels != 1 && image.channels != 3)
        throw Error("dhash64: expected 1 or 3 channels");

    double thumb[kThumbH][kThumbW];
    for (int ty = 0; ty < kThumbH; ++ty) {
        const int y0 = ty * image.height / kThumbH;
        const int y1 = (ty + 1) * image.height / kThumbH;
        for (int tx = 0; tx < kThumbW; ++tx) {
            const int x0 = tx * image.width / kThumbW;
            const int x1 = (tx + 1) * image.width / kThumbW;
            double sum = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x)
                    sum += gray_at(image, x, y);
            thumb[ty][tx] = sum / (static_cast<double>(y1 - y0) * (x1 - x0));
        }
    }

    std::uint64_t h = 0;
    for (int ty = 0; ty < kThumbH; ++ty)
        for (int tx = 0; tx < kThumbW - 1; ++tx)
            if (thumb[ty][tx + 1] > thumb[ty][tx])
                h |= 1ull << (ty * 8 + tx);
    return h;
}

int hamming64(std::uint64_t a, std::uint64_t b) {
    return std::popcount(a ^ b);
}

} // namespace cct
