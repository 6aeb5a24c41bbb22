// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include <cstdint>

#include "cctransfer/image.hpp"

namespace cct {

/// Difference hash: box-downsample to a 9x8 grayscale thumbnail, then one
/// bit per horizontal neighbor pair (set when the right pixel is brighter).
/// Bit i = row*8+col, row-major. Accepts 1- or 3-channel input; RGB is
/// reduced with Rec.601 luma on the 8-bit values.
std::uint64_t dhash64(const Image8& image);

int hamming64(std::uint64_t a, std::uint64_t b);

/// Default flagging threshold: pairs at Hamming distance <= 8 of 64 bits
/// are treated as near-duplicates.
constexpr int kDuplicateThreshold = 8;

} // namespace cct
