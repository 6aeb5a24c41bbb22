// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include "cctransfer/image.hpp"

namespace cct {

// Comparison metrics on 8-bit encoded values (0-255 scale), the scale
// composite/real differences are conventionally reported on.

/// Mean squared error over all pixels x channels.
double mse(const Image8& a, const Image8& b);

/// MSE restricted to mask-foreground pixels.
double fmse(const Image8& a, const Image8& b, const ForegroundMask& mask);

/// 10*log10(255^2 / mse); +infinity for identical images.
double psnr(const Image8& a, const Image8& b);

} // namespace cct
