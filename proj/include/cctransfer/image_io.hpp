// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include <filesystem>

#include "cctransfer/image.hpp"

namespace cct {

/// Read an image file as 8-bit RGB. Throws UnreadableImage on failure.
Image8 load_rgb8(const std::filesystem::path& path);

/// Read an image file as 8-bit single-channel.
Image8 load_gray8(const std::filesystem::path& path);

/// Write a PNG. Accepts 1- or 3-channel Image8. Parent directories must
/// exist. Output bytes are deterministic for identical pixel data.
void save_png(const std::filesystem::path& path, const Image8& img);

} // namespace cct
