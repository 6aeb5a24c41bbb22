// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "cctransfer/errors.hpp"

namespace cct {

/// A color in linear-light RGB. Channels are unitless intensities,
/// nominally in [0,1] but allowed to exceed 1 mid-pipeline.
struct LinearColor {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

constexpr int kPatchCount = 24;

/// The 24 patch colors of one chart, row-major over the 6x4 grid.
/// Index 0 is the top-left "dark skin" patch, index 23 the bottom-right
/// black patch, in canonical chart orientation.
using PatchSet = std::array<LinearColor, kPatchCount>;

/// Polynomial feature basis used by color transforms.
///
/// Term order is fixed and part of the on-disk format:
///   degree 1:          r, g, b            (+ 1 if include_bias)
///   degree 2:          r, g, b, r2, g2, b2, rg, gb, rb   (+ 1 if include_bias)
struct FeatureSpec {
    int degree = 2;
    bool include_bias = true;

    int term_count() const {
        return (degree == 1 ? 3 : 9) + (include_bias ? 1 : 0);
    }
    void validate() const {
        if (degree != 1 && degree != 2)
            throw Error("FeatureSpec: degree must be 1 or 2");
    }
    bool operator==(const FeatureSpec&) const = default;
};

/// A fitted polynomial color map: out = matrix * features(in).
struct ColorTransform {
    Eigen::Matrix<double, 3, Eigen::Dynamic> matrix; // 3 x term_count
    FeatureSpec spec;
};

/// Clip ceiling applied while a color sits in the intermediate
/// (chart-referenced) condition. Values above 1 are legitimate there;
/// the final composite is clipped to [0,1] before encoding.
constexpr double kIntermediateClipMax = 4.0;

/// Decode one 8-bit sRGB channel to linear light.
double srgb_channel_to_linear(std::uint8_t v);

/// Encode one linear channel to 8-bit sRGB. Input is clipped to [0,1] first.
std::uint8_t linear_channel_to_srgb(double v);

LinearColor srgb_to_linear(const std::array<std::uint8_t, 3>& c);
std::array<std::uint8_t, 3> linear_to_srgb(const LinearColor& c);

/// Expand a color into the polynomial feature vector for `spec`.
Eigen::VectorXd expand_features(const LinearColor& c, const FeatureSpec& spec);

/// Apply a fitted transform to one color. Each output channel is clipped
/// to [0, clip_max].
LinearColor apply_transform(const ColorTransform& t, const LinearColor& c,
                            double clip_max = kIntermediateClipMax);

/// Load the canonical chart reference colors from a text file of 24 lines
/// `index r g b` (8-bit sRGB, row-major chart order). Returns linear colors.
PatchSet load_reference_colors(const std::filesystem::path& path);

} // namespace cct
