// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cctransfer/color.hpp"

namespace cct {

/// Forward map takes image patch colors to the canonical chart colors;
/// inverse is the independently fitted reverse map (a polynomial map has
/// no exact matrix inverse).
struct TransformPair {
    ColorTransform forward;
    ColorTransform inverse;
};

/// Default Tikhonov weight. The 24x10 system is generically well posed;
/// the ridge stabilizes near-monochrome charts.
constexpr double kDefaultRidge = 1e-4;

/// Least-squares fit of a polynomial color map source->target over the 24
/// patch correspondences:
///   argmin_M  sum_i ||M phi(source_i) - target_i||^2 + ridge ||M||_F^2
/// solved through the normal equations with a direct dense solve.
/// Throws SingularSystem when the regularized Gram matrix has condition
/// estimate above 1e12 (degenerate patch data).
ColorTransform fit_transform(const PatchSet& source, const PatchSet& target,
                             const FeatureSpec& spec, double ridge);

/// Fit both directions against the canonical chart colors:
/// forward = image_patches -> canonical, inverse = canonical -> image_patches.
TransformPair fit_pair(const PatchSet& canonical, const PatchSet& image_patches,
                       const FeatureSpec& spec, double ridge);

/// RMSE of the raw (unclipped) map over the 24 patches x 3 channels.
double fit_residual(const ColorTransform& t, const PatchSet& source,
                    const PatchSet& target);

/// Stable 16-hex-digit digest of a transform (matrix plus feature spec).
std::string transform_fingerprint(const ColorTransform& t);

/// Transform cache: one text file per image holding both fitted directions
/// at full precision, keyed by image id. Re-runs reuse the file when the
/// recorded feature spec and ridge match.
void save_transform_cache(const std::filesystem::path& path,
                          const std::string& image_id, const TransformPair& pair,
                          double ridge);
std::optional<TransformPair> load_transform_cache(
    const std::filesystem::path& path, const std::string& image_id,
    const FeatureSpec& spec, double ridge);

} // namespace cct
