// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cctransfer/color.hpp"
#include "cctransfer/image.hpp"

namespace cct {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Chart grid layout. Grid coordinates run over [0,kGridCols] x [0,kGridRows]
/// with one unit per patch cell; cell (col,row) is patch row*kGridCols+col.
constexpr int kGridCols = 6;
constexpr int kGridRows = 4;

/// Sampling parameters: a fixed 16x16 lattice per cell, restricted to the
/// central half of the cell (0.25-cell margin on every side), pooled with a
/// 10%-per-tail trimmed mean.
constexpr int kSamplesPerAxis = 16;
constexpr double kCellMargin = 0.25;
constexpr double kTrimFraction = 0.10;

/// Outer boundary of one chart in one image. Corners are sub-pixel image
/// coordinates ordered TL, TR, BR, BL with the chart in canonical
/// orientation: "dark skin" at TL, black at BR. Coordinates refer to the
/// original (uncropped) image.
struct CheckerAnnotation {
    std::string image_id;
    std::array<Vec2, 4> corners; // TL, TR, BR, BL

    /// Throws DegenerateQuad unless the corners form a strictly convex
    /// quadrilateral with positive signed area in y-down image coordinates.
    void validate() const;
};

/// A 3x3 projective map, normalized so the bottom-right entry is 1.
class Homography {
public:
    explicit Homography(const Eigen::Matrix3d& m);

    Vec2 map(const Vec2& p) const;
    Homography inverse() const;
    const Eigen::Matrix3d& matrix() const { return m_; }

private:
    Eigen::Matrix3d m_;
};

/// Homography taking chart grid coordinates onto the annotated quad:
/// (0,0)->TL, (kGridCols,0)->TR, (kGridCols,kGridRows)->BR, (0,kGridRows)->BL.
Homography quad_to_grid_homography(const CheckerAnnotation& ann);

/// Extract the 24 patch colors of an annotated chart from a linear image.
/// Sample points are read with floor() pixel lookup (pixel (i,j) covers
/// [i,i+1)x[j,j+1)); any point outside the raster raises PatchOutOfBounds.
PatchSet sample_patch_colors(const ImageF& image, const CheckerAnnotation& ann);

/// Annotation file: one record per line,
/// `image_id x_tl y_tl x_tr y_tr x_br y_br x_bl y_bl`,
/// pixel coordinates of the original image. '#' starts a comment.
std::vector<CheckerAnnotation> load_annotations(const std::filesystem::path& path);

} // namespace cct
