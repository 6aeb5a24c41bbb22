// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/patches.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cct {

namespace {

double cross_z(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

} // namespace

void CheckerAnnotation::validate() const {
    // Shoelace sum; TL,TR,BR,BL in y-down coordinates is positive.
    double area2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Vec2& p = corners[i];
        const Vec2& q = corners[(i + 1) % 4];
        area2 += p.x * q.y - q.x * p.y;
    }
    if (!(area2 > 1e-9))
        throw DegenerateQuad("annotation '" + image_id +
                             "': corners are not in TL,TR,BR,BL order or are "
                             "collinear");
    for (int i = 0; i < 4; ++i) {
        const double c = cross_z(corners[i], corners[(i + 1) % 4],
                                 corners[(i + 2) % 4]);
        if (!(c > 1e-9))
            throw DegenerateQuad("annotation '" + image_id +
                                 "': quadrilateral is concave or degenerate");
    }
}

Homography::Homography(const Eigen::Matrix3d& m) : m_(m) {
    if (std::abs(m_.determinant()) <= 1e-12)
        throw DegenerateQuad("homography is singular");
    if (std::abs(m_(2, 2)) <= 1e-12)
        throw DegenerateQuad("homography cannot be normalized");
    m_ /= m_(2, 2);
}

Vec2 Homography::map(const Vec2& p) const {
    const Eigen::Vector3d v = m_ * Eigen::Vector3d(p.x, p.y, 1.0);
    return {v(0) / v(2), v(1) / v(2)};
}

Homography Homography::inverse() const {
    return Homography(m_.inverse().eval());
}

Homography quad_to_grid_homography(const CheckerAnnotation& ann) {
    ann.validate();

    const std::array<Vec2, 4> src = {Vec2{0.0, 0.0},
                                     Vec2{double(kGridCols), 0.0},
                                     Vec2{double(kGridCols), double(kGridRows)},
                                     Vec2{0.0, double(kGridRows)}};

    // Standard four-point DLT with h22 pinned to 1: for (x,y)->(u,v),
    //   u = (h0 x + h1 y + h2) / (h6 x + h7 y + 1)
    //   v = (h3 x + h4 y + h5) / (h6 x + h7 y + 1)
    Eigen::Matrix<double, 8, 8> A = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> rhs;
    for (int i = 0; i < 4; ++i) {
        const double x = src[i].x, y = src[i].y;
        const double u = ann.corners[i].x, v = ann.corners[i].y;
        A(2 * i, 0) = x;
        A(2 * i, 1) = y;
        A(2 * i, 2) = 1.0;
        A(2 * i, 6) = -u * x;
        A(2 * i, 7) = -u * y;
        rhs(2 * i) = u;
        A(2 * i + 1, 3) = x;
        A(2 * i + 1, 4) = y;
        A(2 * i + 1, 5) = 1.0;
        A(2 * i + 1, 6) = -v * x;
        A(2 * i + 1, 7) = -v * y;
        rhs(2 * i + 1) = v;
    }

    Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(A);
    if (!lu.isInvertible())
        throw DegenerateQuad("annotation '" + ann.image_id +
                             "': corner system is singular");
    const Eigen::Matrix<double, 8, 1> h = lu.solve(rhs);

    Eigen::Matrix3d H;
    H << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
    return Homography(H);
}

PatchSet sample_patch_colors(const ImageF& image, const CheckerAnnotation& ann) {
    const Homography h = quad_to_grid_homography(ann);

    constexpr int n = kSamplesPerAxis * kSamplesPerAxis;
    constexpr int trim = static_cast<int>(n * kTrimFraction); // per tail
    constexpr double span = 1.0 - 2.0 * kCellMargin;

    PatchSet patches{};
    std::array<double, n> ch_r, ch_g, ch_b;
    for (int row = 0; row < kGridRows; ++row) {
        for (int col = 0; col < kGridCols; ++col) {
            int k = 0;
            for (int sy = 0; sy < kSamplesPerAxis; ++sy) {
                for (int sx = 0; sx < kSamplesPerAxis; ++sx) {
                    const double u =
                        col + kCellMargin + span * (sx + 0.5) / kSamplesPerAxis;
                    const double v =
                        row + kCellMargin + span * (sy + 0.5) / kSamplesPerAxis;
                    const Vec2 p = h.map({u, v});
                    if (!(p.x >= 0.0 && p.x < image.width && p.y >= 0.0 &&
                          p.y < image.height))
                        throw PatchOutOfBounds(
                            "annotation '" + ann.image_id + "': patch " +
                            std::to_string(row * kGridCols + col + 1) +
                            " samples outside the image");
                    const int px = static_cast<int>(std::floor(p.x));
                    const int py = static_cast<int>(std::floor(p.y));
                    const LinearColor c = image.color_at(px, py);
                    ch_r[k] = c.r;
                    ch_g[k] = c.g;
                    ch_b[k] = c.b;
                    ++k;
                }
            }
            auto trimmed_mean = [&](std::array<double, n>& vals) {
                std::sort(vals.begin(), vals.end());
                double sum = 0.0;
                for (int i = trim; i < n - trim; ++i)
                    sum += vals[i];
                return sum / (n - 2 * trim);
            };
            patches[row * kGridCols + col] = {trimmed_mean(ch_r),
                                              trimmed_mean(ch_g),
                                              trimmed_mean(ch_b)};
        }
    }
    return patches;
}

std::vector<CheckerAnnotation> load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("annotations: cannot open " + path.string());

    std::vector<CheckerAnnotation> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream ls(line);
        CheckerAnnotation ann;
        double c[8];
        if (!(ls >> ann.image_id >> c[0] >> c[1] >> c[2] >> c[3] >> c[4] >>
              c[5] >> c[6] >> c[7]))
            throw ParseError("annotations: bad record on line " +
                             std::to_string(line_no) + " of " + path.string());
        for (int i = 0; i < 4; ++i)
            ann.corners[i] = {c[2 * i], c[2 * i + 1]};
        out.push_back(std::move(ann));
    }
    return out;
}

} // namespace cct
