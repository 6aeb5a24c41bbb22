// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/color.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cct {

double srgb_channel_to_linear(std::uint8_t v) {
    const double c = v / 255.0;
    if (c <= 0.04045)
        return c / 12.92;
    return std::pow((c + 0.055) / 1.055, 2.4);
}

std::uint8_t linear_channel_to_srgb(double v) {
    v = std::clamp(v, 0.0, 1.0);
    double c;
    if (v <= 0.0031308)
        c = 12.92 * v;
    else
        c = 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
    return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

LinearColor srgb_to_linear(const std::array<std::uint8_t, 3>& c) {
    return {srgb_channel_to_linear(c[0]), srgb_channel_to_linear(c[1]),
            srgb_channel_to_linear(c[2])};
}

std::array<std::uint8_t, 3> linear_to_srgb(const LinearColor& c) {
    return {linear_channel_to_srgb(c.r), linear_channel_to_srgb(c.g),
            linear_channel_to_srgb(c.b)};
}

Eigen::VectorXd expand_features(const LinearColor& c, const FeatureSpec& spec) {
    spec.validate();
    Eigen::VectorXd f(spec.term_count());
    f(0) = c.r;
    f(1) = c.g;
    f(2) = c.b;
    int n = 3;
    if (spec.degree == 2) {
        f(3) = c.r * c.r;
        f(4) = c.g * c.g;
        f(5) = c.b * c.b;
        f(6) = c.r * c.g;
        f(7) = c.g * c.b;
        f(8) = c.r * c.b;
        n = 9;
    }
    if (spec.include_bias)
        f(n) = 1.0;
    return f;
}

LinearColor apply_transform(const ColorTransform& t, const LinearColor& c,
                            double clip_max) {
    const Eigen::VectorXd f = expand_features(c, t.spec);
    const Eigen::Vector3d out = t.matrix * f;
    return {std::clamp(out(0), 0.0, clip_max), std::clamp(out(1), 0.0, clip_max),
            std::clamp(out(2), 0.0, clip_max)};
}

PatchSet load_reference_colors(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("reference colors: cannot open " + path.string());

    PatchSet patches{};
    std::array<bool, kPatchCount> seen{};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream ls(line);
        int index, r, g, b;
        if (!(ls >> index >> r >> g >> b))
            throw ParseError("reference colors: bad line " +
                             std::to_string(line_no) + " in " + path.string());
        if (index < 1 || index > kPatchCount)
            throw ParseError("reference colors: patch index out of range: " +
                             std::to_string(index));
        if (r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255)
            throw ParseError("reference colors: channel out of range on line " +
                             std::to_string(line_no));
        patches[index - 1] =
            srgb_to_linear({static_cast<std::uint8_t>(r),
                            static_cast<std::uint8_t>(g),
                            static_cast<std::uint8_t>(b)});
        seen[index - 1] = true;
    }
    for (int i = 0; i < kPatchCount; ++i)
        if (!seen[i])
            throw ParseError("reference colors: missing patch " +
                             std::to_string(i + 1));
    return patches;
}

} // namespace cct
