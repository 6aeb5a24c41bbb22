// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.
//
// Python bindings for the core operations. Rasters cross the boundary as
// numpy arrays: uint8 HxWx3 for encoded images, float32 HxWx3 for linear
// light, uint8 HxW (strict 0/255) for masks, float64 24x3 for patch sets.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "cctransfer/color.hpp"
#include "cctransfer/compose.hpp"
#include "cctransfer/dhash.hpp"
#include "cctransfer/fitting.hpp"
#include "cctransfer/image.hpp"
#include "cctransfer/metrics.hpp"
#include "cctransfer/patches.hpp"
#include "cctransfer/transfer.hpp"

namespace py = pybind11;
using namespace cct;

namespace {

using ArrayU8 = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using ArrayF32 = py::array_t<float, py::array::c_style | py::array::forcecast>;
using ArrayF64 = py::array_t<double, py::array::c_style | py::array::forcecast>;

Image8 to_image8(const ArrayU8& a) {
    if (a.ndim() == 2) {
        Image8 img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), 1);
        std::copy(a.data(), a.data() + a.size(), img.pixels.begin());
        return img;
    }
    if (a.ndim() == 3 && a.shape(2) == 3) {
        Image8 img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), 3);
        std::copy(a.data(), a.data() + a.size(), img.pixels.begin());
        return img;
    }
    throw py::value_error("expected a HxW or HxWx3 uint8 array");
}

py::array from_image8(const Image8& img) {
    if (img.channels == 1) {
        ArrayU8 a({img.height, img.width});
        std::copy(img.pixels.begin(), img.pixels.end(), a.mutable_data());
        return a;
    }
    ArrayU8 a({img.height, img.width, 3});
    std::copy(img.pixels.begin(), img.pixels.end(), a.mutable_data());
    return a;
}

ImageF to_imagef(const ArrayF32& a) {
    if (a.ndim() != 3 || a.shape(2) != 3)
        throw py::value_error("expected a HxWx3 float array");
    ImageF img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), img.pixels.begin());
    return img;
}

py::array from_imagef(const ImageF& img) {
    ArrayF32 a({img.height, img.width, 3});
    std::copy(img.pixels.begin(), img.pixels.end(), a.mutable_data());
    return a;
}

ForegroundMask to_mask(const ArrayU8& a) {
    if (a.ndim() != 2)
        throw py::value_error("expected a HxW uint8 mask (0/255)");
    return ForegroundMask::from_image(to_image8(a));
}

PatchSet to_patchset(const ArrayF64& a) {
    if (a.ndim() != 2 || a.shape(0) != kPatchCount || a.shape(1) != 3)
        throw py::value_error("expected a 24x3 array of patch colors");
    PatchSet p;
    for (int i = 0; i < kPatchCount; ++i)
        p[i] = {a.at(i, 0), a.at(i, 1), a.at(i, 2)};
    return p;
}

py::array from_patchset(const PatchSet& p) {
    ArrayF64 a({kPatchCount, 3});
    for (int i = 0; i < kPatchCount; ++i) {
        a.mutable_at(i, 0) = p[i].r;
        a.mutable_at(i, 1) = p[i].g;
        a.mutable_at(i, 2) = p[i].b;
    }
    return a;
}

CheckerAnnotation to_annotation(const ArrayF64& corners) {
    if (corners.ndim() != 2 || corners.shape(0) != 4 || corners.shape(1) != 2)
        throw py::value_error("expected 4x2 corners ordered TL, TR, BR, BL");
    CheckerAnnotation ann;
    ann.image_id = "<array>";
    for (int i = 0; i < 4; ++i)
        ann.corners[i] = {corners.at(i, 0), corners.at(i, 1)};
    ann.validate();
    return ann;
}

LinearColor to_color(const std::array<double, 3>& c) {
    return {c[0], c[1], c[2]};
}

std::array<double, 3> from_color(const LinearColor& c) {
    return {c.r, c.g, c.b};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "color-checker referenced illumination transfer core";

    py::register_exception<Error>(m, "TransferError", PyExc_RuntimeError);

    py::class_<FeatureSpec>(m, "FeatureSpec")
        .def(py::init([](int degree, bool include_bias) {
                 FeatureSpec s{degree, include_bias};
                 s.validate();
                 return s;
             }),
             py::arg("degree") = 2, py::arg("include_bias") = true)
        .def_readonly("degree", &FeatureSpec::degree)
        .def_readonly("include_bias", &FeatureSpec::include_bias)
        .def("term_count", &FeatureSpec::term_count)
        .def("__eq__",
             [](const FeatureSpec& a, const FeatureSpec& b) { return a == b; })
        .def("__repr__", [](const FeatureSpec& s) {
            return "FeatureSpec(degree=" + std::to_string(s.degree) +
                   ", include_bias=" + (s.include_bias ? "True" : "False") + ")";
        });

    py::class_<ColorTransform>(m, "ColorTransform")
        .def_property_readonly(
            "matrix", [](const ColorTransform& t) { return t.matrix; })
        .def_readonly("spec", &ColorTransform::spec)
        .def("__call__",
             [](const ColorTransform& t, const std::array<double, 3>& c,
                double clip_max) {
                 return from_color(apply_transform(t, to_color(c), clip_max));
             },
             py::arg("color"), py::arg("clip_max") = kIntermediateClipMax);

    m.attr("PATCH_COUNT") = kPatchCount;
    m.attr("INTERMEDIATE_CLIP_MAX") = kIntermediateClipMax;
    m.attr("DEFAULT_RIDGE") = kDefaultRidge;
    m.attr("DUPLICATE_THRESHOLD") = kDuplicateThreshold;

    m.def("srgb_to_linear", &srgb_channel_to_linear, py::arg("value"),
          "decode one 8-bit sRGB channel level (0-255) to linear light");
    m.def("linear_to_srgb", &linear_channel_to_srgb, py::arg("value"),
          "encode one linear channel value in [0,1] to an 8-bit sRGB level");
    m.def(
        "decode_linear",
        [](const ArrayU8& img) { return from_imagef(decode_linear(to_image8(img))); },
        py::arg("image"), "sRGB-decode a uint8 HxWx3 image to linear float32");
    m.def(
        "encode_srgb",
        [](const ArrayF32& img) { return from_image8(encode_srgb(to_imagef(img))); },
        py::arg("image"), "encode a linear float32 HxWx3 image to uint8 sRGB");

    m.def(
        "expand_features",
        [](const std::array<double, 3>& c, const FeatureSpec& spec) {
            const Eigen::VectorXd v = expand_features(to_color(c), spec);
            return v;
        },
        py::arg("color"), py::arg("spec") = FeatureSpec{});

    m.def(
        "fit_transform",
        [](const ArrayF64& source, const ArrayF64& target, const FeatureSpec& spec,
           double ridge) {
            return fit_transform(to_patchset(source), to_patchset(target), spec,
                                 ridge);
        },
        py::arg("source"), py::arg("target"), py::arg("spec") = FeatureSpec{},
        py::arg("ridge") = kDefaultRidge,
        "least-squares polynomial color map source->target over 24 patches");
    m.def(
        "fit_pair",
        [](const ArrayF64& canonical, const ArrayF64& image_patches,
           const FeatureSpec& spec, double ridge) {
            const TransformPair p = fit_pair(to_patchset(canonical),
                                             to_patchset(image_patches), spec,
                                             ridge);
            return py::make_tuple(p.forward, p.inverse);
        },
        py::arg("canonical"), py::arg("image_patches"),
        py::arg("spec") = FeatureSpec{}, py::arg("ridge") = kDefaultRidge,
        "(forward, inverse) fitted against the canonical chart colors");
    m.def(
        "fit_residual",
        [](const ColorTransform& t, const ArrayF64& source, const ArrayF64& target) {
            return fit_residual(t, to_patchset(source), to_patchset(target));
        },
        py::arg("transform"), py::arg("source"), py::arg("target"),
        "RMSE of the raw map over 24 patches x 3 channels");

    m.def(
        "quad_to_grid_homography",
        [](const ArrayF64& corners) {
            const Homography h = quad_to_grid_homography(to_annotation(corners));
            return h.matrix();
        },
        py::arg("corners"),
        "3x3 map from chart grid coordinates [0,6]x[0,4] to the image quad");
    m.def(
        "sample_patch_colors",
        [](const ArrayF32& image, const ArrayF64& corners) {
            return from_patchset(
                sample_patch_colors(to_imagef(image), to_annotation(corners)));
        },
        py::arg("image"), py::arg("corners"),
        "trimmed-mean chart colors from a linear image and TL,TR,BR,BL corners");

    m.def(
        "transfer_region",
        [](const ArrayF32& image, const ArrayU8& mask, const ColorTransform& t,
           double clip_max) {
            return from_imagef(
                transfer_region(to_imagef(image), to_mask(mask), t, clip_max));
        },
        py::arg("image"), py::arg("mask"), py::arg("transform"),
        py::arg("clip_max") = kIntermediateClipMax,
        "apply a color map to the masked foreground; background unchanged");
    m.def(
        "transitive_transfer",
        [](const ArrayF32& image, const ArrayU8& mask,
           const ColorTransform& forward_src, const ColorTransform& inverse_ref) {
            return from_imagef(transitive_transfer(to_imagef(image), to_mask(mask),
                                                   forward_src, inverse_ref));
        },
        py::arg("image"), py::arg("mask"), py::arg("forward_src"),
        py::arg("inverse_ref"),
        "re-illuminate the foreground through the standard condition");
    m.def(
        "composite",
        [](const ArrayF32& fg, const ArrayF32& bg, const ArrayU8& mask) {
            return from_imagef(composite(to_imagef(fg), to_imagef(bg), to_mask(mask)));
        },
        py::arg("foreground"), py::arg("background"), py::arg("mask"),
        "pixelwise mask ? foreground : background, clipped to [0,1]");

    m.def(
        "checker_bbox",
        [](const ArrayF64& corners, int width, int height, int margin_px) {
            const RectI r = checker_bbox(to_annotation(corners), width, height,
                                         margin_px);
            return py::make_tuple(r.x0, r.y0, r.x1, r.y1);
        },
        py::arg("corners"), py::arg("width"), py::arg("height"),
        py::arg("margin_px") = kBboxMarginPx,
        "inflated, clamped AABB of the chart corners, half-open (x0,y0,x1,y1)");
    m.def(
        "crop_excluding_checker",
        [](int width, int height, const std::array<int, 4>& bbox,
           double min_area_frac) {
            const RectI r = crop_excluding_checker(
                width, height, RectI{bbox[0], bbox[1], bbox[2], bbox[3]},
                min_area_frac);
            return py::make_tuple(r.x0, r.y0, r.x1, r.y1);
        },
        py::arg("width"), py::arg("height"), py::arg("bbox"),
        py::arg("min_area_frac") = kCropMinAreaFrac,
        "largest chart-avoiding rectangle, half-open (x0,y0,x1,y1)");

    m.def(
        "mse",
        [](const ArrayU8& a, const ArrayU8& b) {
            return mse(to_image8(a), to_image8(b));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "fmse",
        [](const ArrayU8& a, const ArrayU8& b, const ArrayU8& mask) {
            return fmse(to_image8(a), to_image8(b), to_mask(mask));
        },
        py::arg("a"), py::arg("b"), py::arg("mask"));
    m.def(
        "psnr",
        [](const ArrayU8& a, const ArrayU8& b) {
            return psnr(to_image8(a), to_image8(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "dhash64",
        [](const ArrayU8& img) { return dhash64(to_image8(img)); },
        py::arg("image"), "64-bit difference hash of a gray or RGB image");
    m.def("hamming64", &hamming64, py::arg("a"), py::arg("b"));
}
