# SPDX-License-Identifier: Apache-2.0
# Copyright Contributors to the cctransfer Project.

"""Color-checker referenced illumination transfer.

Thin facade over the compiled core. Images are numpy arrays: uint8 HxWx3
for sRGB-encoded data, float32 HxWx3 for linear light, uint8 HxW (values
0/255) for foreground masks, float64 24x3 for chart patch sets.
"""

from ._core import (
    DEFAULT_RIDGE,
    DUPLICATE_THRESHOLD,
    INTERMEDIATE_CLIP_MAX,
    PATCH_COUNT,
    ColorTransform,
    FeatureSpec,
    TransferError,
    checker_bbox,
    composite,
    crop_excluding_checker,
    decode_linear,
    dhash64,
    encode_srgb,
    expand_features,
    fit_pair,
    fit_residual,
    fit_transform,
    fmse,
    hamming64,
    linear_to_srgb,
    mse,
    psnr,
    quad_to_grid_homography,
    sample_patch_colors,
    srgb_to_linear,
    transfer_region,
    transitive_transfer,
)

__all__ = [
    "DEFAULT_RIDGE",
    "DUPLICATE_THRESHOLD",
    "INTERMEDIATE_CLIP_MAX",
    "PATCH_COUNT",
    "ColorTransform",
    "FeatureSpec",
    "TransferError",
    "checker_bbox",
    "composite",
    "crop_excluding_checker",
    "decode_linear",
    "dhash64",
    "encode_srgb",
    "expand_features",
    "fit_pair",
    "fit_residual",
    "fit_transform",
    "fmse",
    "hamming64",
    "linear_to_srgb",
    "mse",
    "psnr",
    "quad_to_grid_homography",
    "sample_patch_colors",
    "srgb_to_linear",
    "transfer_region",
    "transitive_transfer",
]

__version__ = "0.1.0"
