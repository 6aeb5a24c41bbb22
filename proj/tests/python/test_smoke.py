# SPDX-License-Identifier: Apache-2.0
# Copyright Contributors to the cctransfer Project.
"""End-to-end sanity checks of the Python bindings.

The heavy verification lives in the C++ test suites; these tests only prove
that the module imports, the numpy conventions hold, and a miniature
transfer runs through the bound pipeline.
"""

import numpy as np
import pytest

import cctransfer as cct


def random_patches(rng):
    return rng.uniform(0.05, 0.95, size=(24, 3))


def test_module_surface():
    assert cct.PATCH_COUNT == 24
    assert cct.INTERMEDIATE_CLIP_MAX == 4.0
    assert cct.DUPLICATE_THRESHOLD == 8
    assert 0.0 < cct.DEFAULT_RIDGE < 1.0
    assert cct.__version__


def test_channel_round_trip():
    for v in range(256):
        lin = cct.srgb_to_linear(v)
        assert 0.0 <= lin <= 1.0
        assert cct.linear_to_srgb(lin) == v


def test_image_round_trip():
    rng = np.random.default_rng(3)
    img = rng.integers(0, 256, size=(12, 10, 3), dtype=np.uint8)
    lin = cct.decode_linear(img)
    assert lin.dtype == np.float32
    assert lin.shape == (12, 10, 3)
    back = cct.encode_srgb(lin)
    assert back.dtype == np.uint8
    np.testing.assert_array_equal(back, img)


def test_feature_expansion():
    spec = cct.FeatureSpec(degree=2, include_bias=True)
    assert spec.term_count() == 10
    v = cct.expand_features([2.0, 3.0, 5.0], spec)
    np.testing.assert_allclose(
        v, [2, 3, 5, 4, 9, 25, 6, 15, 10, 1], rtol=0, atol=0
    )
    short = cct.expand_features([0.5, 0.25, 0.125], cct.FeatureSpec(1, False))
    np.testing.assert_allclose(short, [0.5, 0.25, 0.125])
    with pytest.raises(cct.TransferError):
        cct.FeatureSpec(degree=3)


def test_fit_and_apply():
    rng = np.random.default_rng(11)
    patches = random_patches(rng)
    t = cct.fit_transform(patches, patches, ridge=0.0)
    assert t.matrix.shape == (3, 10)
    for row in patches[:5]:
        out = t(row)
        np.testing.assert_allclose(out, row, atol=1e-6)

    fwd, inv = cct.fit_pair(patches, 0.5 * patches, ridge=0.0)
    np.testing.assert_allclose(fwd([0.2, 0.3, 0.1]), [0.4, 0.6, 0.2], atol=1e-4)
    assert cct.fit_residual(fwd, 0.5 * patches, patches) < 1e-3
    assert cct.fit_residual(inv, patches, 0.5 * patches) < 1e-3


def test_transfer_and_composite():
    rng = np.random.default_rng(12)
    img = rng.uniform(0.1, 0.9, size=(20, 16, 3)).astype(np.float32)
    mask = np.zeros((20, 16), dtype=np.uint8)
    mask[4:12, 3:10] = 255

    patches = random_patches(rng)
    fwd, inv = cct.fit_pair(patches, patches, ridge=0.0)
    out = cct.transitive_transfer(img, mask, fwd, inv)
    assert out.shape == img.shape
    bg = mask == 0
    np.testing.assert_array_equal(out[bg], img[bg])
    assert np.abs(out[~bg] - img[~bg]).mean() < 0.02

    comp = cct.composite(out, img, mask)
    np.testing.assert_array_equal(comp[bg], img[bg])

    half = cct.ColorTransform
    assert half is not None  # class is exported
    with pytest.raises(cct.TransferError):
        cct.transitive_transfer(img, mask[:10], fwd, inv)


def test_mask_strictness():
    img = np.zeros((8, 8, 3), dtype=np.float32)
    bad = np.full((8, 8), 7, dtype=np.uint8)
    t = cct.fit_transform(
        np.full((24, 3), 0.5) + np.arange(72).reshape(24, 3) / 100.0,
        np.full((24, 3), 0.5) + np.arange(72).reshape(24, 3) / 100.0,
    )
    with pytest.raises(cct.TransferError):
        cct.transfer_region(img, bad, t)


def test_crop_geometry():
    corners = np.array(
        [[100.0, 50.0], [220.0, 50.0], [220.0, 130.0], [100.0, 130.0]]
    )
    h = cct.quad_to_grid_homography(corners)
    assert h.shape == (3, 3)
    np.testing.assert_allclose(h[2], [0, 0, 1], atol=1e-9)

    bbox = cct.checker_bbox(corners, 640, 480)
    assert bbox == (90, 40, 230, 140)
    crop = cct.crop_excluding_checker(640, 480, bbox)
    assert crop == (0, 140, 640, 480)  # below wins: 640x340


def test_patch_sampling():
    colors = np.linspace(0.05, 0.95, 72).reshape(24, 3)
    cell = 20
    img = np.full((4 * cell + 20, 6 * cell + 20, 3), 0.2, dtype=np.float32)
    for p in range(24):
        row, col = divmod(p, 6)
        y0 = 10 + row * cell
        x0 = 10 + col * cell
        img[y0 : y0 + cell, x0 : x0 + cell] = colors[p]
    corners = np.array(
        [[10.0, 10.0], [130.0, 10.0], [130.0, 90.0], [10.0, 90.0]]
    )
    sampled = cct.sample_patch_colors(img, corners)
    np.testing.assert_allclose(sampled, colors, atol=1e-6)


def test_metrics_and_hashing():
    rng = np.random.default_rng(13)
    a = rng.integers(0, 256, size=(32, 24, 3), dtype=np.uint8)
    assert cct.mse(a, a) == 0.0
    assert np.isinf(cct.psnr(a, a))

    b = a.copy()
    b[0, 0, 0] ^= 255
    assert cct.mse(a, b) > 0.0
    mask = np.zeros((32, 24), dtype=np.uint8)
    mask[0, 0] = 255
    assert cct.fmse(a, b, mask) == pytest.approx(cct.mse(a, b) * 32 * 24)

    h = cct.dhash64(a)
    assert cct.hamming64(h, h) == 0
    assert cct.hamming64(cct.dhash64(a), cct.dhash64(b)) <= 2
