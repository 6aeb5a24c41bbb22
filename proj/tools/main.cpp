// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.
//
// Batch CLI over the cctransfer library. Subcommands mirror the pipeline
// stages: extract-patches, fit, scan-duplicates, crop, build, validate,
// metrics. Exit status is 0 only when the requested stage fully succeeded.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cctransfer/compose.hpp"
#include "cctransfer/fitting.hpp"
#include "cctransfer/image_io.hpp"
#include "cctransfer/manifest.hpp"
#include "cctransfer/metrics.hpp"
#include "cctransfer/patches.hpp"
#include "cctransfer/pipeline.hpp"

namespace {

struct GlobalOpts {
    std::string manifest_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> refs_per_fg;
    std::optional<double> ridge;
    std::optional<int> degree;
    int jobs = 0;
};

cct::Manifest load_with_overrides(const GlobalOpts& g) {
    cct::Manifest m = cct::load_manifest(g.manifest_path);
    if (g.seed)
        m.seed = *g.seed;
    if (g.refs_per_fg)
        m.references_per_foreground = *g.refs_per_fg;
    if (g.ridge)
        m.config.ridge = *g.ridge;
    if (g.degree)
        m.config.spec.degree = *g.degree;
    m.validate();
    return m;
}

int cmd_extract_patches(const GlobalOpts& g) {
    const cct::Manifest m = load_with_overrides(g);
    const auto annotations = cct::load_annotations(m.resolve(m.annotations_path));

    int failures = 0;
    std::printf("image_id\tpatch\tr\tg\tb\n");
    for (const auto& rec : m.images) {
        if (rec.excluded())
            continue;
        try {
            const auto it = std::find_if(
                annotations.begin(), annotations.end(),
                [&](const cct::CheckerAnnotation& a) { return a.image_id == rec.id; });
            if (it == annotations.end())
                throw cct::Error("no annotation");
            const cct::Image8 img = cct::load_rgb8(m.resolve(rec.path));
            const cct::PatchSet patches =
                cct::sample_patch_colors(cct::decode_linear(img), *it);
            for (int i = 0; i < cct::kPatchCount; ++i)
                std::printf("%s\t%d\t%.8f\t%.8f\t%.8f\n", rec.id.c_str(), i + 1,
                            patches[i].r, patches[i].g, patches[i].b);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s: %s\n", rec.id.c_str(), e.what());
            ++failures;
        }
    }
    return failures ? 1 : 0;
}

int cmd_fit(const GlobalOpts& g) {
    const cct::Manifest m = load_with_overrides(g);
    const auto annotations = cct::load_annotations(m.resolve(m.annotations_path));
    const cct::PatchSet canonical =
        cct::load_reference_colors(m.resolve(m.reference_colors_path));
    const auto cache_dir = std::filesystem::path(g.out_dir) / "transforms";
    std::filesystem::create_directories(cache_dir);

    int failures = 0;
    int warned = 0;
    std::printf("image_id\tresidual_forward\tresidual_inverse\tflag\n");
    for (const auto& rec : m.images) {
        if (rec.excluded())
            continue;
        try {
            const auto it = std::find_if(
                annotations.begin(), annotations.end(),
                [&](const cct::CheckerAnnotation& a) { return a.image_id == rec.id; });
            if (it == annotations.end())
                throw cct::Error("no annotation");
            const cct::Image8 img = cct::load_rgb8(m.resolve(rec.path));
            const cct::PatchSet patches =
                cct::sample_patch_colors(cct::decode_linear(img), *it);

            const auto cache = cache_dir / (rec.id + ".txt");
            cct::TransformPair pair;
            if (auto cached = cct::load_transform_cache(cache, rec.id,
                                                        m.config.spec,
                                                        m.config.ridge)) {
                pair = *cached;
            } else {
                pair = cct::fit_pair(canonical, patches, m.config.spec,
                                     m.config.ridge);
                cct::save_transform_cache(cache, rec.id, pair, m.config.ridge);
            }
            const double rf = cct::fit_residual(pair.forward, patches, canonical);
            const double ri = cct::fit_residual(pair.inverse, canonical, patches);
            const bool warn = rf > m.config.residual_flag_threshold ||
                              ri > m.config.residual_flag_threshold;
            if (warn)
                ++warned;
            std::printf("%s\t%.6f\t%.6f\t%s\n", rec.id.c_str(), rf, ri,
                        warn ? "WARN" : "ok");
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s: %s\n", rec.id.c_str(), e.what());
            ++failures;
        }
    }
    if (warned)
        std::fprintf(stderr,
                     "%d image(s) above residual threshold %.3f; review their "
                     "checkers and set misleading_checker in the manifest if "
                     "warranted\n",
                     warned, m.config.residual_flag_threshold);
    return failures ? 1 : 0;
}

int cmd_scan_duplicates(const GlobalOpts& g) {
    cct::Manifest m = load_with_overrides(g);
    const auto found = cct::near_duplicate_scan(m);
    for (const auto& d : found)
        std::printf("%s\t%s\t%d\n", d.id_a.c_str(), d.id_b.c_str(), d.distance);
    std::fprintf(stderr, "%zu near-duplicate pair(s) found\n", found.size());
    cct::save_manifest(m, g.manifest_path);
    return 0;
}

int cmd_crop(const GlobalOpts& g) {
    cct::Manifest m = load_with_overrides(g);
    const auto annotations = cct::load_annotations(m.resolve(m.annotations_path));

    int failures = 0;
    std::printf("image_id\tx0\ty0\tx1\ty1\n");
    for (auto& rec : m.images) {
        if (rec.excluded())
            continue;
        try {
            const auto it = std::find_if(
                annotations.begin(), annotations.end(),
                [&](const cct::CheckerAnnotation& a) { return a.image_id == rec.id; });
            if (it == annotations.end())
                throw cct::Error("no annotation");
            const cct::Image8 img = cct::load_rgb8(m.resolve(rec.path));
            const cct::RectI bbox = cct::checker_bbox(
                *it, img.width, img.height, m.config.bbox_margin_px);
            const cct::RectI r = cct::crop_excluding_checker(
                img.width, img.height, bbox, m.config.crop_min_area_frac);
            std::printf("%s\t%d\t%d\t%d\t%d\n", rec.id.c_str(), r.x0, r.y0,
                        r.x1, r.y1);
        } catch (const cct::CheckerDominates&) {
            rec.exclude = cct::ExcludeFlag::checker_central;
            rec.exclude_reason = "checker too central to crop around";
            std::fprintf(stderr, "flagged %s: checker too central\n",
                         rec.id.c_str());
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s: %s\n", rec.id.c_str(), e.what());
            ++failures;
        }
    }
    cct::save_manifest(m, g.manifest_path);
    return failures ? 1 : 0;
}

int cmd_build(const GlobalOpts& g, bool dry_run) {
    const cct::Manifest m = load_with_overrides(g);
    cct::BuildOptions opts;
    opts.dry_run = dry_run;
    opts.jobs = g.jobs;
    const cct::BuildResult r = cct::build_dataset(m, g.out_dir, opts);

    std::printf("pairs: %d\n", r.total_pairs());
    std::printf("train pairs: %d\n", r.train_pairs);
    std::printf("test pairs: %d\n", r.test_pairs);
    if (r.unassigned_pairs)
        std::printf("unassigned pairs: %d\n", r.unassigned_pairs);
    std::printf("failures: %zu\n", r.failures.size());
    if (!dry_run) {
        std::printf("residual mean: %.6f\n", r.residual_mean);
        std::printf("residual max: %.6f\n", r.residual_max);
    }
    for (const auto& f : r.failures)
        std::fprintf(stderr, "failed: %s fg=%d ref=%s: %s\n",
                     f.source_id.c_str(), f.fg_index, f.reference_id.c_str(),
                     f.error.c_str());
    return r.failures.empty() ? 0 : 1;
}

int cmd_validate(const GlobalOpts& g) {
    const cct::Manifest m = load_with_overrides(g);
    const cct::ValidationReport report = cct::validate_outputs(m, g.out_dir);
    for (const auto& c : report.checks)
        std::printf("%-24s %s  %s\n", c.name.c_str(),
                    c.passed ? "pass" : "FAIL", c.detail.c_str());
    return report.all_passed() ? 0 : 1;
}

int cmd_metrics(const GlobalOpts& g) {
    const auto out_dir = std::filesystem::path(g.out_dir);
    const cct::StoredBuild stored = cct::load_pairs_json(out_dir / "pairs.json");

    double mse_sum = 0, fmse_sum = 0, psnr_sum = 0;
    int n = 0, psnr_finite = 0;
    std::printf("pair\tmse\tfmse\tpsnr\n");
    for (const auto& p : stored.result.pairs) {
        const cct::Image8 comp = cct::load_rgb8(out_dir / p.composite_path);
        const cct::Image8 real = cct::load_rgb8(out_dir / p.real_path);
        const cct::Image8 mask8 = cct::load_gray8(out_dir / p.mask_path);
        const cct::ForegroundMask mask = cct::ForegroundMask::from_image(mask8);

        const double v_mse = cct::mse(comp, real);
        const double v_fmse = cct::fmse(comp, real, mask);
        const double v_psnr = cct::psnr(comp, real);
        const std::string pair_id = p.source_id + "_" +
                                    std::to_string(p.fg_index) + "_" +
                                    p.reference_id;
        if (std::isinf(v_psnr))
            std::printf("%s\t%.4f\t%.4f\tinf\n", pair_id.c_str(), v_mse, v_fmse);
        else
            std::printf("%s\t%.4f\t%.4f\t%.4f\n", pair_id.c_str(), v_mse,
                        v_fmse, v_psnr);

        mse_sum += v_mse;
        fmse_sum += v_fmse;
        if (!std::isinf(v_psnr)) {
            psnr_sum += v_psnr;
            ++psnr_finite;
        }
        ++n;
    }
    if (n) {
        std::printf("mean\t%.4f\t%.4f\t", mse_sum / n, fmse_sum / n);
        if (psnr_finite)
            std::printf("%.4f\n", psnr_sum / psnr_finite);
        else
            std::printf("inf\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"color-checker based illumination transfer and dataset builder"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--manifest", g.manifest_path, "dataset manifest file")
        ->required();
    app.add_option("--out-dir", g.out_dir, "output directory (default: out)");
    std::uint64_t seed_val = 0;
    auto* seed_opt =
        app.add_option("--seed", seed_val, "override the manifest RNG seed");
    int refs_val = 0;
    auto* refs_opt = app.add_option("--refs-per-fg", refs_val,
                                    "override references per foreground");
    double ridge_val = 0;
    auto* ridge_opt =
        app.add_option("--ridge", ridge_val, "override the ridge weight");
    int degree_val = 0;
    auto* degree_opt = app.add_option("--degree", degree_val,
                                      "override the polynomial degree (1 or 2)");
    app.add_option("--jobs", g.jobs, "worker threads (0 = hardware)");
    app.fallthrough();

    auto* c_extract = app.add_subcommand("extract-patches",
                                         "print sampled chart colors per image");
    auto* c_fit = app.add_subcommand(
        "fit", "fit forward/inverse transforms and report residuals");
    auto* c_scan = app.add_subcommand(
        "scan-duplicates", "flag near-duplicate images in the manifest");
    auto* c_crop = app.add_subcommand(
        "crop", "report chart-excluding crops; flag images with central charts");
    auto* c_build =
        app.add_subcommand("build", "generate the full composite/real pair set");
    bool dry_run = false;
    c_build->add_flag("--dry-run", dry_run,
                      "plan pairs and report counts without reading or "
                      "writing image files");
    auto* c_validate = app.add_subcommand(
        "validate", "re-check build invariants of an output directory");
    auto* c_metrics = app.add_subcommand(
        "metrics", "per-pair mse/fmse/psnr table for a built output directory");

    CLI11_PARSE(app, argc, argv);

    if (seed_opt->count())
        g.seed = seed_val;
    if (refs_opt->count())
        g.refs_per_fg = refs_val;
    if (ridge_opt->count())
        g.ridge = ridge_val;
    if (degree_opt->count())
        g.degree = degree_val;

    try {
        if (c_extract->parsed())
            return cmd_extract_patches(g);
        if (c_fit->parsed())
            return cmd_fit(g);
        if (c_scan->parsed())
            return cmd_scan_duplicates(g);
        if (c_crop->parsed())
            return cmd_crop(g);
        if (c_build->parsed())
            return cmd_build(g, dry_run);
        if (c_validate->parsed())
            return cmd_validate(g);
        if (c_metrics->parsed())
            return cmd_metrics(g);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
