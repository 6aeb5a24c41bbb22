// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include <json.hpp>

#include "cctransfer/compose.hpp"
#include "cctransfer/image_io.hpp"
#include "cctransfer/patches.hpp"
#include "cctransfer/transfer.hpp"

namespace cct {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kCompositeDir = "composites";
constexpr const char* kRealDir = "reals";
constexpr const char* kMaskDir = "masks";
constexpr const char* kTransformDir = "transforms";

std::uint64_t fnv1a64_str(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Rejection-sampled bounded draw; keeps the selection reproducible across
// standard libraries (uniform_int_distribution is not pinned by the
// standard).
std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                                : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

std::string pair_stem(const std::string& src, int fg) {
    return src + "_" + std::to_string(fg);
}

} // namespace

std::vector<DuplicatePair> near_duplicate_scan(Manifest& m) {
    struct Entry {
        std::string id;
        std::uint64_t hash;
    };
    std::vector<Entry> entries;
    entries.reserve(m.images.size());
    for (const auto& rec : m.images) {
        const Image8 img = load_rgb8(m.resolve(rec.path));
        entries.push_back({rec.id, dhash64(img)});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.id < b.id; });

    std::vector<DuplicatePair> found;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            const int d = hamming64(entries[i].hash, entries[j].hash);
            if (d > m.config.duplicate_threshold)
                continue;
            found.push_back({entries[i].id, entries[j].id, d});
            ImageRecord* later = m.find(entries[j].id);
            if (later && !later->excluded()) {
                later->exclude = ExcludeFlag::duplicate;
                later->exclude_reason = "near-duplicate of " + entries[i].id +
                                        " (distance " + std::to_string(d) + ")";
            }
        }
    }
    return found;
}

std::vector<std::string> select_references(const Manifest& m,
                                           const std::string& image_id,
                                           int fg_index) {
    const ImageRecord* self = m.find(image_id);
    if (!self)
        throw Error("select_references: unknown image id '" + image_id + "'");

    std::vector<std::string> pool;
    for (const auto& rec : m.images)
        if (!rec.excluded() && rec.id != image_id && rec.split == self->split)
            pool.push_back(rec.id);
    std::sort(pool.begin(), pool.end());

    const int k = m.references_per_foreground;
    if (static_cast<int>(pool.size()) < k)
        throw InsufficientPool(
            "image '" + image_id + "': only " + std::to_string(pool.size()) +
            " same-split candidates for " + std::to_string(k) + " references");

    std::mt19937_64 rng(splitmix64(
        m.seed ^ fnv1a64_str(image_id + "\x1f" + std::to_string(fg_index))));
    // Partial Fisher-Yates: the first k slots are the draw.
    for (int i = 0; i < k; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(bounded_rand(rng, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

namespace {

/// Per-image products of the preparation pass. Heavy rasters are not kept;
/// the pair pass reloads what it needs.
struct Prepared {
    CheckerAnnotation ann;
    TransformPair transforms;
    double residual_forward = 0.0;
    double residual_inverse = 0.0;
    RectI crop_rect;
    std::string error; // nonempty: image unusable
};

struct FgUnit {
    const ImageRecord* rec;
    int fg_index;
    std::vector<std::string> references;
    std::string plan_error; // selection failed
};

} // namespace

BuildResult build_dataset(const Manifest& m, const fs::path& out_dir,
                          const BuildOptions& opts) {
    m.validate();
    BuildResult result;
    result.dry_run = opts.dry_run;

    // Plan: one unit per (image, foreground), references drawn up front so
    // the plan is a pure function of manifest + seed.
    std::vector<FgUnit> units;
    for (const auto& rec : m.images) {
        if (rec.excluded())
            continue;
        for (int fg = 0; fg < static_cast<int>(rec.masks.size()); ++fg) {
            FgUnit u{&rec, fg, {}, {}};
            if (rec.split == Split::unassigned) {
                u.plan_error = "split unassigned";
            } else {
                try {
                    u.references = select_references(m, rec.id, fg);
                } catch (const Error& e) {
                    u.plan_error = e.what();
                }
            }
            units.push_back(std::move(u));
        }
    }

    std::mutex mu;
    auto record_failure = [&](const std::string& src, int fg,
                              const std::string& ref, const std::string& err) {
        std::lock_guard lock(mu);
        result.failures.push_back({src, fg, ref, err});
    };

    if (opts.dry_run) {
        for (const auto& u : units) {
            if (!u.plan_error.empty()) {
                record_failure(u.rec->id, u.fg_index, "", u.plan_error);
                continue;
            }
            for (const auto& ref : u.references) {
                PairRecord p;
                p.source_id = u.rec->id;
                p.fg_index = u.fg_index;
                p.reference_id = ref;
                p.split = u.rec->split;
                const std::string stem = pair_stem(p.source_id, p.fg_index);
                p.composite_path = std::string(kCompositeDir) + "/" + stem +
                                   "_" + ref + ".png";
                p.real_path = std::string(kRealDir) + "/" + stem + ".png";
                p.mask_path = std::string(kMaskDir) + "/" + stem + ".png";
                result.pairs.push_back(std::move(p));
            }
        }
    } else {
        fs::create_directories(out_dir / kCompositeDir);
        fs::create_directories(out_dir / kRealDir);
        fs::create_directories(out_dir / kMaskDir);
        fs::create_directories(out_dir / kTransformDir);

        std::vector<CheckerAnnotation> annotations =
            load_annotations(m.resolve(m.annotations_path));
        const PatchSet canonical =
            load_reference_colors(m.resolve(m.reference_colors_path));

        // Preparation pass: every usable image gets patches, transforms and
        // a crop rectangle. References need this too, so run it for all
        // non-excluded images.
        std::vector<const ImageRecord*> prep_recs;
        for (const auto& rec : m.images)
            if (!rec.excluded())
                prep_recs.push_back(&rec);

        std::map<std::string, Prepared> prepared;
        for (const auto* rec : prep_recs)
            prepared[rec->id] = {};

        parallel_for(prep_recs.size(), opts.jobs, [&](std::size_t i) {
            const ImageRecord& rec = *prep_recs[i];
            Prepared& p = prepared.at(rec.id);
            try {
                const auto ann_it = std::find_if(
                    annotations.begin(), annotations.end(),
                    [&](const CheckerAnnotation& a) { return a.image_id == rec.id; });
                if (ann_it == annotations.end())
                    throw Error("no annotation for image");
                p.ann = *ann_it;

                const Image8 img8 = load_rgb8(m.resolve(rec.path));
                const ImageF linear = decode_linear(img8);
                const PatchSet patches = sample_patch_colors(linear, p.ann);

                const fs::path cache =
                    out_dir / kTransformDir / (rec.id + ".txt");
                auto cached = load_transform_cache(cache, rec.id,
                                                   m.config.spec, m.config.ridge);
                if (cached) {
                    p.transforms = *cached;
                } else {
                    p.transforms = fit_pair(canonical, patches, m.config.spec,
                                            m.config.ridge);
                    save_transform_cache(cache, rec.id, p.transforms,
                                         m.config.ridge);
                }
                p.residual_forward =
                    fit_residual(p.transforms.forward, patches, canonical);
                p.residual_inverse =
                    fit_residual(p.transforms.inverse, canonical, patches);

                const RectI bbox = checker_bbox(p.ann, img8.width, img8.height,
                                                m.config.bbox_margin_px);
                p.crop_rect = crop_excluding_checker(
                    img8.width, img8.height, bbox, m.config.crop_min_area_frac);
            } catch (const std::exception& e) {
                p.error = e.what();
            }
        });

        double residual_sum = 0.0;
        int residual_n = 0;
        for (const auto& [id, p] : prepared) {
            if (!p.error.empty())
                continue;
            residual_sum += p.residual_forward;
            result.residual_max = std::max(result.residual_max, p.residual_forward);
            ++residual_n;
        }
        result.residual_mean = residual_n ? residual_sum / residual_n : 0.0;

        // Pair pass: each unit loads its source once and walks its
        // references. Results land in per-unit slots so the final order is
        // independent of scheduling.
        std::vector<std::vector<PairRecord>> unit_pairs(units.size());
        parallel_for(units.size(), opts.jobs, [&](std::size_t ui) {
            const FgUnit& u = units[ui];
            if (!u.plan_error.empty()) {
                record_failure(u.rec->id, u.fg_index, "", u.plan_error);
                return;
            }
            const Prepared& src = prepared.at(u.rec->id);
            if (!src.error.empty()) {
                for (const auto& ref : u.references)
                    record_failure(u.rec->id, u.fg_index, ref,
                                   "source image: " + src.error);
                return;
            }
            try {
                const Image8 img8 = load_rgb8(m.resolve(u.rec->path));
                const Image8 mask8 =
                    load_gray8(m.resolve(u.rec->masks[u.fg_index]));
                if (mask8.width != img8.width || mask8.height != img8.height)
                    throw DimensionMismatch("mask does not match image size");
                const ForegroundMask full_mask = ForegroundMask::from_image(mask8);
                const ForegroundMask mask = crop(full_mask, src.crop_rect);
                const Image8 cropped8 = crop(img8, src.crop_rect);
                const ImageF cropped_lin = decode_linear(cropped8);

                const std::string stem = pair_stem(u.rec->id, u.fg_index);
                const std::string real_rel =
                    std::string(kRealDir) + "/" + stem + ".png";
                const std::string mask_rel =
                    std::string(kMaskDir) + "/" + stem + ".png";
                save_png(out_dir / real_rel, cropped8);
                Image8 mask_out(mask.width, mask.height, 1);
                for (std::size_t i = 0; i < mask.fg.size(); ++i)
                    mask_out.pixels[i] = mask.fg[i] ? 255 : 0;
                save_png(out_dir / mask_rel, mask_out);

                for (const auto& ref : u.references) {
                    const Prepared& dst = prepared.at(ref);
                    if (!dst.error.empty()) {
                        record_failure(u.rec->id, u.fg_index, ref,
                                       "reference image: " + dst.error);
                        continue;
                    }
                    const ImageF transferred = transitive_transfer(
                        cropped_lin, mask, src.transforms.forward,
                        dst.transforms.inverse);
                    const ImageF comp = composite(transferred, cropped_lin, mask);

                    PairRecord p;
                    p.source_id = u.rec->id;
                    p.fg_index = u.fg_index;
                    p.reference_id = ref;
                    p.split = u.rec->split;
                    p.composite_path = std::string(kCompositeDir) + "/" + stem +
                                       "_" + ref + ".png";
                    p.real_path = real_rel;
                    p.mask_path = mask_rel;
                    p.forward_fingerprint =
                        transform_fingerprint(src.transforms.forward);
                    p.inverse_fingerprint =
                        transform_fingerprint(dst.transforms.inverse);
                    p.residual_source = src.residual_forward;
                    p.residual_reference = dst.residual_inverse;

                    save_png(out_dir / p.composite_path, encode_srgb(comp));
                    unit_pairs[ui].push_back(std::move(p));
                }
            } catch (const std::exception& e) {
                for (const auto& ref : u.references)
                    record_failure(u.rec->id, u.fg_index, ref, e.what());
            }
        });

        for (auto& ups : unit_pairs)
            for (auto& p : ups)
                result.pairs.push_back(std::move(p));
    }

    std::sort(result.failures.begin(), result.failures.end(),
              [](const BuildFailure& a, const BuildFailure& b) {
                  return std::tie(a.source_id, a.fg_index, a.reference_id) <
                         std::tie(b.source_id, b.fg_index, b.reference_id);
              });

    for (const auto& p : result.pairs) {
        switch (p.split) {
        case Split::train:
            ++result.train_pairs;
            break;
        case Split::test:
            ++result.test_pairs;
            break;
        default:
            ++result.unassigned_pairs;
            break;
        }
    }

    if (!opts.dry_run)
        save_pairs_json(result, m, out_dir / "pairs.json");
    return result;
}

void save_pairs_json(const BuildResult& r, const Manifest& m,
                     const fs::path& path) {
    json j;
    j["seed"] = m.seed;
    j["references_per_foreground"] = m.references_per_foreground;
    j["dry_run"] = r.dry_run;
    j["config"] = {
        {"degree", m.config.spec.degree},
        {"include_bias", m.config.spec.include_bias},
        {"ridge", m.config.ridge},
        {"bbox_margin_px", m.config.bbox_margin_px},
        {"crop_min_area_frac", m.config.crop_min_area_frac},
    };

    j["pairs"] = json::array();
    for (const auto& p : r.pairs) {
        j["pairs"].push_back({
            {"source_id", p.source_id},
            {"fg_index", p.fg_index},
            {"reference_id", p.reference_id},
            {"split", to_string(p.split)},
            {"composite", p.composite_path},
            {"real", p.real_path},
            {"mask", p.mask_path},
            {"forward_fingerprint", p.forward_fingerprint},
            {"inverse_fingerprint", p.inverse_fingerprint},
            {"residual_source", p.residual_source},
            {"residual_reference", p.residual_reference},
        });
    }
    j["failures"] = json::array();
    for (const auto& f : r.failures)
        j["failures"].push_back({{"source_id", f.source_id},
                                 {"fg_index", f.fg_index},
                                 {"reference_id", f.reference_id},
                                 {"error", f.error}});
    j["summary"] = {
        {"total", r.total_pairs()},     {"train", r.train_pairs},
        {"test", r.test_pairs},         {"unassigned", r.unassigned_pairs},
        {"failed", r.failures.size()},  {"residual_mean", r.residual_mean},
        {"residual_max", r.residual_max},
    };

    std::ofstream out(path);
    if (!out)
        throw Error("pairs.json: cannot write " + path.string());
    out << j.dump(2) << '\n';
}

StoredBuild load_pairs_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("pairs.json: cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("pairs.json: " + std::string(e.what()));
    }

    StoredBuild out;
    try {
        out.seed = j.value("seed", std::uint64_t{0});
        out.references_per_foreground = j.value("references_per_foreground", 0);
        out.result.dry_run = j.value("dry_run", false);
        if (j.contains("config")) {
            const json& c = j["config"];
            out.config.spec.degree = c.value("degree", 2);
            out.config.spec.include_bias = c.value("include_bias", true);
            out.config.ridge = c.value("ridge", kDefaultRidge);
            out.config.bbox_margin_px = c.value("bbox_margin_px", kBboxMarginPx);
            out.config.crop_min_area_frac =
                c.value("crop_min_area_frac", kCropMinAreaFrac);
        }
        for (const json& jp : j.value("pairs", json::array())) {
            PairRecord p;
            p.source_id = jp.at("source_id").get<std::string>();
            p.fg_index = jp.at("fg_index").get<int>();
            p.reference_id = jp.at("reference_id").get<std::string>();
            p.split = split_from_string(jp.value("split", "unassigned"));
            p.composite_path = jp.value("composite", "");
            p.real_path = jp.value("real", "");
            p.mask_path = jp.value("mask", "");
            p.forward_fingerprint = jp.value("forward_fingerprint", "");
            p.inverse_fingerprint = jp.value("inverse_fingerprint", "");
            p.residual_source = jp.value("residual_source", 0.0);
            p.residual_reference = jp.value("residual_reference", 0.0);
            out.result.pairs.push_back(std::move(p));
        }
        for (const json& jf : j.value("failures", json::array())) {
            BuildFailure f;
            f.source_id = jf.value("source_id", "");
            f.fg_index = jf.value("fg_index", -1);
            f.reference_id = jf.value("reference_id", "");
            f.error = jf.value("error", "");
            out.result.failures.push_back(std::move(f));
        }
    } catch (const json::exception& e) {
        throw ParseError("pairs.json: " + std::string(e.what()));
    }

    for (const auto& p : out.result.pairs) {
        switch (p.split) {
        case Split::train:
            ++out.result.train_pairs;
            break;
        case Split::test:
            ++out.result.test_pairs;
            break;
        default:
            ++out.result.unassigned_pairs;
            break;
        }
    }
    return out;
}

namespace {

bool images_equal(const Image8& a, const Image8& b) {
    return a.width == b.width && a.height == b.height &&
           a.channels == b.channels && a.pixels == b.pixels;
}

} // namespace

ValidationReport validate_outputs(const Manifest& m, const fs::path& out_dir) {
    ValidationReport report;
    auto add = [&](const std::string& name, bool ok, const std::string& detail) {
        report.checks.push_back({name, ok, detail});
    };

    StoredBuild stored;
    try {
        stored = load_pairs_json(out_dir / "pairs.json");
    } catch (const std::exception& e) {
        add("pairs-file", false, e.what());
        return report;
    }
    add("pairs-file", true,
        std::to_string(stored.result.total_pairs()) + " pairs recorded");

    {
        const bool ok = stored.seed == m.seed &&
                        stored.references_per_foreground ==
                            m.references_per_foreground &&
                        stored.config.spec == m.config.spec &&
                        stored.config.ridge == m.config.ridge;
        add("config-match", ok,
            ok ? "build snapshot matches manifest"
               : "manifest settings differ from the build snapshot");
    }

    // Count law: per foreground, pairs plus recorded failures equal the
    // reference count exactly.
    {
        std::map<std::pair<std::string, int>, int> seen;
        for (const auto& p : stored.result.pairs)
            ++seen[{p.source_id, p.fg_index}];
        for (const auto& f : stored.result.failures)
            if (f.fg_index >= 0 && !f.reference_id.empty())
                ++seen[{f.source_id, f.fg_index}];
            else if (f.fg_index >= 0)
                seen[{f.source_id, f.fg_index}] += m.references_per_foreground;

        bool ok = true;
        std::string detail;
        int expected_units = 0;
        for (const auto& rec : m.images) {
            if (rec.excluded())
                continue;
            for (int fg = 0; fg < static_cast<int>(rec.masks.size()); ++fg) {
                ++expected_units;
                const auto it = seen.find({rec.id, fg});
                const int n = it == seen.end() ? 0 : it->second;
                if (n != m.references_per_foreground) {
                    ok = false;
                    detail = "foreground " + pair_stem(rec.id, fg) + " has " +
                             std::to_string(n) + " accounted pairs, expected " +
                             std::to_string(m.references_per_foreground);
                    break;
                }
            }
            if (!ok)
                break;
        }
        if (ok)
            detail = std::to_string(expected_units) + " foregrounds x " +
                     std::to_string(m.references_per_foreground) + " references";
        add("count-law", ok, detail);
    }

    {
        bool ok = true;
        std::string detail = "no source paired with itself";
        for (const auto& p : stored.result.pairs)
            if (p.source_id == p.reference_id) {
                ok = false;
                detail = "self pair on " + p.source_id;
                break;
            }
        add("no-self-pairs", ok, detail);
    }

    {
        bool ok = true;
        std::string detail = "references stay inside their split";
        for (const auto& p : stored.result.pairs) {
            const ImageRecord* src = m.find(p.source_id);
            const ImageRecord* ref = m.find(p.reference_id);
            if (!src || !ref || src->split != ref->split || src->split != p.split) {
                ok = false;
                detail = "split leakage on pair " + p.source_id + "->" +
                         p.reference_id;
                break;
            }
        }
        add("split-leakage", ok, detail);
    }

    {
        bool ok = true;
        std::string detail = "all referenced files exist";
        for (const auto& p : stored.result.pairs) {
            for (const std::string& rel :
                 {p.composite_path, p.real_path, p.mask_path}) {
                if (!fs::exists(out_dir / rel)) {
                    ok = false;
                    detail = "missing file " + rel;
                    break;
                }
            }
            if (!ok)
                break;
        }
        add("files-exist", ok, detail);
    }

    // Reference replay: per foreground, the recorded references (pairs plus
    // pair-specific failures) must be exactly the fresh deterministic draw,
    // and the successful pairs must follow the draw order. Failures are
    // stored sorted, so only set membership is checked for them.
    {
        bool ok = true;
        std::string detail = "recorded references replay from the seed";
        std::map<std::pair<std::string, int>, std::vector<std::string>> paired;
        std::map<std::pair<std::string, int>, std::vector<std::string>> failed;
        for (const auto& p : stored.result.pairs)
            paired[{p.source_id, p.fg_index}].push_back(p.reference_id);
        for (const auto& f : stored.result.failures)
            if (f.fg_index >= 0 && !f.reference_id.empty()) {
                failed[{f.source_id, f.fg_index}].push_back(f.reference_id);
                paired.try_emplace({f.source_id, f.fg_index});
            }
        for (auto& [key, refs] : paired) {
            std::vector<std::string> fresh;
            try {
                fresh = select_references(m, key.first, key.second);
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
                break;
            }
            std::vector<std::string> all = refs;
            const auto fit = failed.find(key);
            if (fit != failed.end())
                all.insert(all.end(), fit->second.begin(), fit->second.end());
            std::vector<std::string> fresh_sorted = fresh;
            std::sort(all.begin(), all.end());
            std::sort(fresh_sorted.begin(), fresh_sorted.end());
            bool match = all == fresh_sorted;
            std::size_t pos = 0;
            for (const auto& r : refs) {
                while (pos < fresh.size() && fresh[pos] != r)
                    ++pos;
                if (pos == fresh.size()) {
                    match = false;
                    break;
                }
                ++pos;
            }
            if (!match) {
                ok = false;
                detail = "reference list for " +
                         pair_stem(key.first, key.second) + " does not replay";
                break;
            }
        }
        add("replay", ok, detail);
    }

    // Pixel-level checks: mask validity, ground-truth identity with the
    // re-cropped source, and background immutability of every composite.
    {
        bool masks_ok = true, gt_ok = true, bg_ok = true;
        std::string masks_detail = "masks are strict 0/255 and nonempty";
        std::string gt_detail = "ground truths equal the cropped sources";
        std::string bg_detail = "composites untouched outside the mask";

        std::map<std::string, Image8> gt_cache;
        for (const auto& p : stored.result.pairs) {
            try {
                const Image8 gt = load_rgb8(out_dir / p.real_path);
                const Image8 mask8 = load_gray8(out_dir / p.mask_path);
                const ForegroundMask mask = ForegroundMask::from_image(mask8);
                if (mask.width != gt.width || mask.height != gt.height) {
                    masks_ok = false;
                    masks_detail = "mask size mismatch on " + p.mask_path;
                    break;
                }

                const ImageRecord* src = m.find(p.source_id);
                if (gt_ok && src) {
                    auto it = gt_cache.find(p.real_path);
                    if (it == gt_cache.end()) {
                        const Image8 original = load_rgb8(m.resolve(src->path));
                        const CheckerAnnotation ann = [&] {
                            for (const auto& a :
                                 load_annotations(m.resolve(m.annotations_path)))
                                if (a.image_id == p.source_id)
                                    return a;
                            throw Error("no annotation for " + p.source_id);
                        }();
                        const RectI bbox =
                            checker_bbox(ann, original.width, original.height,
                                         m.config.bbox_margin_px);
                        const RectI rect = crop_excluding_checker(
                            original.width, original.height, bbox,
                            m.config.crop_min_area_frac);
                        it = gt_cache.emplace(p.real_path, crop(original, rect))
                                 .first;
                    }
                    if (!images_equal(gt, it->second)) {
                        gt_ok = false;
                        gt_detail = p.real_path +
                                    " differs from the cropped source image";
                    }
                }

                const Image8 comp = load_rgb8(out_dir / p.composite_path);
                if (comp.width != gt.width || comp.height != gt.height) {
                    bg_ok = false;
                    bg_detail = "composite size mismatch on " + p.composite_path;
                    break;
                }
                for (int y = 0; bg_ok && y < gt.height; ++y)
                    for (int x = 0; bg_ok && x < gt.width; ++x)
                        if (!mask.is_fg(x, y))
                            for (int c = 0; c < 3; ++c)
                                if (comp.at(x, y, c) != gt.at(x, y, c)) {
                                    bg_ok = false;
                                    bg_detail = "background changed in " +
                                                p.composite_path;
                                    break;
                                }
            } catch (const std::exception& e) {
                masks_ok = false;
                masks_detail = e.what();
                break;
            }
        }
        add("mask-validity", masks_ok, masks_detail);
        add("ground-truth-identity", gt_ok, gt_detail);
        add("background-immutability", bg_ok, bg_detail);
    }

    return report;
}

} // namespace cct
