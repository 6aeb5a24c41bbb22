// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cctransfer/manifest.hpp"

namespace cct {

/// One near-duplicate finding; ids are ordered so id_a < id_b.
struct DuplicatePair {
    std::string id_a;
    std::string id_b;
    int distance = 0;
};

/// Hash every image in the manifest and flag near-duplicate pairs. For
/// each pair within the Hamming threshold the lexicographically later id
/// gets the `duplicate` exclusion flag (images already excluded for
/// another reason keep their flag). Returns all findings; the manifest is
/// updated in memory, never written here.
std::vector<DuplicatePair> near_duplicate_scan(Manifest& m);

/// Deterministic reference draw for one foreground: k distinct images from
/// the same split, never the source itself, chosen without replacement by
/// an RNG keyed on (manifest seed, image_id, fg_index). Replays exactly.
std::vector<std::string> select_references(const Manifest& m,
                                           const std::string& image_id,
                                           int fg_index);

struct PairRecord {
    std::string source_id;
    int fg_index = 0;
    std::string reference_id;
    Split split = Split::unassigned;
    std::string composite_path; // relative to the output directory
    std::string real_path;
    std::string mask_path;
    std::string forward_fingerprint;
    std::string inverse_fingerprint;
    double residual_source = 0.0;
    double residual_reference = 0.0;
};

struct BuildFailure {
    std::string source_id;
    int fg_index = -1;          // -1: whole-image failure
    std::string reference_id;   // empty: not pair-specific
    std::string error;
};

struct BuildResult {
    bool dry_run = false;
    std::vector<PairRecord> pairs;
    std::vector<BuildFailure> failures;
    int train_pairs = 0;
    int test_pairs = 0;
    int unassigned_pairs = 0;
    double residual_mean = 0.0; // forward-fit RMSE over prepared images
    double residual_max = 0.0;

    int total_pairs() const { return static_cast<int>(pairs.size()); }
};

struct BuildOptions {
    bool dry_run = false;
    int jobs = 0; // 0: hardware concurrency
};

/// Run the full pair-generation batch into out_dir:
/// extract patches, fit (or reuse cached) transforms, crop away the chart,
/// re-illuminate each foreground into every selected reference condition,
/// composite, and write outputs plus a pairs.json build record. Per-item
/// failures are recorded and skipped; the batch never aborts on one image.
/// With dry_run no file is read or written and only the pair plan and
/// counts are produced.
BuildResult build_dataset(const Manifest& m, const std::filesystem::path& out_dir,
                          const BuildOptions& opts = {});

/// pairs.json round trip. Saving also snapshots seed, reference count and
/// config so a build stays auditable after manifest edits.
void save_pairs_json(const BuildResult& r, const Manifest& m,
                     const std::filesystem::path& path);

struct StoredBuild {
    BuildResult result;
    std::uint64_t seed = 0;
    int references_per_foreground = 0;
    PipelineConfig config;
};

StoredBuild load_pairs_json(const std::filesystem::path& path);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed)
                return false;
        return true;
    }
};

/// Re-check the build invariants of an existing output directory against
/// its manifest: counts, self-pairs, split leakage, file existence,
/// ground-truth identity with the cropped sources, reference replay,
/// mask validity, and background immutability of every composite.
ValidationReport validate_outputs(const Manifest& m,
                                  const std::filesystem::path& out_dir);

} // namespace cct
