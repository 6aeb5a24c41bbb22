// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cctransfer/color.hpp"
#include "cctransfer/compose.hpp"
#include "cctransfer/dhash.hpp"
#include "cctransfer/fitting.hpp"

namespace cct {

enum class Split { unassigned, train, test };

/// Exclusion states for one source image. Flags are set by tooling or by
/// hand in the manifest; excluded images never produce pairs but are
/// never deleted.
enum class ExcludeFlag { none, duplicate, misleading_checker, checker_central };

std::string to_string(Split s);
Split split_from_string(const std::string& s);
std::string to_string(ExcludeFlag f);
ExcludeFlag exclude_flag_from_string(const std::string& s);

struct ImageRecord {
    std::string id;
    std::string path;                // image file, relative to the manifest
    std::vector<std::string> masks;  // 1 or 2 foreground masks
    Split split = Split::unassigned;
    ExcludeFlag exclude = ExcludeFlag::none;
    std::string exclude_reason;

    bool excluded() const { return exclude != ExcludeFlag::none; }
};

/// Tunables snapshotted into every build output.
struct PipelineConfig {
    FeatureSpec spec;
    double ridge = kDefaultRidge;
    int bbox_margin_px = kBboxMarginPx;
    double crop_min_area_frac = kCropMinAreaFrac;
    int duplicate_threshold = kDuplicateThreshold;
    double residual_flag_threshold = 0.05; // chart fits above this get reported
};

struct Manifest {
    std::uint64_t seed = 0;
    int references_per_foreground = 10;
    std::string annotations_path;      // relative to the manifest
    std::string reference_colors_path; // relative to the manifest
    PipelineConfig config;
    std::vector<ImageRecord> images;

    /// Directory the manifest was loaded from; relative paths resolve
    /// against it.
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const std::string& rel) const {
        std::filesystem::path p(rel);
        return p.is_absolute() ? p : base_dir / p;
    }

    const ImageRecord* find(const std::string& image_id) const;
    ImageRecord* find(const std::string& image_id);

    /// Throws ParseError on duplicate image ids or malformed records.
    void validate() const;
};

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& m, const std::filesystem::path& path);

} // namespace cct
