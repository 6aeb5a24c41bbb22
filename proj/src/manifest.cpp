// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/manifest.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace cct {

using nlohmann::json;

std::string to_string(Split s) {
    switch (s) {
    case Split::train:
        return "train";
    case Split::test:
        return "test";
    default:
        return "unassigned";
    }
}

Split split_from_string(const std::string& s) {
    if (s == "train")
        return Split::train;
    if (s == "test")
        return Split::test;
    if (s == "unassigned")
        return Split::unassigned;
    throw ParseError("manifest: unknown split '" + s + "'");
}

std::string to_string(ExcludeFlag f) {
    switch (f) {
    case ExcludeFlag::duplicate:
        return "duplicate";
    case ExcludeFlag::misleading_checker:
        return "misleading_checker";
    case ExcludeFlag::checker_central:
        return "checker_central";
    default:
        return "none";
    }
}

ExcludeFlag exclude_flag_from_string(const std::string& s) {
    if (s == "duplicate")
        return ExcludeFlag::duplicate;
    if (s == "misleading_checker")
        return ExcludeFlag::misleading_checker;
    if (s == "checker_central")
        return ExcludeFlag::checker_central;
    if (s == "none" || s.empty())
        return ExcludeFlag::none;
    throw ParseError("manifest: unknown exclusion flag '" + s + "'");
}

const ImageRecord* Manifest::find(const std::string& image_id) const {
    for (const auto& rec : images)
        if (rec.id == image_id)
            return &rec;
    return nullptr;
}

ImageRecord* Manifest::find(const std::string& image_id) {
    for (auto& rec : images)
        if (rec.id == image_id)
            return &rec;
    return nullptr;
}

void Manifest::validate() const {
    config.spec.validate();
    if (references_per_foreground < 1)
        throw ParseError("manifest: references_per_foreground must be >= 1");
    if (!(config.ridge >= 0.0))
        throw ParseError("manifest: ridge must be non-negative");
    std::unordered_set<std::string> ids;
    for (const auto& rec : images) {
        if (rec.id.empty())
            throw ParseError("manifest: image record with empty id");
        if (!ids.insert(rec.id).second)
            throw ParseError("manifest: duplicate image id '" + rec.id + "'");
        if (!rec.excluded() && rec.masks.empty())
            throw ParseError("manifest: image '" + rec.id +
                             "' has no masks and is not excluded");
    }
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("manifest: cannot open " + path.string());

    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("manifest: " + std::string(e.what()));
    }

    Manifest m;
    m.base_dir = path.has_parent_path() ? path.parent_path()
                                        : std::filesystem::path(".");
    try {
        m.seed = j.value("seed", std::uint64_t{0});
        m.references_per_foreground = j.value("references_per_foreground", 10);
        m.annotations_path = j.value("annotations", "");
        m.reference_colors_path = j.value("reference_colors", "");

        if (j.contains("config")) {
            const json& c = j["config"];
            m.config.spec.degree = c.value("degree", 2);
            m.config.spec.include_bias = c.value("include_bias", true);
            m.config.ridge = c.value("ridge", kDefaultRidge);
            m.config.bbox_margin_px = c.value("bbox_margin_px", kBboxMarginPx);
            m.config.crop_min_area_frac =
                c.value("crop_min_area_frac", kCropMinAreaFrac);
            m.config.duplicate_threshold =
                c.value("duplicate_threshold", kDuplicateThreshold);
            m.config.residual_flag_threshold =
                c.value("residual_flag_threshold", 0.05);
        }

        for (const json& ji : j.value("images", json::array())) {
            ImageRecord rec;
            rec.id = ji.at("id").get<std::string>();
            rec.path = ji.value("path", "");
            for (const json& mask : ji.value("masks", json::array()))
                rec.masks.push_back(mask.get<std::string>());
            rec.split = split_from_string(ji.value("split", "unassigned"));
            if (ji.contains("exclude") && !ji["exclude"].is_null()) {
                rec.exclude = exclude_flag_from_string(
                    ji["exclude"].value("flag", "none"));
                rec.exclude_reason = ji["exclude"].value("reason", "");
            }
            m.images.push_back(std::move(rec));
        }
    } catch (const json::exception& e) {
        throw ParseError("manifest: " + std::string(e.what()));
    }

    m.validate();
    return m;
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
    json j;
    j["seed"] = m.seed;
    j["references_per_foreground"] = m.references_per_foreground;
    j["annotations"] = m.annotations_path;
    j["reference_colors"] = m.reference_colors_path;
    j["config"] = {
        {"degree", m.config.spec.degree},
        {"include_bias", m.config.spec.include_bias},
        {"ridge", m.config.ridge},
        {"bbox_margin_px", m.config.bbox_margin_px},
        {"crop_min_area_frac", m.config.crop_min_area_frac},
        {"duplicate_threshold", m.config.duplicate_threshold},
        {"residual_flag_threshold", m.config.residual_flag_threshold},
    };
    j["images"] = json::array();
    for (const auto& rec : m.images) {
        json ji = {
            {"id", rec.id},
            {"path", rec.path},
            {"masks", rec.masks},
            {"split", to_string(rec.split)},
        };
        if (rec.excluded())
            ji["exclude"] = {{"flag", to_string(rec.exclude)},
                             {"reason", rec.exclude_reason}};
        j["images"].push_back(std::move(ji));
    }

    std::ofstream out(path);
    if (!out)
        throw Error("manifest: cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace cct
