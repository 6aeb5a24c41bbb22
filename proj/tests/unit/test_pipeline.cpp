// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#include "cctransfer/image_io.hpp"
#include "cctransfer/pipeline.hpp"
#include "support/toy_dataset.hpp"

using namespace cct;
using namespace cct::testing;
namespace fs = std::filesystem;

namespace {

constexpr const char* kRepoRoot = CCT_SOURCE_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("cct_pipeline_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int counter;
};
int TempDir::counter = 0;

Manifest ref_pool(int n, int refs_per_fg, std::uint64_t seed = 99) {
    Manifest m;
    m.seed = seed;
    m.references_per_foreground = refs_per_fg;
    for (int i = 0; i < n; ++i) {
        ImageRecord r;
        char buf[16];
        std::snprintf(buf, sizeof buf, "img%03d", i);
        r.id = buf;
        r.path = std::string(buf) + ".png";
        r.masks = {"m.png"};
        r.split = Split::train;
        m.images.push_back(std::move(r));
    }
    return m;
}

ToyDatasetSpec toy_spec() {
    ToyDatasetSpec s;
    s.reference_colors_src = fs::path(kRepoRoot) / "data/colorchecker_srgb.txt";
    return s;
}

const ValidationCheck* find_check(const ValidationReport& rep,
                                  const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

void require_all_passed(const ValidationReport& rep) {
    for (const auto& c : rep.checks) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.passed);
    }
}

} // namespace

TEST_CASE("an eleven-image pool with ten references uses every other image") {
    for (std::uint64_t seed : {1ull, 77ull, 948214ull}) {
        const Manifest m = ref_pool(11, 10, seed);
        const auto refs = select_references(m, "img005", 0);
        REQUIRE(refs.size() == 10);
        std::set<std::string> got(refs.begin(), refs.end());
        CHECK(got.size() == 10);
        CHECK(got.count("img005") == 0);
        for (int i = 0; i < 11; ++i)
            if (i != 5)
                CHECK(got.count(m.images[i].id) == 1);
    }
}

TEST_CASE("reference selection replays exactly") {
    const Manifest m = ref_pool(50, 5);
    for (int i = 0; i < 50; i += 7)
        for (int fg = 0; fg < 2; ++fg) {
            const auto a = select_references(m, m.images[i].id, fg);
            const auto b = select_references(m, m.images[i].id, fg);
            CHECK(a == b);
        }
    // A reloaded manifest with the same seed draws the same lists.
    Manifest copy = ref_pool(50, 5);
    CHECK(select_references(copy, "img013", 1) ==
          select_references(m, "img013", 1));
}

TEST_CASE("the draw depends on the seed and on the foreground") {
    const Manifest a = ref_pool(50, 5, 1);
    const Manifest b = ref_pool(50, 5, 2);
    int diff = 0;
    for (int i = 0; i < 20; ++i) {
        const std::string& id = a.images[i].id;
        if (select_references(a, id, 0) != select_references(b, id, 0))
            ++diff;
    }
    CHECK(diff > 0);

    int fg_diff = 0;
    for (int i = 0; i < 20; ++i) {
        const std::string& id = a.images[i].id;
        if (select_references(a, id, 0) != select_references(a, id, 1))
            ++fg_diff;
    }
    CHECK(fg_diff > 0);
}

TEST_CASE("selection failure modes") {
    SUBCASE("pool too small") {
        const Manifest m = ref_pool(3, 3);
        CHECK_THROWS_AS(select_references(m, "img000", 0), InsufficientPool);
    }
    SUBCASE("exclusions shrink the pool") {
        Manifest m = ref_pool(12, 10);
        m.images[3].exclude = ExcludeFlag::duplicate;
        CHECK_NOTHROW(select_references(m, "img000", 0)); // pool exactly 10
        m.images[7].exclude = ExcludeFlag::checker_central;
        CHECK_THROWS_AS(select_references(m, "img000", 0), InsufficientPool);
    }
    SUBCASE("unknown image id") {
        const Manifest m = ref_pool(12, 3);
        CHECK_THROWS_AS(select_references(m, "ghost", 0), Error);
    }
}

TEST_CASE("references never leave the split or touch exclusions") {
    Manifest m = ref_pool(30, 8);
    for (int i = 15; i < 30; ++i)
        m.images[i].split = Split::test;
    m.images[2].exclude = ExcludeFlag::duplicate;
    m.images[20].exclude = ExcludeFlag::misleading_checker;

    const auto train_refs = select_references(m, "img004", 0);
    for (const auto& r : train_refs) {
        const ImageRecord* rec = m.find(r);
        REQUIRE(rec != nullptr);
        CHECK(rec->split == Split::train);
        CHECK_FALSE(rec->excluded());
        CHECK(r != "img004");
    }
    const auto test_refs = select_references(m, "img022", 1);
    for (const auto& r : test_refs) {
        CHECK(m.find(r)->split == Split::test);
        CHECK_FALSE(m.find(r)->excluded());
    }
}

TEST_CASE("near-duplicate scan flags the later id") {
    TempDir tmp;
    const fs::path mpath = make_toy_dataset(tmp.path, toy_spec());
    Manifest m = load_manifest(mpath);

    // A record pointing at an existing file is a byte-level duplicate.
    ImageRecord dup;
    dup.id = "img99";
    dup.path = m.images[0].path;
    dup.masks = m.images[0].masks;
    dup.split = Split::train;
    m.images.push_back(dup);

    const auto found = near_duplicate_scan(m);
    REQUIRE(found.size() == 1);
    CHECK(found[0].id_a == "img00");
    CHECK(found[0].id_b == "img99");
    CHECK(found[0].distance == 0);

    CHECK(m.images[0].exclude == ExcludeFlag::none);
    const ImageRecord* flagged = m.find("img99");
    CHECK(flagged->exclude == ExcludeFlag::duplicate);
    CHECK(flagged->exclude_reason.find("img00") != std::string::npos);

    SUBCASE("an existing exclusion is preserved") {
        Manifest m2 = load_manifest(mpath);
        ImageRecord d2 = dup;
        d2.exclude = ExcludeFlag::misleading_checker;
        d2.exclude_reason = "hand-flagged";
        m2.images.push_back(d2);
        const auto found2 = near_duplicate_scan(m2);
        REQUIRE(found2.size() == 1);
        CHECK(m2.find("img99")->exclude == ExcludeFlag::misleading_checker);
        CHECK(m2.find("img99")->exclude_reason == "hand-flagged");
    }
}

TEST_CASE("distinct toy images are not near-duplicates") {
    TempDir tmp;
    Manifest m = load_manifest(make_toy_dataset(tmp.path, toy_spec()));
    CHECK(near_duplicate_scan(m).empty());
    for (const auto& rec : m.images)
        CHECK_FALSE(rec.excluded());
}

TEST_CASE("dry run plans every pair without touching the disk") {
    TempDir tmp;
    const Manifest m = load_manifest(make_toy_dataset(tmp.path, toy_spec()));
    const fs::path out = tmp.path / "out";

    BuildOptions opts;
    opts.dry_run = true;
    const BuildResult r = build_dataset(m, out, opts);

    CHECK(r.dry_run);
    CHECK(r.total_pairs() == 30); // 5 images x 2 foregrounds x 3 references
    CHECK(r.train_pairs == 30);
    CHECK(r.test_pairs == 0);
    CHECK(r.unassigned_pairs == 0);
    CHECK(r.failures.empty());
    CHECK(r.residual_mean == 0.0);
    CHECK_FALSE(fs::exists(out));

    for (const auto& p : r.pairs) {
        CHECK(p.source_id != p.reference_id);
        CHECK(p.composite_path.find("composites/") == 0);
        CHECK(p.real_path.find("reals/") == 0);
        CHECK(p.mask_path.find("masks/") == 0);
        CHECK(p.forward_fingerprint.empty()); // nothing was fitted
    }

    // The plan follows the manifest image order, fg-major.
    CHECK(r.pairs[0].source_id == "img00");
    CHECK(r.pairs[0].fg_index == 0);
    CHECK(r.pairs[3].fg_index == 1);
    CHECK(r.pairs[6].source_id == "img01");
}

TEST_CASE("unassigned splits are planning failures") {
    TempDir tmp;
    Manifest m = load_manifest(make_toy_dataset(tmp.path, toy_spec()));
    m.find("img03")->split = Split::unassigned;

    BuildOptions opts;
    opts.dry_run = true;
    const BuildResult r = build_dataset(m, tmp.path / "out", opts);
    CHECK(r.total_pairs() == 24);
    REQUIRE(r.failures.size() == 2); // one per foreground
    CHECK(r.failures[0].source_id == "img03");
    CHECK(r.failures[0].reference_id.empty());
    CHECK(r.failures[0].error.find("split") != std::string::npos);
}

TEST_CASE("a full toy build writes every output and validates green") {
    TempDir tmp;
    const Manifest m = load_manifest(make_toy_dataset(tmp.path, toy_spec()));
    const fs::path out = tmp.path / "out";

    BuildOptions opts;
    opts.jobs = 1;
    const BuildResult r = build_dataset(m, out, opts);

    CHECK(r.total_pairs() == 30);
    CHECK(r.train_pairs == 30);
    CHECK(r.failures.empty());
    CHECK(r.residual_mean > 0.0);
    CHECK(r.residual_max < 0.02); // rendered charts fit nearly exactly
    for (const auto& p : r.pairs) {
        CHECK(fs::exists(out / p.composite_path));
        CHECK(fs::exists(out / p.real_path));
        CHECK(fs::exists(out / p.mask_path));
        CHECK(p.forward_fingerprint.size() == 16);
        CHECK(p.inverse_fingerprint.size() == 16);
    }
    CHECK(fs::exists(out / "pairs.json"));
    for (const auto& rec : m.images)
        CHECK(fs::exists(out / "transforms" / (rec.id + ".txt")));

    SUBCASE("pairs.json round trips") {
        const StoredBuild stored = load_pairs_json(out / "pairs.json");
        CHECK(stored.seed == m.seed);
        CHECK(stored.references_per_foreground == 3);
        CHECK(stored.config.spec == m.config.spec);
        CHECK(stored.config.ridge == m.config.ridge);
        REQUIRE(stored.result.total_pairs() == 30);
        CHECK(stored.result.train_pairs == 30);
        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
            CHECK(stored.result.pairs[i].source_id == r.pairs[i].source_id);
            CHECK(stored.result.pairs[i].reference_id == r.pairs[i].reference_id);
            CHECK(stored.result.pairs[i].composite_path ==
                  r.pairs[i].composite_path);
            CHECK(stored.result.pairs[i].forward_fingerprint ==
                  r.pairs[i].forward_fingerprint);
        }
    }

    SUBCASE("validation passes on an untouched build") {
        const ValidationReport rep = validate_outputs(m, out);
        CHECK(rep.checks.size() == 10);
        require_all_passed(rep);
        CHECK(rep.all_passed());
    }
}

TEST_CASE("one broken mask fails its unit and nothing else") {
    TempDir tmp;
    const Manifest m = load_manifest(make_toy_dataset(tmp.path, toy_spec()));
    {
        std::ofstream bad(m.resolve(m.find("img02")->masks[1]),
                          std::ios::binary | std::ios::trunc);
        bad << "not a png";
    }

    const fs::path out = tmp.path / "out";
    const BuildResult r = build_dataset(m, out, {});

    CHECK(r.total_pairs() == 27);
    REQUIRE(r.failures.size() == 3); // every reference of the broken unit
    for (const auto& f : r.failures) {
        CHECK(f.source_id == "img02");
        CHECK(f.fg_index == 1);
        CHECK_FALSE(f.reference_id.empty());
    }

    // The other foreground of the same image still built.
    int img02_pairs = 0;
    for (const auto& p : r.pairs)
        if (p.source_id == "img02") {
            CHECK(p.fg_index == 0);
            ++img02_pairs;
        }
    CHECK(img02_pairs == 3);

    // Honest partial failure still validates: the failures account for the
    // missing pairs and the replay check accepts them.
    require_all_passed(validate_outputs(m, out));
}

TEST_CASE("tampered outputs are caught") {
    TempDir tmp;
    const Manifest m = load_manifest(make_toy_dataset(tmp.path, toy_spec()));
    const fs::path out = tmp.path / "out";
    const BuildResult r = build_dataset(m, out, {});
    REQUIRE(r.total_pairs() == 30);
    REQUIRE(validate_outputs(m, out).all_passed());

    const fs::path pairs_path = out / "pairs.json";
    std::string pristine;
    {
        std::ifstream in(pairs_path, std::ios::binary);
        pristine.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto restore = [&] {
        std::ofstream f(pairs_path, std::ios::binary | std::ios::trunc);
        f << pristine;
    };

    SUBCASE("a missing composite file") {
        const fs::path victim = out / r.pairs[4].composite_path;
        fs::rename(victim, victim.string() + ".bak");
        const ValidationReport rep = validate_outputs(m, out);
        CHECK_FALSE(rep.all_passed());
        CHECK_FALSE(find_check(rep, "files-exist")->passed);
        fs::rename(victim.string() + ".bak", victim);
        CHECK(validate_outputs(m, out).all_passed());
    }

    SUBCASE("a dropped pair record") {
        nlohmann::json j = nlohmann::json::parse(pristine);
        j["pairs"].erase(0);
        {
            std::ofstream f(pairs_path, std::ios::trunc);
            f << j.dump(2);
        }
        const ValidationReport rep = validate_outputs(m, out);
        CHECK_FALSE(find_check(rep, "count-law")->passed);
        restore();
    }

    SUBCASE("reordered references break the replay") {
        nlohmann::json j = nlohmann::json::parse(pristine);
        REQUIRE(j["pairs"][0]["source_id"] == j["pairs"][1]["source_id"]);
        REQUIRE(j["pairs"][0]["fg_index"] == j["pairs"][1]["fg_index"]);
        std::swap(j["pairs"][0], j["pairs"][1]);
        {
            std::ofstream f(pairs_path, std::ios::trunc);
            f << j.dump(2);
        }
        const ValidationReport rep = validate_outputs(m, out);
        CHECK_FALSE(find_check(rep, "replay")->passed);
        restore();
    }

    SUBCASE("a wrong seed in the manifest") {
        Manifest edited = m;
        edited.seed += 1;
        const ValidationReport rep = validate_outputs(edited, out);
        CHECK_FALSE(find_check(rep, "config-match")->passed);
    }

    SUBCASE("a background pixel edited in a composite") {
        const PairRecord& p = r.pairs[0];
        Image8 comp = load_rgb8(out / p.composite_path);
        const Image8 mask8 = load_gray8(out / p.mask_path);
        bool done = false;
        for (int y = 0; y < comp.height && !done; ++y)
            for (int x = 0; x < comp.width && !done; ++x)
                if (mask8.at(x, y, 0) == 0) {
                    comp.at(x, y, 0) = comp.at(x, y, 0) ^ 0x40;
                    done = true;
                }
        REQUIRE(done);
        save_png(out / p.composite_path, comp);
        const ValidationReport rep = validate_outputs(m, out);
        CHECK_FALSE(find_check(rep, "background-immutability")->passed);
    }

    SUBCASE("a repainted ground truth") {
        const PairRecord& p = r.pairs[9];
        Image8 gt = load_rgb8(out / p.real_path);
        gt.at(3, 3, 1) = gt.at(3, 3, 1) ^ 0x20;
        save_png(out / p.real_path, gt);
        const ValidationReport rep = validate_outputs(m, out);
        CHECK_FALSE(find_check(rep, "ground-truth-identity")->passed);
    }

    SUBCASE("a gray pixel in a mask") {
        const PairRecord& p = r.pairs[0];
        Image8 mask8 = load_gray8(out / p.mask_path);
        mask8.at(0, 0, 0) = 128;
        save_png(out / p.mask_path, mask8);
        const ValidationReport rep = validate_outputs(m, out);
        CHECK_FALSE(find_check(rep, "mask-validity")->passed);
    }
}

TEST_CASE("identical seeds rebuild identical pair plans") {
    TempDir tmp;
    const Manifest m = load_manifest(make_toy_dataset(tmp.path, toy_spec()));

    BuildOptions opts;
    opts.dry_run = true;
    const BuildResult a = build_dataset(m, tmp.path / "o1", opts);
    const BuildResult b = build_dataset(m, tmp.path / "o2", opts);
    REQUIRE(a.total_pairs() == b.total_pairs());
    for (int i = 0; i < a.total_pairs(); ++i) {
        CHECK(a.pairs[i].source_id == b.pairs[i].source_id);
        CHECK(a.pairs[i].fg_index == b.pairs[i].fg_index);
        CHECK(a.pairs[i].reference_id == b.pairs[i].reference_id);
    }

    Manifest reseeded = m;
    reseeded.seed = m.seed + 1;
    const BuildResult c = build_dataset(reseeded, tmp.path / "o3", opts);
    bool any_diff = false;
    for (int i = 0; i < a.total_pairs() && !any_diff; ++i)
        any_diff = a.pairs[i].reference_id != c.pairs[i].reference_id;
    CHECK(any_diff);
}
