// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the cctransfer Project.

#include "cctransfer/fitting.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

namespace cct {

namespace {

Eigen::MatrixXd feature_matrix(const PatchSet& patches, const FeatureSpec& spec) {
    Eigen::MatrixXd phi(kPatchCount, spec.term_count());
    for (int i = 0; i < kPatchCount; ++i)
        phi.row(i) = expand_features(patches[i], spec).transpose();
    return phi;
}

Eigen::MatrixXd target_matrix(const PatchSet& patches) {
    Eigen::MatrixXd t(kPatchCount, 3);
    for (int i = 0; i < kPatchCount; ++i)
        t.row(i) << patches[i].r, patches[i].g, patches[i].b;
    return t;
}

} // namespace

ColorTransform fit_transform(const PatchSet& source, const PatchSet& target,
                             const FeatureSpec& spec, double ridge) {
    spec.validate();
    if (!(ridge >= 0.0))
        throw Error("fit_transform: ridge must be non-negative");

    const Eigen::MatrixXd phi = feature_matrix(source, spec);
    const Eigen::MatrixXd t = target_matrix(target);

    Eigen::MatrixXd gram = phi.transpose() * phi;
    gram.diagonal().array() += ridge;

    // Condition estimate on the symmetric Gram matrix; k <= 10 so the
    // eigendecomposition is trivial.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12)
        throw SingularSystem(
            "fit_transform: regularized normal equations are singular "
            "(degenerate patch data)");

    const Eigen::MatrixXd mt =
        gram.ldlt().solve(phi.transpose() * t); // k x 3
    ColorTransform out;
    out.spec = spec;
    out.matrix = mt.transpose();
    return out;
}

TransformPair fit_pair(const PatchSet& canonical, const PatchSet& image_patches,
                       const FeatureSpec& spec, double ridge) {
    return {fit_transform(image_patches, canonical, spec, ridge),
            fit_transform(canonical, image_patches, spec, ridge)};
}

double fit_residual(const ColorTransform& t, const PatchSet& source,
                    const PatchSet& target) {
    double sum = 0.0;
    for (int i = 0; i < kPatchCount; ++i) {
        const Eigen::Vector3d pred =
            t.matrix * expand_features(source[i], t.spec);
        const Eigen::Vector3d ref(target[i].r, target[i].g, target[i].b);
        sum += (pred - ref).squaredNorm();
    }
    return std::sqrt(sum / (kPatchCount * 3));
}

namespace {

std::string matrix_text(const ColorTransform& t) {
    std::ostringstream os;
    os.precision(17);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < t.matrix.cols(); ++c) {
            if (c)
                os << ' ';
            os << t.matrix(r, c);
        }
        os << '\n';
    }
    return os.str();
}

std::uint64_t fnv1a64(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::string transform_fingerprint(const ColorTransform& t) {
    std::ostringstream key;
    key << t.spec.degree << '|' << t.spec.include_bias << '|' << matrix_text(t);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(key.str())));
    return buf;
}

void save_transform_cache(const std::filesystem::path& path,
                          const std::string& image_id, const TransformPair& pair,
                          double ridge) {
    std::ofstream out(path);
    if (!out)
        throw Error("transform cache: cannot write " + path.string());
    out.precision(17);
    out << "image_id " << image_id << '\n';
    out << "degree " << pair.forward.spec.degree << '\n';
    out << "bias " << (pair.forward.spec.include_bias ? 1 : 0) << '\n';
    out << "ridge " << ridge << '\n';
    out << "forward " << transform_fingerprint(pair.forward) << '\n'
        << matrix_text(pair.forward);
    out << "inverse " << transform_fingerprint(pair.inverse) << '\n'
        << matrix_text(pair.inverse);
}

std::optional<TransformPair> load_transform_cache(
    const std::filesystem::path& path, const std::string& image_id,
    const FeatureSpec& spec, double ridge) {
    std::ifstream in(path);
    if (!in)
        return std::nullopt;

    std::string word, id;
    int degree = 0, bias = 0;
    double file_ridge = -1.0;
    if (!(in >> word >> id) || word != "image_id" || id != image_id)
        return std::nullopt;
    if (!(in >> word >> degree) || word != "degree")
        return std::nullopt;
    if (!(in >> word >> bias) || word != "bias")
        return std::nullopt;
    if (!(in >> word >> file_ridge) || word != "ridge")
        return std::nullopt;
    if (degree != spec.degree || (bias != 0) != spec.include_bias ||
        file_ridge != ridge)
        return std::nullopt;

    auto read_matrix = [&](const char* tag) -> std::optional<ColorTransform> {
        std::string fingerprint;
        if (!(in >> word >> fingerprint) || word != tag)
            return std::nullopt;
        ColorTransform t;
        t.spec = spec;
        t.matrix.resize(3, spec.term_count());
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < spec.term_count(); ++c)
                if (!(in >> t.matrix(r, c)))
                    return std::nullopt;
        if (transform_fingerprint(t) != fingerprint)
            return std::nullopt; // stale or corrupted entry
        return t;
    };

    auto fwd = read_matrix("forward");
    if (!fwd)
        return std::nullopt;
    auto inv = read_matrix("inverse");
    if (!inv)
        return std::nullopt;
    return TransformPair{*fwd, *inv};
}

} // namespace cct
