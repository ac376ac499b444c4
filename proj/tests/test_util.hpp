// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "eigengs/color.hpp"
#include "eigengs/eigenbasis.hpp"
#include "eigengs/synthetic.hpp"

namespace eigengs::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("eigengs_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Small synthetic corpus converted to `space`.
inline ImageCorpus toy_corpus(int size, std::size_t count, std::uint64_t seed, ColorSpace space = ColorSpace::YCbCr) {
    SyntheticSpec spec;
    spec.width = size;
    spec.height = size;
    ImageCorpus corpus;
    for (auto& img : synthetic_images(spec, count, seed)) corpus.images.push_back(from_rgb(img, space));
    return corpus;
}

inline Eigenbasis toy_basis(int size, int k, std::size_t count = 24, std::uint64_t seed = 5) {
    return fit_basis(toy_corpus(size, count, seed), k);
}

} // namespace eigengs::testing
