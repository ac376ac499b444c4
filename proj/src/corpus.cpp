// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/corpus.hpp"

#include <algorithm>
#include <iostream>
#include <optional>

#include "eigengs/color.hpp"
#include "eigengs/error.hpp"
#include "eigengs/image_io.hpp"
#include "eigengs/parallel.hpp"

namespace eigengs {

void ImageCorpus::validate() const {
    if (images.empty()) {
        throw Error(ErrorKind::CorpusEmpty, "corpus has no images");
    }
    for (const auto& img : images) {
        if (!img.compatible(images.front())) {
            throw Error(ErrorKind::ShapeError, "corpus images differ in shape or color space");
        }
    }
}

PlanarImage prepare_image(const PlanarImage& rgb, int width, int height, ColorSpace space) {
    return from_rgb(resize_bilinear(rgb, width, height), space);
}

ImageCorpus load_corpus(const std::filesystem::path& dir, int width, int height, ColorSpace space) {
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            auto ext = entry.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
            if (ext == ".png") files.push_back(entry.path());
        }
    } else {
        throw Error(ErrorKind::IoError, dir.string() + " is not a directory");
    }
    if (files.empty()) {
        throw Error(ErrorKind::CorpusEmpty, "no PNG files in " + dir.string());
    }
    std::sort(files.begin(), files.end());

    std::vector<std::optional<PlanarImage>> decoded(files.size());
    std::vector<std::string> failures(files.size());
    parallel_for(files.size(), [&](std::size_t i) {
        try {
            decoded[i] = prepare_image(read_png(files[i]), width, height, space);
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });

    ImageCorpus corpus;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (decoded[i]) {
            corpus.images.push_back(std::move(*decoded[i]));
        } else {
            std::cerr << "warning: skipping " << files[i].string() << " (" << failures[i] << ")\n";
        }
    }
    if (corpus.count() < 2) {
        throw Error(ErrorKind::CorpusEmpty,
                    "need at least 2 decodable images in " + dir.string() + ", found " +
                        std::to_string(corpus.count()));
    }
    return corpus;
}

} // namespace eigengs
