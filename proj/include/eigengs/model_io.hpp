// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "eigengs/eigenbasis.hpp"
#include "eigengs/gaussian.hpp"

namespace eigengs {

inline constexpr std::uint32_t kEgs1Version = 1;

/// Basis and eigen-model bundled together, as stored in an .egs1 file.
struct EigenGSModel {
    Eigenbasis basis;
    EigenGaussianModel gaussians;
};

/// EGS1 layout, all little-endian:
///   "EGS1" | u32 version | u32 w, h, C, k, N, n_low, k_low | u8 space
///   | f32 mean[d] | f32 components[k*d] | f64 eigenvalues[k]
///   | f32 pos_raw[N*2] | f32 fac_raw[N*3] | f32 weights[N*k*C]
///   | u32 crc32 of everything before it
std::vector<std::uint8_t> encode_egs1(const EigenGSModel& model);
EigenGSModel decode_egs1(std::span<const std::uint8_t> bytes);

void save_model(const std::filesystem::path& path, const EigenGSModel& model);
EigenGSModel load_model(const std::filesystem::path& path);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

} // namespace eigengs
