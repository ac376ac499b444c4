// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace eigengs {

struct AdamState {
    std::vector<double> m1;
    std::vector<double> m2;
    std::int64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    explicit AdamState(std::size_t size = 0) : m1(size, 0.0), m2(size, 0.0) {}
    std::size_t size() const { return m1.size(); }
};

/// One bias-corrected Adam update. The caller advances `state.t` once per
/// iteration via begin_step() so several parameter groups share a clock.
void adam_update(std::span<float> params, std::span<const float> grads, AdamState& state, double lr);

/// Convenience for a single group: increments t then updates.
void adam_step(std::span<float> params, std::span<const float> grads, AdamState& state, double lr);

} // namespace eigengs
