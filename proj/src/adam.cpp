// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/adam.hpp"

#include <cmath>

#include "eigengs/error.hpp"

namespace eigengs {

void adam_update(std::span<float> params, std::span<const float> grads, AdamState& state, double lr) {
    if (params.size() != grads.size() || params.size() != state.size()) {
        throw Error(ErrorKind::ShapeError, "adam: parameter, gradient and state sizes differ");
    }
    if (state.t < 1) {
        throw Error(ErrorKind::ConfigError, "adam: step counter must be advanced before updating");
    }
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        double& m = state.m1[i];
        double& v = state.m2[i];
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g * g;
        const double m_hat = m / bc1;
        const double v_hat = v / bc2;
        params[i] = static_cast<float>(params[i] - lr * m_hat / (std::sqrt(v_hat) + state.eps));
    }
}

void adam_step(std::span<float> params, std::span<const float> grads, AdamState& state, double lr) {
    ++state.t;
    adam_update(params, grads, state, lr);
}

} // namespace eigengs
