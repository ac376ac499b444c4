// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eigengs/gaussian.hpp"
#include "eigengs/image.hpp"
#include "eigengs/render.hpp"

namespace eigengs {

struct GradBuffers {
    std::vector<float> d_pos_raw;
    std::vector<float> d_fac_raw;
    std::vector<float> d_weights;

    bool all_finite() const;
};

enum class Freeze { None, FreezeLow, FreezeHigh };

struct LossAndGrad {
    double loss = 0.0;
    GradBuffers grads;
};

/// MSE between the rendered components and `targets`, averaged over the
/// components of `subset`, pixels and channels, with exact gradients through
/// the logistic center map and the exponential factor diagonal. The cutoff
/// gate is hard: no gradient flows from pixels beyond it. Cross-pair weight
/// gradients are always zero; a freeze zeroes the chosen partition.
LossAndGrad backward_components(const EigenGaussianModel& model,
                                const std::vector<PlanarImage>& targets,
                                Freeze freeze = Freeze::None,
                                ComponentSubset subset = ComponentSubset::All,
                                const RenderOptions& options = {});

/// MSE between render_image(set) and target, with gradients for geometry and
/// the per-channel weights.
LossAndGrad backward_image(const ImageGaussianSet& set, const PlanarImage& target,
                           const RenderOptions& options = {});

// ---------------------------------------------------------------------------
// Finite-difference gradient checking.

/// Flat view of every raw parameter of a problem, in the same order as
/// the flattened GradBuffers: pos_raw, fac_raw, weights.
struct FdProblem {
    std::vector<float> params;
    /// Loss at `params`.
    std::function<double(std::span<const float>)> loss;
    /// Entries held structurally constant (cross-pair weights); empty means
    /// every entry is checked.
    std::vector<bool> skip;
};

struct FdTolerance {
    double epsilon = 1e-3;
    double rel = 1e-3;
    double abs = 1e-6;
};

struct FdEntry {
    std::size_t index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
};

struct FdReport {
    std::size_t checked = 0;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    std::vector<FdEntry> failures;

    bool passed() const { return failures.empty(); }
    std::string summary() const;
};

/// Central differences on every parameter of `problem`, compared entry by
/// entry against `analytic`. An entry fails when both its relative and its
/// absolute deviation exceed tolerance. The actual float step taken is used
/// as the denominator.
FdReport fd_check(const FdProblem& problem, std::span<const float> analytic, const FdTolerance& tol = {});

/// Concatenation of pos, fac and weight gradients.
std::vector<float> flatten(const GradBuffers& grads);

/// Problem over a component model's parameters. The loss is evaluated by a
/// direct per-pixel double-precision sum (no tiling), with each Gaussian's
/// cutoff gate pinned to the pixels it covers at the base parameters, so
/// the derivative is taken on the smooth branch the analytic pass sees.
FdProblem make_fd_problem(const EigenGaussianModel& model, const std::vector<PlanarImage>& targets,
                          ComponentSubset subset = ComponentSubset::All, const RenderOptions& options = {});
FdProblem make_fd_problem(const ImageGaussianSet& set, const PlanarImage& target,
                          const RenderOptions& options = {});

} // namespace eigengs
