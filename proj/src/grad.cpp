// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/grad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eigengs/error.hpp"
#include "raster.hpp"

namespace eigengs {

namespace {

std::vector<float> to_float(const std::vector<double>& v) {
    std::vector<float> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return static_cast<float>(x); });
    return out;
}

void zero_gaussians(GradBuffers& g, std::size_t begin, std::size_t end, std::size_t weights_per_gaussian) {
    std::fill(g.d_pos_raw.begin() + 2 * begin, g.d_pos_raw.begin() + 2 * end, 0.0f);
    std::fill(g.d_fac_raw.begin() + 3 * begin, g.d_fac_raw.begin() + 3 * end, 0.0f);
    std::fill(g.d_weights.begin() + weights_per_gaussian * begin, g.d_weights.begin() + weights_per_gaussian * end,
              0.0f);
}

bool finite(const std::vector<float>& v) {
    return std::all_of(v.begin(), v.end(), [](float x) { return std::isfinite(x); });
}

} // namespace

bool GradBuffers::all_finite() const { return finite(d_pos_raw) && finite(d_fac_raw) && finite(d_weights); }

LossAndGrad backward_components(const EigenGaussianModel& model, const std::vector<PlanarImage>& targets,
                                Freeze freeze, ComponentSubset subset, const RenderOptions& options) {
    const BasisShape& shape = model.shape;
    if (targets.size() != static_cast<std::size_t>(shape.k)) {
        throw Error(ErrorKind::ShapeError, "expected " + std::to_string(shape.k) + " target components, got " +
                                               std::to_string(targets.size()));
    }
    const ImageShape expected{shape.width, shape.height, shape.channels};
    for (const auto& t : targets) {
        if (!(t.shape() == expected)) {
            throw Error(ErrorKind::ShapeError, "target component shape does not match the model");
        }
    }

    const std::size_t N = model.count();
    const std::size_t F = model.features();
    const int C = shape.channels;
    LossAndGrad result;
    result.grads.d_pos_raw.assign(N * 2, 0.0f);
    result.grads.d_fac_raw.assign(N * 3, 0.0f);
    result.grads.d_weights.assign(N * F, 0.0f);

    const auto [g0, g1] = model.gaussian_range(subset);
    const auto [j0, j1] = model.component_range(subset);
    const std::size_t nf = static_cast<std::size_t>(j1 - j0) * C;
    if (nf == 0) return result;

    const std::size_t pixels = static_cast<std::size_t>(shape.width) * shape.height;
    const auto splats = detail::make_splats(model.geometry, shape.width, shape.height, options.sigma_cut);
    const auto grid = detail::bin_splats(splats, g0, g1, shape.width, shape.height, options.tile_size);
    const detail::FeatureView view{model.weights.data(), F, static_cast<std::size_t>(j0) * C, nf};

    std::vector<double> residual(pixels * nf, 0.0);
    detail::rasterize(splats, grid, view, shape.width, shape.height, options.sigma_cut, residual.data());

    // Residuals are taken against the f32 render, the same values
    // render_components() returns, so a target equal to it gives zero loss.
    const double norm = 1.0 / static_cast<double>(pixels * nf);
    double loss = 0.0;
    for (int j = j0; j < j1; ++j) {
        auto target = targets[j].data();
        const std::size_t base = static_cast<std::size_t>(j - j0) * C;
        for (std::size_t p = 0; p < pixels; ++p) {
            for (int c = 0; c < C; ++c) {
                double& r = residual[p * nf + base + c];
                r = static_cast<float>(r) - static_cast<double>(target[p * C + c]);
                loss += r * r;
                r *= 2.0 * norm;
            }
        }
    }
    result.loss = loss * norm;

    const auto sg = detail::rasterize_backward(splats, grid, view, shape.width, shape.height, options.sigma_cut,
                                               residual.data());
    result.grads.d_pos_raw = to_float(sg.pos);
    result.grads.d_fac_raw = to_float(sg.fac);
    result.grads.d_weights = to_float(sg.weights);

    if (model.frequency_split()) {
        for (std::size_t n = 0; n < N; ++n) {
            for (int j = 0; j < shape.k; ++j) {
                if (!model.is_cross_pair(n, j)) continue;
                for (int c = 0; c < C; ++c) result.grads.d_weights[(n * shape.k + j) * C + c] = 0.0f;
            }
        }
    }
    const std::size_t low = static_cast<std::size_t>(model.low_count);
    if (freeze == Freeze::FreezeLow) zero_gaussians(result.grads, 0, low, F);
    if (freeze == Freeze::FreezeHigh) zero_gaussians(result.grads, low, N, F);
    return result;
}

LossAndGrad backward_image(const ImageGaussianSet& set, const PlanarImage& target, const RenderOptions& options) {
    const PlanarImage& mean = set.mean_ref;
    if (!(target.shape() == mean.shape())) {
        throw Error(ErrorKind::ShapeError, "target shape does not match the image set");
    }
    const std::size_t C = static_cast<std::size_t>(mean.channels());
    auto mean_px = mean.data();
    std::vector<double> residual(mean_px.begin(), mean_px.end());

    const auto splats = detail::make_splats(set.geometry, mean.width(), mean.height(), options.sigma_cut);
    const auto grid = detail::bin_splats(splats, 0, splats.size(), mean.width(), mean.height(), options.tile_size);
    const detail::FeatureView view{set.weights.data(), C, 0, C};
    detail::rasterize(splats, grid, view, mean.width(), mean.height(), options.sigma_cut, residual.data());

    const double norm = 1.0 / static_cast<double>(residual.size());
    auto t = target.data();
    double loss = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        double& r = residual[i];
        r = static_cast<float>(r) - static_cast<double>(t[i]);
        loss += r * r;
        r *= 2.0 * norm;
    }

    const auto sg =
        detail::rasterize_backward(splats, grid, view, mean.width(), mean.height(), options.sigma_cut, residual.data());
    LossAndGrad result;
    result.loss = loss * norm;
    result.grads.d_pos_raw = to_float(sg.pos);
    result.grads.d_fac_raw = to_float(sg.fac);
    result.grads.d_weights = to_float(sg.weights);
    return result;
}

// ---------------------------------------------------------------------------

std::vector<float> flatten(const GradBuffers& grads) {
    std::vector<float> out;
    out.reserve(grads.d_pos_raw.size() + grads.d_fac_raw.size() + grads.d_weights.size());
    out.insert(out.end(), grads.d_pos_raw.begin(), grads.d_pos_raw.end());
    out.insert(out.end(), grads.d_fac_raw.begin(), grads.d_fac_raw.end());
    out.insert(out.end(), grads.d_weights.begin(), grads.d_weights.end());
    return out;
}

std::string FdReport::summary() const {
    std::ostringstream s;
    s << "checked=" << checked << " max_abs=" << max_abs_err << " max_rel=" << max_rel_err
      << " failures=" << failures.size();
    for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 5); ++i) {
        const auto& f = failures[i];
        s << "\n  [" << f.index << "] analytic=" << f.analytic << " numeric=" << f.numeric;
    }
    return s.str();
}

FdReport fd_check(const FdProblem& problem, std::span<const float> analytic, const FdTolerance& tol) {
    if (analytic.size() != problem.params.size()) {
        throw Error(ErrorKind::ShapeError, "gradient length does not match the parameter count");
    }
    FdReport report;
    std::vector<float> params = problem.params;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!problem.skip.empty() && problem.skip[i]) continue;
        const float base = params[i];
        const float plus = static_cast<float>(base + tol.epsilon);
        const float minus = static_cast<float>(base - tol.epsilon);
        params[i] = plus;
        const double lp = problem.loss(params);
        params[i] = minus;
        const double lm = problem.loss(params);
        params[i] = base;

        FdEntry e;
        e.index = i;
        e.analytic = analytic[i];
        e.numeric = (lp - lm) / (static_cast<double>(plus) - static_cast<double>(minus));
        e.abs_err = std::abs(e.analytic - e.numeric);
        const double scale = std::max(std::abs(e.analytic), std::abs(e.numeric));
        e.rel_err = scale > 0.0 ? e.abs_err / scale : 0.0;
        ++report.checked;
        report.max_abs_err = std::max(report.max_abs_err, e.abs_err);
        report.max_rel_err = std::max(report.max_rel_err, e.rel_err);
        if (e.rel_err > tol.rel && e.abs_err > tol.abs) report.failures.push_back(e);
    }
    return report;
}

namespace {

struct DirectGeometry {
    double mx, my, l00, l10, l11;
};

DirectGeometry direct_geometry(std::span<const float> pos, std::span<const float> fac, std::size_t n, int width,
                               int height) {
    const double sx = 1.0 / (1.0 + std::exp(-static_cast<double>(pos[2 * n])));
    const double sy = 1.0 / (1.0 + std::exp(-static_cast<double>(pos[2 * n + 1])));
    return {sx * width, sy * height, std::exp(static_cast<double>(fac[3 * n])), static_cast<double>(fac[3 * n + 1]),
            std::exp(static_cast<double>(fac[3 * n + 2]))};
}

double direct_sigma(const DirectGeometry& g, int x, int y) {
    const double dx = x + 0.5 - g.mx;
    const double dy = y + 0.5 - g.my;
    const double u0 = g.l00 * dx + g.l10 * dy;
    const double u1 = g.l11 * dy;
    return 0.5 * (u0 * u0 + u1 * u1);
}

// gate[n * pixels + p] is true where Gaussian n is inside the cutoff.
std::vector<bool> gate_mask(std::span<const float> pos, std::span<const float> fac, std::size_t count, int width,
                            int height, double sigma_cut) {
    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    std::vector<bool> gate(count * pixels);
    for (std::size_t n = 0; n < count; ++n) {
        const auto g = direct_geometry(pos, fac, n, width, height);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                gate[n * pixels + static_cast<std::size_t>(y) * width + x] = direct_sigma(g, x, y) <= sigma_cut;
            }
        }
    }
    return gate;
}

// Direct double-precision sum over every (pixel, Gaussian) pair in the
// mask. offsets (optional) seeds each pixel with the mean image.
double direct_mse(std::span<const float> params, std::size_t count, std::size_t stride, std::size_t f_begin,
                  std::size_t f_end, int width, int height, const std::vector<bool>& gate,
                  const std::function<double(std::size_t p, std::size_t f)>& target,
                  const std::function<double(std::size_t p, std::size_t f)>& offset) {
    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    const auto pos = params.subspan(0, count * 2);
    const auto fac = params.subspan(count * 2, count * 3);
    const auto weights = params.subspan(count * 5);
    std::vector<DirectGeometry> geo(count);
    for (std::size_t n = 0; n < count; ++n) geo[n] = direct_geometry(pos, fac, n, width, height);

    double sum = 0.0;
    std::vector<double> value(f_end - f_begin);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * width + x;
            for (std::size_t f = f_begin; f < f_end; ++f) value[f - f_begin] = offset ? offset(p, f) : 0.0;
            for (std::size_t n = 0; n < count; ++n) {
                if (!gate[n * pixels + p]) continue;
                const double g = std::exp(-direct_sigma(geo[n], x, y));
                for (std::size_t f = f_begin; f < f_end; ++f) value[f - f_begin] += weights[n * stride + f] * g;
            }
            for (std::size_t f = f_begin; f < f_end; ++f) {
                const double r = value[f - f_begin] - target(p, f);
                sum += r * r;
            }
        }
    }
    return sum / static_cast<double>(pixels * (f_end - f_begin));
}

std::vector<float> concat(const GaussianGeometry& geometry, const std::vector<float>& weights) {
    std::vector<float> params;
    params.insert(params.end(), geometry.pos_raw.begin(), geometry.pos_raw.end());
    params.insert(params.end(), geometry.fac_raw.begin(), geometry.fac_raw.end());
    params.insert(params.end(), weights.begin(), weights.end());
    return params;
}

} // namespace

FdProblem make_fd_problem(const EigenGaussianModel& model, const std::vector<PlanarImage>& targets,
                          ComponentSubset subset, const RenderOptions& options) {
    const BasisShape shape = model.shape;
    const std::size_t count = model.count();
    const std::size_t stride = model.features();
    const auto [j0, j1] = model.component_range(subset);
    const std::size_t f_begin = static_cast<std::size_t>(j0) * shape.channels;
    const std::size_t f_end = static_cast<std::size_t>(j1) * shape.channels;

    FdProblem problem;
    problem.params = concat(model.geometry, model.weights);
    auto gate = gate_mask(model.geometry.pos_raw, model.geometry.fac_raw, count, shape.width, shape.height,
                          options.sigma_cut);

    // Copy targets so the problem owns everything it needs.
    std::vector<std::vector<float>> target_data;
    for (const auto& t : targets) target_data.emplace_back(t.data().begin(), t.data().end());
    const int C = shape.channels;
    problem.loss = [=](std::span<const float> params) {
        auto target = [&](std::size_t p, std::size_t f) {
            return static_cast<double>(target_data[f / C][p * C + f % C]);
        };
        return direct_mse(params, count, stride, f_begin, f_end, shape.width, shape.height, gate, target, {});
    };

    if (model.frequency_split()) {
        problem.skip.assign(problem.params.size(), false);
        for (std::size_t n = 0; n < count; ++n) {
            for (int j = 0; j < shape.k; ++j) {
                if (!model.is_cross_pair(n, j)) continue;
                for (int c = 0; c < C; ++c) problem.skip[count * 5 + (n * shape.k + j) * C + c] = true;
            }
        }
    }
    return problem;
}

FdProblem make_fd_problem(const ImageGaussianSet& set, const PlanarImage& target, const RenderOptions& options) {
    const PlanarImage& mean = set.mean_ref;
    const std::size_t count = set.count();
    const std::size_t C = static_cast<std::size_t>(mean.channels());
    const int width = mean.width();
    const int height = mean.height();

    FdProblem problem;
    problem.params = concat(set.geometry, set.weights);
    auto gate = gate_mask(set.geometry.pos_raw, set.geometry.fac_raw, count, width, height, options.sigma_cut);
    std::vector<float> target_data(target.data().begin(), target.data().end());
    std::vector<float> mean_data(mean.data().begin(), mean.data().end());
    problem.loss = [=](std::span<const float> params) {
        auto tgt = [&](std::size_t p, std::size_t f) { return static_cast<double>(target_data[p * C + f]); };
        auto off = [&](std::size_t p, std::size_t f) { return static_cast<double>(mean_data[p * C + f]); };
        return direct_mse(params, count, C, 0, C, width, height, gate, tgt, off);
    };
    return problem;
}

} // namespace eigengs
