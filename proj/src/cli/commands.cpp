// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/cli.hpp"

#include <fnmatch.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>

#include "eigengs/color.hpp"
#include "eigengs/corpus.hpp"
#include "eigengs/eigenbasis.hpp"
#include "eigengs/error.hpp"
#include "eigengs/image_io.hpp"
#include "eigengs/model_io.hpp"
#include "eigengs/parallel.hpp"
#include "eigengs/render.hpp"
#include "eigengs/report.hpp"
#include "eigengs/synthetic.hpp"
#include "eigengs/train.hpp"
#include "eigengs/transform.hpp"

namespace eigengs::cli {

namespace fs = std::filesystem;

namespace {

struct TrainBasisArgs {
    std::string dir;
    int width = 64;
    int height = 64;
    int components = 30;
    int gaussians = 1000;
    double low_frac = 0.10;
    int k_low = 0;
    int iters1 = 1000;
    int iters2 = 1000;
    std::uint64_t seed = 0;
    std::string space = "ycbcr";
    bool no_freq = false;
    std::string out;
    std::string report;
    int eval_every = 50;
    LearningRates lr;
};

struct FitArgs {
    std::string model;
    std::vector<std::string> images;
    int iters = 1000;
    int eval_every = 50;
    std::string out_dir = ".";
    std::string save_iters = "0,10,100,1000";
    LearningRates lr;
};

struct EvalArgs {
    std::vector<std::string> reports;
    double threshold_db = 35.0;
    std::string svg_out;
    std::string title = "PSNR vs iteration";
};

struct RadiiArgs {
    std::string model;
    int bins = 20;
    double range_max = 0.0;
    std::string out;
};

struct SynthArgs {
    std::string out_dir;
    int count = 20;
    int width = 64;
    int height = 64;
    std::uint64_t seed = 0;
};

void add_lr_flags(CLI::App* cmd, LearningRates& lr) {
    cmd->add_option("--lr-pos", lr.pos, "Adam step size for center parameters")->check(CLI::PositiveNumber);
    cmd->add_option("--lr-fac", lr.fac, "Adam step size for covariance factors")->check(CLI::PositiveNumber);
    cmd->add_option("--lr-weight", lr.weight, "Adam step size for weights")->check(CLI::PositiveNumber);
}

int cmd_train_basis(const TrainBasisArgs& a, std::ostream& out) {
    const ColorSpace space = parse_color_space(a.space);
    const ImageCorpus corpus = load_corpus(a.dir, a.width, a.height, space);
    out << "loaded " << corpus.count() << " images (" << a.width << "x" << a.height << ", " << to_string(space)
        << ")\n";
    Eigenbasis basis = fit_basis(corpus, a.components);

    TrainConfig cfg;
    cfg.n_gaussians = a.gaussians;
    cfg.freq_learning = !a.no_freq;
    cfg.low_fraction = a.low_frac;
    cfg.k_low = a.k_low;
    cfg.phase1_iters = a.iters1;
    cfg.phase2_iters = a.iters2;
    cfg.seed = a.seed;
    cfg.eval_every = a.eval_every;
    cfg.lr = a.lr;
    EigenFitResult fit = fit_eigenbasis(basis, cfg);

    EigenGSModel model{std::move(basis), std::move(fit.model)};
    save_model(a.out, model);
    const fs::path report = a.report.empty() ? fs::path(a.out).replace_extension(".train.csv") : fs::path(a.report);
    write_report_csv(report, fit.report);
    const FitRow& last = fit.report.rows.back();
    out << "wrote " << a.out << " and " << report.string() << " (component MSE " << last.loss << ", "
        << last.psnr_db << " dB)\n";
    return kOk;
}

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
    const EigenGSModel model = load_model(a.model);
    const std::vector<int> save = parse_iteration_list(a.save_iters);
    fs::create_directories(a.out_dir);

    FinetuneConfig cfg;
    cfg.iters = a.iters;
    cfg.eval_every = a.eval_every;
    cfg.lr = a.lr;

    const ImageShape& shape = model.basis.shape();
    std::vector<std::string> errors(a.images.size());
    std::vector<std::string> summaries(a.images.size());
    parallel_for(a.images.size(), [&](std::size_t i) {
        const fs::path path = a.images[i];
        try {
            const PlanarImage rgb = read_png(path);
            if (model.basis.space() == ColorSpace::Linear && shape.channels != 1) {
                throw Error(ErrorKind::ShapeError, "model channel layout is inconsistent");
            }
            const PlanarImage target = prepare_image(rgb, shape.width, shape.height, model.basis.space());
            const ImageGaussianSet init = init_for_image(model.gaussians, model.basis, target);
            const std::string stem = path.stem().string();
            auto observer = [&](int it, const ImageGaussianSet& set) {
                const bool requested = std::binary_search(save.begin(), save.end(), it);
                const bool final_only = it == cfg.iters && !requested;
                if (requested) {
                    write_png(fs::path(a.out_dir) / (stem + "_iter" + std::to_string(it) + ".png"), render_image(set));
                } else if (final_only) {
                    write_png(fs::path(a.out_dir) / (stem + "_final.png"), render_image(set));
                }
            };
            const FinetuneResult result = finetune_image(init, target, cfg, observer);
            write_report_csv(fs::path(a.out_dir) / (stem + ".csv"), result.report);
            std::ostringstream s;
            s << stem << ": psnr " << result.report.rows.front().psnr_db << " -> " << result.report.rows.back().psnr_db
              << " dB";
            summaries[i] = s.str();
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    int failed = 0;
    for (std::size_t i = 0; i < a.images.size(); ++i) {
        if (!errors[i].empty()) {
            ++failed;
            err << "error: " << a.images[i] << ": " << errors[i] << '\n';
        } else {
            out << summaries[i] << '\n';
        }
    }
    return failed == 0 ? kOk : kFailure;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
    const fs::path p(pattern);
    if (pattern.find_first_of("*?[") == std::string::npos) {
        return fs::exists(p) ? std::vector<fs::path>{p} : std::vector<fs::path>{};
    }
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    const std::string name = p.filename().string();
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && fnmatch(name.c_str(), entry.path().filename().c_str(), 0) == 0) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    std::set<fs::path> files;
    for (const auto& pattern : a.reports) {
        for (auto& f : expand_glob(pattern)) files.insert(f);
    }
    if (files.empty()) {
        err << "error: no reports match\n";
        return kUsage;
    }
    std::vector<FitReport> reports;
    for (const auto& f : files) reports.push_back(read_report_csv(f));
    const auto summary = aggregate_reports(reports, a.threshold_db);
    out << reports.size() << " reports\n";
    write_summary_table(out, summary, a.threshold_db);
    if (!a.svg_out.empty()) {
        std::ofstream svg(a.svg_out);
        if (!svg) throw Error(ErrorKind::IoError, "cannot write " + a.svg_out);
        svg << psnr_curve_svg(summary, a.title);
    }
    return kOk;
}

int cmd_radii(const RadiiArgs& a, std::ostream& out) {
    const EigenGSModel model = load_model(a.model);
    const auto bins = radius_histogram(model.gaussians, a.bins, a.range_max);
    std::ofstream file;
    std::ostream* dst = &out;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw Error(ErrorKind::IoError, "cannot write " + a.out);
        dst = &file;
    }
    *dst << "partition,bin_lo,bin_hi,count\n";
    for (const auto& b : bins) *dst << b.partition << ',' << b.lo << ',' << b.hi << ',' << b.count << '\n';
    return kOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    fs::create_directories(a.out_dir);
    SyntheticSpec spec;
    spec.width = a.width;
    spec.height = a.height;
    const auto images = synthetic_images(spec, static_cast<std::size_t>(a.count), a.seed);
    for (std::size_t i = 0; i < images.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "synth_%05zu.png", i);
        write_png(fs::path(a.out_dir) / name, images[i]);
    }
    out << "wrote " << images.size() << " images to " << a.out_dir << '\n';
    return kOk;
}

} // namespace

std::vector<int> parse_iteration_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || v < 0) {
            throw Error(ErrorKind::ConfigError, "bad iteration '" + item + "'");
        }
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<HistogramBin> radius_histogram(const EigenGaussianModel& model, int bins, double range_max) {
    if (bins < 1) throw Error(ErrorKind::ConfigError, "bins must be positive");
    const auto radii = gaussian_radii(model.geometry);
    if (range_max <= 0.0) {
        range_max = radii.empty() ? 1.0 : *std::max_element(radii.begin(), radii.end());
        if (range_max <= 0.0) range_max = 1.0;
    }
    struct Part {
        std::string name;
        std::size_t begin, end;
    };
    std::vector<Part> parts;
    if (model.frequency_split()) {
        parts = {{"low", 0, static_cast<std::size_t>(model.low_count)},
                 {"high", static_cast<std::size_t>(model.low_count), radii.size()}};
    } else {
        parts = {{"all", 0, radii.size()}};
    }
    const double width = range_max / bins;
    std::vector<HistogramBin> out;
    for (const auto& part : parts) {
        std::vector<std::size_t> counts(bins, 0);
        for (std::size_t n = part.begin; n < part.end; ++n) {
            const double r = radii[n];
            if (r < 0.0 || r > range_max) continue;
            const int b = std::min(static_cast<int>(r / width), bins - 1);
            ++counts[b];
        }
        for (int b = 0; b < bins; ++b) out.push_back({part.name, b * width, (b + 1) * width, counts[b]});
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"EigenGS: eigenbasis Gaussian splatting for image representation"};
    app.require_subcommand(1);

    TrainBasisArgs tb;
    auto* train = app.add_subcommand("train-basis", "Fit a PCA basis and its shared Gaussian model");
    train->add_option("--dir", tb.dir, "Directory of training PNGs")->required()->check(CLI::ExistingDirectory);
    train->add_option("--width", tb.width, "Working width")->check(CLI::PositiveNumber);
    train->add_option("--height", tb.height, "Working height")->check(CLI::PositiveNumber);
    train->add_option("--components", tb.components, "Eigenimages to keep (k)")->check(CLI::PositiveNumber);
    train->add_option("--gaussians", tb.gaussians, "Number of Gaussians")->check(CLI::PositiveNumber);
    train->add_option("--low-frac", tb.low_frac, "Share of Gaussians in the low-frequency set")
        ->check(CLI::Range(0.0, 1.0));
    train->add_option("--k-low", tb.k_low, "Low-frequency components (default ceil(k/10))")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--iters1", tb.iters1, "Phase 1 iterations")->check(CLI::NonNegativeNumber);
    train->add_option("--iters2", tb.iters2, "Phase 2 iterations")->check(CLI::NonNegativeNumber);
    train->add_option("--seed", tb.seed, "Random seed");
    train->add_option("--space", tb.space, "Working color space")
        ->check(CLI::IsMember({"rgb", "ycbcr", "linear"}));
    train->add_flag("--no-freq-learning", tb.no_freq, "Train all Gaussians on all components in one phase");
    train->add_option("--out", tb.out, "Output .egs1 model")->required();
    train->add_option("--report", tb.report, "Training CSV (default <out>.train.csv)");
    train->add_option("--eval-every", tb.eval_every, "Report sampling interval")->check(CLI::PositiveNumber);
    add_lr_flags(train, tb.lr);

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Initialize and fine-tune Gaussians for new images");
    fit->add_option("--model", fa.model, "Trained .egs1 model")->required()->check(CLI::ExistingFile);
    fit->add_option("--image,--images", fa.images, "Input PNG(s)")->required();
    fit->add_option("--iters", fa.iters, "Fine-tuning iterations")->check(CLI::NonNegativeNumber);
    fit->add_option("--eval-every", fa.eval_every, "Report sampling interval")->check(CLI::PositiveNumber);
    fit->add_option("--out-dir", fa.out_dir, "Output directory");
    fit->add_option("--save-iters", fa.save_iters, "Iterations to save as PNG, comma separated");
    add_lr_flags(fit, fa.lr);

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Aggregate fitting reports");
    eval->add_option("--reports", ea.reports, "Report CSV paths or glob patterns")->required();
    eval->add_option("--threshold-db", ea.threshold_db, "PSNR threshold for the percentage column");
    eval->add_option("--svg-out", ea.svg_out, "Write a PSNR curve as SVG");
    eval->add_option("--title", ea.title, "SVG chart title");

    RadiiArgs ra;
    auto* radii = app.add_subcommand("radii", "Histogram of Gaussian radii per partition");
    radii->add_option("--model", ra.model, "Trained .egs1 model")->required()->check(CLI::ExistingFile);
    radii->add_option("--bins", ra.bins, "Histogram bins")->check(CLI::PositiveNumber);
    radii->add_option("--range-max", ra.range_max, "Upper edge of the histogram (default: largest radius)");
    radii->add_option("--out", ra.out, "CSV output (default stdout)");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Write a synthetic corpus of smooth test images");
    synth->add_option("--out-dir", sa.out_dir, "Output directory")->required();
    synth->add_option("--count", sa.count, "Number of images")->check(CLI::PositiveNumber);
    synth->add_option("--width", sa.width, "Image width")->check(CLI::PositiveNumber);
    synth->add_option("--height", sa.height, "Image height")->check(CLI::PositiveNumber);
    synth->add_option("--seed", sa.seed, "Random seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
            err << sub->help();
        }
        return kUsage;
    }

    try {
        if (*train) return cmd_train_basis(tb, out);
        if (*fit) return cmd_fit(fa, out, err);
        if (*eval) return cmd_eval(ea, out, err);
        if (*radii) return cmd_radii(ra, out);
        if (*synth) return cmd_synth(sa, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::ConfigError ? kUsage : kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

} // namespace eigengs::cli
