// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace eigengs {

struct FitRow {
    long iteration = 0;
    double loss = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
    double seconds = 0.0;
};

struct FitReport {
    std::vector<FitRow> rows;
    /// Objective value at every iteration (not serialized).
    std::vector<double> loss_trace;
};

/// CSV with header `iteration,loss,psnr_db,ssim,seconds`. Infinite PSNR is
/// written as `inf`.
void write_report_csv(std::ostream& out, const FitReport& report);
void write_report_csv(const std::filesystem::path& path, const FitReport& report);
FitReport read_report_csv(const std::filesystem::path& path);

struct IterationSummary {
    long iteration = 0;
    std::size_t samples = 0;
    double psnr_mean = 0.0;
    double psnr_std = 0.0;
    double ssim_mean = 0.0;
    double ssim_std = 0.0;
    double seconds_mean = 0.0;
    double seconds_std = 0.0;
    double percent_above = 0.0; // share of reports with psnr > threshold
};

/// Groups rows of many reports by iteration. Means and population standard
/// deviations; infinite PSNR counts as above any threshold and is excluded
/// from the PSNR mean/std (reported as inf when every sample is infinite).
std::vector<IterationSummary> aggregate_reports(const std::vector<FitReport>& reports, double threshold_db);

void write_summary_table(std::ostream& out, const std::vector<IterationSummary>& summary, double threshold_db);

/// Line chart of mean PSNR against iteration, with a +/- std band.
std::string psnr_curve_svg(const std::vector<IterationSummary>& summary, const std::string& title);

} // namespace eigengs
