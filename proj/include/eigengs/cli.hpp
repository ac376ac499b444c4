// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eigengs/gaussian.hpp"

namespace eigengs::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct HistogramBin {
    std::string partition; // "low", "high" or "all"
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

/// Radius histogram per partition over [0, range_max]; range_max <= 0 uses
/// the largest radius. Values at range_max fall into the last bin.
std::vector<HistogramBin> radius_histogram(const EigenGaussianModel& model, int bins, double range_max);

/// Parses "0,10,100" into sorted unique iteration numbers.
std::vector<int> parse_iteration_list(const std::string& text);

} // namespace eigengs::cli
