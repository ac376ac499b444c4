// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "eigengs/error.hpp"

namespace eigengs {

namespace {

constexpr const char* kHeader = "iteration,loss,psnr_db,ssim,seconds";

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double parse_double(const std::string& field, const std::filesystem::path& path) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') {
        throw Error(ErrorKind::FormatError, "bad number '" + field + "' in " + path.string());
    }
    return v;
}

struct Moments {
    double mean = 0.0;
    double std = 0.0;
};

Moments moments(const std::vector<double>& v) {
    if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    double s = 0.0;
    for (double x : v) s += x;
    const double mean = s / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

} // namespace

void write_report_csv(std::ostream& out, const FitReport& report) {
    out << kHeader << '\n';
    for (const auto& r : report.rows) {
        out << r.iteration << ',' << num(r.loss) << ',' << num(r.psnr_db) << ',' << num(r.ssim) << ','
            << num(r.seconds) << '\n';
    }
}

void write_report_csv(const std::filesystem::path& path, const FitReport& report) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    write_report_csv(out, report);
}

FitReport read_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kHeader) {
        throw Error(ErrorKind::FormatError, path.string() + " lacks the report header");
    }
    FitReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 5) {
            throw Error(ErrorKind::FormatError, "expected 5 columns in " + path.string());
        }
        FitRow row;
        row.iteration = std::lround(parse_double(fields[0], path));
        row.loss = parse_double(fields[1], path);
        row.psnr_db = parse_double(fields[2], path);
        row.ssim = parse_double(fields[3], path);
        row.seconds = parse_double(fields[4], path);
        report.rows.push_back(row);
    }
    return report;
}

std::vector<IterationSummary> aggregate_reports(const std::vector<FitReport>& reports, double threshold_db) {
    struct Bucket {
        std::vector<double> psnr, ssim, seconds;
        std::size_t above = 0;
        std::size_t infinite = 0;
    };
    std::map<long, Bucket> buckets;
    for (const auto& report : reports) {
        for (const auto& r : report.rows) {
            Bucket& b = buckets[r.iteration];
            if (std::isinf(r.psnr_db) && r.psnr_db > 0) {
                ++b.infinite;
            } else {
                b.psnr.push_back(r.psnr_db);
            }
            if (r.psnr_db > threshold_db) ++b.above;
            b.ssim.push_back(r.ssim);
            b.seconds.push_back(r.seconds);
        }
    }
    std::vector<IterationSummary> out;
    for (const auto& [iteration, b] : buckets) {
        IterationSummary s;
        s.iteration = iteration;
        s.samples = b.ssim.size();
        const Moments p = moments(b.psnr);
        s.psnr_mean = b.psnr.empty() ? std::numeric_limits<double>::infinity() : p.mean;
        s.psnr_std = p.std;
        const Moments q = moments(b.ssim);
        s.ssim_mean = q.mean;
        s.ssim_std = q.std;
        const Moments t = moments(b.seconds);
        s.seconds_mean = t.mean;
        s.seconds_std = t.std;
        s.percent_above = 100.0 * static_cast<double>(b.above) / static_cast<double>(s.samples);
        out.push_back(s);
    }
    return out;
}

void write_summary_table(std::ostream& out, const std::vector<IterationSummary>& summary, double threshold_db) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%9s %5s %18s %18s %16s %8s\n", "iteration", "n", "psnr_db", "ssim", "seconds",
                  ("%>" + num(threshold_db)).c_str());
    out << buf;
    for (const auto& s : summary) {
        std::snprintf(buf, sizeof buf, "%9ld %5zu %9.3f +- %5.3f %9.4f +- %5.4f %8.3f +- %5.3f %8.1f\n", s.iteration,
                      s.samples, s.psnr_mean, s.psnr_std, s.ssim_mean, s.ssim_std, s.seconds_mean, s.seconds_std,
                      s.percent_above);
        out << buf;
    }
}

std::string psnr_curve_svg(const std::vector<IterationSummary>& summary, const std::string& title) {
    constexpr double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
    std::vector<const IterationSummary*> pts;
    for (const auto& s : summary) {
        if (std::isfinite(s.psnr_mean)) pts.push_back(&s);
    }
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    if (!pts.empty()) {
        x_min = static_cast<double>(pts.front()->iteration);
        x_max = static_cast<double>(pts.back()->iteration);
        y_min = std::numeric_limits<double>::infinity();
        y_max = -y_min;
        for (const auto* p : pts) {
            y_min = std::min(y_min, p->psnr_mean - p->psnr_std);
            y_max = std::max(y_max, p->psnr_mean + p->psnr_std);
        }
        if (x_max <= x_min) x_max = x_min + 1;
        if (y_max - y_min < 1e-9) {
            y_min -= 0.5;
            y_max += 0.5;
        }
    }
    auto sx = [&](double x) { return L + (x - x_min) / (x_max - x_min) * (W - L - R); };
    auto sy = [&](double y) { return H - B - (y - y_min) / (y_max - y_min) * (H - T - B); };

    std::ostringstream svg;
    svg.setf(std::ios::fixed);
    svg.precision(2);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
        << W << ' ' << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double yv = y_min + (y_max - y_min) * i / 4.0;
        const double xv = x_min + (x_max - x_min) * i / 4.0;
        svg << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << yv << "</text>\n";
        svg << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << std::lround(xv)
            << "</text>\n";
    }
    svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">iteration</text>\n";
    svg << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
        << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">PSNR (dB)</text>\n";
    if (!pts.empty()) {
        svg << "<polygon fill=\"#1f77b4\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (const auto* p : pts) svg << sx(p->iteration) << ',' << sy(p->psnr_mean + p->psnr_std) << ' ';
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
            svg << sx((*it)->iteration) << ',' << sy((*it)->psnr_mean - (*it)->psnr_std) << ' ';
        }
        svg << "\"/>\n<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
        for (const auto* p : pts) svg << sx(p->iteration) << ',' << sy(p->psnr_mean) << ' ';
        svg << "\"/>\n";
        for (const auto* p : pts) {
            svg << "<circle cx=\"" << sx(p->iteration) << "\" cy=\"" << sy(p->psnr_mean)
                << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace eigengs
