#include "pixad/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace pixad {

namespace {

const char* kernel_color(const std::string& kernel) {
    if (kernel == "pam") return "#1f77b4";
    if (kernel == "pga") return "#d62728";
    if (kernel == "halo") return "#2ca02c";
    if (kernel == "global") return "#9467bd";
    return "#7f7f7f";
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct Series {
    std::string kernel;
    std::vector<std::pair<double, double>> pts;  // (log10 n, log10 value)
};

struct Panel {
    double x0, y0, x1, y1;  // plot area in svg coords, y grows downward
    double lx0, lx1, ly0, ly1;  // data domain in log10 units

    double sx(double lx) const {
        return x0 + (lx - lx0) / (lx1 - lx0) * (x1 - x0);
    }
    double sy(double ly) const {
        return y1 - (ly - ly0) / (ly1 - ly0) * (y1 - y0);
    }
};

void draw_panel(std::ostringstream& os, Panel& p, const std::vector<Series>& series,
                const char* title, const char* ylabel) {
    os << "<rect x=\"" << fmt(p.x0) << "\" y=\"" << fmt(p.y0) << "\" width=\""
       << fmt(p.x1 - p.x0) << "\" height=\"" << fmt(p.y1 - p.y0)
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fmt((p.x0 + p.x1) / 2) << "\" y=\"" << fmt(p.y0 - 24)
       << "\" text-anchor=\"middle\" font-size=\"15\" fill=\"#111111\">" << title
       << "</text>\n";
    os << "<text x=\"" << fmt(p.x0) << "\" y=\"" << fmt(p.y0 - 8)
       << "\" font-size=\"11\" fill=\"#555555\">" << ylabel << " (log)</text>\n";
    os << "<text x=\"" << fmt((p.x0 + p.x1) / 2) << "\" y=\"" << fmt(p.y1 + 32)
       << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"#555555\">n = h*w "
          "(log)</text>\n";

    if (series.empty()) {
        os << "<text x=\"" << fmt((p.x0 + p.x1) / 2) << "\" y=\""
           << fmt((p.y0 + p.y1) / 2)
           << "\" text-anchor=\"middle\" font-size=\"12\" fill=\"#999999\">no "
              "data</text>\n";
        return;
    }

    // Tick marks at integer decades inside the domain.
    for (i64 d = static_cast<i64>(std::ceil(p.lx0)); d <= static_cast<i64>(std::floor(p.lx1)); ++d) {
        const double x = p.sx(static_cast<double>(d));
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(p.y1) << "\" x2=\"" << fmt(x)
           << "\" y2=\"" << fmt(p.y1 + 5) << "\" stroke=\"#333333\"/>\n";
        os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(p.y1 + 18)
           << "\" text-anchor=\"middle\" font-size=\"10\" fill=\"#333333\">1e" << d
           << "</text>\n";
    }
    for (i64 d = static_cast<i64>(std::ceil(p.ly0)); d <= static_cast<i64>(std::floor(p.ly1)); ++d) {
        const double y = p.sy(static_cast<double>(d));
        os << "<line x1=\"" << fmt(p.x0 - 5) << "\" y1=\"" << fmt(y) << "\" x2=\""
           << fmt(p.x0) << "\" y2=\"" << fmt(y) << "\" stroke=\"#333333\"/>\n";
        os << "<text x=\"" << fmt(p.x0 - 8) << "\" y=\"" << fmt(y + 3)
           << "\" text-anchor=\"end\" font-size=\"10\" fill=\"#333333\">1e" << d
           << "</text>\n";
    }

    for (const auto& s : series) {
        const char* color = kernel_color(s.kernel);
        if (s.pts.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << color
               << "\" stroke-width=\"1.5\" points=\"";
            bool first = true;
            for (const auto& [lx, ly] : s.pts) {
                if (!first) os << " ";
                first = false;
                os << fmt(p.sx(lx)) << "," << fmt(p.sy(ly));
            }
            os << "\"/>\n";
        }
        for (const auto& [lx, ly] : s.pts)
            os << "<circle cx=\"" << fmt(p.sx(lx)) << "\" cy=\"" << fmt(p.sy(ly))
               << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
}

std::vector<Series> collect(const std::vector<BenchRecord>& records, bool memory) {
    std::vector<Series> out;
    for (const auto& r : records) {
        const double n = static_cast<double>(r.h * r.w);
        const double v = static_cast<double>(memory ? r.peak_bytes : r.wall_ns_median);
        if (!(n > 0.0) || !(v > 0.0)) continue;
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const Series& s) { return s.kernel == r.kernel; });
        if (it == out.end()) {
            out.push_back({r.kernel, {}});
            it = out.end() - 1;
        }
        it->pts.emplace_back(std::log10(n), std::log10(v));
    }
    for (auto& s : out) std::sort(s.pts.begin(), s.pts.end());
    return out;
}

void fit_domain(const std::vector<Series>& series, Panel& p) {
    double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
    for (const auto& s : series)
        for (const auto& [lx, ly] : s.pts) {
            lx0 = std::min(lx0, lx);
            lx1 = std::max(lx1, lx);
            ly0 = std::min(ly0, ly);
            ly1 = std::max(ly1, ly);
        }
    if (series.empty()) {
        lx0 = ly0 = 0.0;
        lx1 = ly1 = 1.0;
    }
    const double px = (lx1 - lx0) * 0.05, py = (ly1 - ly0) * 0.05;
    p.lx0 = lx0 - (px > 0.0 ? px : 0.5);
    p.lx1 = lx1 + (px > 0.0 ? px : 0.5);
    p.ly0 = ly0 - (py > 0.0 ? py : 0.5);
    p.ly1 = ly1 + (py > 0.0 ? py : 0.5);
}

}  // namespace

std::string render_bench_svg(const std::vector<BenchRecord>& records) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"430\" "
          "viewBox=\"0 0 960 430\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"960\" height=\"430\" fill=\"#ffffff\"/>\n";
    os << "<text x=\"480\" y=\"22\" text-anchor=\"middle\" font-size=\"16\" "
          "fill=\"#111111\" font-family=\"monospace\">attention kernel "
          "scaling</text>\n";
    os << "<g font-family=\"monospace\">\n";

    std::vector<Series> time_series = collect(records, false);
    std::vector<Series> mem_series = collect(records, true);

    Panel left{70, 60, 440, 370, 0, 1, 0, 1};
    fit_domain(time_series, left);
    draw_panel(os, left, time_series, "median wall time vs n", "wall_ns_median");

    Panel right{550, 60, 920, 370, 0, 1, 0, 1};
    fit_domain(mem_series, right);
    draw_panel(os, right, mem_series, "peak memory vs n", "peak_bytes");

    // Legend: union of kernels in first-appearance order.
    std::vector<std::string> kernels;
    for (const auto& r : records)
        if (std::find(kernels.begin(), kernels.end(), r.kernel) == kernels.end())
            kernels.push_back(r.kernel);
    double ly = 60.0;
    for (const auto& k : kernels) {
        os << "<rect x=\"452\" y=\"" << fmt(ly) << "\" width=\"12\" height=\"12\" "
              "fill=\""
           << kernel_color(k) << "\"/>\n";
        os << "<text x=\"468\" y=\"" << fmt(ly + 10)
           << "\" font-size=\"11\" fill=\"#111111\">" << k << "</text>\n";
        ly += 18.0;
    }

    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace pixad
