#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "simulation.hpp"

namespace dubins {

enum class PlotKind { trajectory, cross_track, control, estimates };

inline PlotKind parse_plot_kind(const std::string& s) {
    if (s == "trajectory") return PlotKind::trajectory;
    if (s == "cross_track") return PlotKind::cross_track;
    if (s == "control") return PlotKind::control;
    if (s == "estimates") return PlotKind::estimates;
    throw ConfigError("unknown plot kind '" + s + "' (trajectory, cross_track, control, estimates)");
}

inline const char* to_string(PlotKind k) {
    switch (k) {
        case PlotKind::trajectory: return "trajectory";
        case PlotKind::cross_track: return "cross_track";
        case PlotKind::control: return "control";
        case PlotKind::estimates: return "estimates";
    }
    return "?";
}

// Run i is drawn in palette[i % 4]: magenta, cyan, green, pink.
inline constexpr const char* kPalette[4] = {"#d000d0", "#00b8d8", "#20a030", "#ff7fb0"};

namespace detail {

struct Series {
    std::vector<double> x, y;
    std::string color;
    std::string dash;  // empty for solid
    std::string label;
};

struct HLine {
    double y;
    std::string color;
};

class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel, bool equal_aspect = false)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), equal_(equal_aspect) {}

    void add(Series s) { series_.push_back(std::move(s)); }
    void hline(double y, std::string color) { hlines_.push_back({y, std::move(color)}); }

    std::string render() const {
        double x0 = inf(), x1 = -inf(), y0 = inf(), y1 = -inf();
        for (const auto& s : series_) {
            for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
            for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
        }
        for (const auto& h : hlines_) y0 = std::min(y0, h.y), y1 = std::max(y1, h.y);
        if (!(x1 > x0)) x0 -= 1.0, x1 += 1.0;
        if (!(y1 > y0)) y0 -= 1.0, y1 += 1.0;
        const double py = 0.05 * (y1 - y0), px = equal_ ? 0.05 * (x1 - x0) : 0.0;
        y0 -= py, y1 += py, x0 -= px, x1 += px;

        const double W = 900, H = 560, ml = 80, mr = 20, mt = 40, mb = 60;
        double pw = W - ml - mr, ph = H - mt - mb;
        if (equal_) {
            const double s = std::min(pw / (x1 - x0), ph / (y1 - y0));
            pw = s * (x1 - x0);
            ph = s * (y1 - y0);
        }
        auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
        auto Y = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
          << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title_ << "</text>\n";
        o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
          << "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (int i = 0; i <= 5; ++i) {
            const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
            o << "<text x=\"" << X(xv) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">" << num(xv)
              << "</text>\n";
            o << "<text x=\"" << ml - 6 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">" << num(yv)
              << "</text>\n";
        }
        o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << mt + ph + 42 << "\" text-anchor=\"middle\">" << xlabel_
          << "</text>\n";
        o << "<text transform=\"translate(18," << mt + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel_
          << "</text>\n";
        for (const auto& h : hlines_)
            o << "<line x1=\"" << X(x0) << "\" x2=\"" << X(x1) << "\" y1=\"" << Y(h.y) << "\" y2=\"" << Y(h.y)
              << "\" stroke=\"" << h.color << "\" stroke-dasharray=\"6,4\"/>\n";
        double ly = mt + 14;
        for (const auto& s : series_) {
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
            if (!s.dash.empty()) o << " stroke-dasharray=\"" << s.dash << "\"";
            o << " points=\"";
            const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 4000);
            for (std::size_t i = 0; i < s.x.size(); i += stride) o << num(X(s.x[i])) << ',' << num(Y(s.y[i])) << ' ';
            o << "\"/>\n";
            if (!s.label.empty()) {
                o << "<text x=\"" << ml + pw - 8 << "\" y=\"" << ly << "\" text-anchor=\"end\" fill=\"" << s.color
                  << "\">" << s.label << "</text>\n";
                ly += 15;
            }
        }
        o << "</svg>\n";
        return o.str();
    }

private:
    static double inf() { return std::numeric_limits<double>::infinity(); }
    static std::string num(double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.6g", v);
        return b;
    }

    std::string title_, xlabel_, ylabel_;
    bool equal_;
    std::vector<Series> series_;
    std::vector<HLine> hlines_;
};

inline std::string run_label(const RunResult& r) {
    char b[96];
    std::snprintf(b, sizeof b, "%s, lambda = %.3g", to_string(r.cfg.controller), r.cfg.lambda);
    return b;
}

}  // namespace detail

inline std::string render_svg(std::span<const RunResult> runs, PlotKind kind) {
    using detail::Series;
    if (runs.empty()) throw std::invalid_argument("render_svg: no runs");
    auto column = [](const RunResult& r, auto f) {
        std::vector<double> v;
        v.reserve(r.log.size());
        for (const auto& x : r.log) v.push_back(f(x));
        return v;
    };
    auto time = [&](const RunResult& r) { return column(r, [](const TrajectoryRecord& x) { return x.t; }); };

    switch (kind) {
        case PlotKind::trajectory: {
            detail::SvgPlot p("Ground track", "x (ft)", "y (ft)", true);
            const RunResult& r0 = runs.front();
            p.add({column(r0, [](auto& x) { return x.x_ref; }), column(r0, [](auto& x) { return x.y_ref; }), "#888888",
                   "4,4", "reference"});
            for (std::size_t i = 0; i < runs.size(); ++i)
                p.add({column(runs[i], [](auto& x) { return x.x; }), column(runs[i], [](auto& x) { return x.y; }),
                       kPalette[i % 4], "", detail::run_label(runs[i])});
            return p.render();
        }
        case PlotKind::cross_track: {
            detail::SvgPlot p("Cross-track error", "t (s)", "cross-track (ft)");
            for (std::size_t i = 0; i < runs.size(); ++i)
                p.add({time(runs[i]), column(runs[i], [](auto& x) { return x.cross_track; }), kPalette[i % 4], "",
                       detail::run_label(runs[i])});
            return p.render();
        }
        case PlotKind::control: {
            detail::SvgPlot p("Applied turn-rate command", "t (s)", "u2 (deg/s)");
            for (std::size_t i = 0; i < runs.size(); ++i)
                p.add({time(runs[i]), column(runs[i], [](auto& x) { return rad2deg(x.u2_sat); }), kPalette[i % 4], "",
                       detail::run_label(runs[i])});
            const double b = rad2deg(runs.front().psi_dot_max);
            p.hline(b, "#000000");
            p.hline(-b, "#000000");
            return p.render();
        }
        case PlotKind::estimates: {
            detail::SvgPlot p("Parameter estimates (solid theta_hat, dotted lambda_hat)", "t (s)", "estimate");
            for (std::size_t i = 0; i < runs.size(); ++i) {
                const char* c = kPalette[i % 4];
                p.add({time(runs[i]), column(runs[i], [](auto& x) { return x.theta_hat; }), c, "",
                       detail::run_label(runs[i])});
                p.add({time(runs[i]), column(runs[i], [](auto& x) { return x.lambda_hat; }), c, "2,3", ""});
                p.hline(1.0 / runs[i].cfg.lambda, c);
                p.hline(runs[i].cfg.lambda, c);
            }
            return p.render();
        }
    }
    return {};
}

inline void emit_svg(std::span<const RunResult> runs, PlotKind kind, const std::string& path) {
    const std::string text = render_svg(runs, kind);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace dubins
