#include "raceline/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace raceline {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

struct Series {
    std::string label;
    std::string color;
    const std::vector<double>* x = nullptr;
    const std::vector<double>* y = nullptr;
};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {  // no data at all
            lo = 0.0;
            hi = 1.0;
        }
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
};

// One x/y panel with frame, ticks, series polylines, and a legend.
void draw_panel(std::string& svg, double px, double py, double pw, double ph,
                const std::vector<Series>& series, const std::string& x_label,
                const std::string& y_label) {
    Range rx, ry;
    for (const Series& s : series) {
        for (double v : *s.x) rx.include(v);
        for (double v : *s.y) ry.include(v);
    }
    rx.pad();
    ry.pad();

    const auto map_x = [&](double v) { return px + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
    const auto map_y = [&](double v) { return py + ph - (v - ry.lo) / (ry.hi - ry.lo) * ph; };

    svg += fmt("<rect x='%.2f' y='%.2f' width='%.2f' height='%.2f' "
               "fill='none' stroke='#444' stroke-width='1'/>\n",
               px, py, pw, ph);

    for (int i = 0; i <= 4; ++i) {
        const double xv = rx.lo + i * (rx.hi - rx.lo) / 4.0;
        const double yv = ry.lo + i * (ry.hi - ry.lo) / 4.0;
        svg += fmt("<line x1='%.2f' y1='%.2f' x2='%.2f' y2='%.2f' "
                   "stroke='#ddd' stroke-width='0.5'/>\n",
                   map_x(xv), py, map_x(xv), py + ph);
        svg += fmt("<line x1='%.2f' y1='%.2f' x2='%.2f' y2='%.2f' "
                   "stroke='#ddd' stroke-width='0.5'/>\n",
                   px, map_y(yv), px + pw, map_y(yv));
        svg += fmt("<text x='%.2f' y='%.2f' font-size='9' text-anchor='middle' "
                   "fill='#333'>",
                   map_x(xv), py + ph + 12.0) +
               fmt("%.3g", xv) + "</text>\n";
        svg += fmt("<text x='%.2f' y='%.2f' font-size='9' text-anchor='end' "
                   "fill='#333'>",
                   px - 4.0, map_y(yv) + 3.0) +
               fmt("%.3g", yv) + "</text>\n";
    }

    // Zero line when the y range crosses zero.
    if (ry.lo < 0.0 && ry.hi > 0.0) {
        svg += fmt("<line x1='%.2f' y1='%.2f' x2='%.2f' y2='%.2f' "
                   "stroke='#888' stroke-width='0.8' stroke-dasharray='4 3'/>\n",
                   px, map_y(0.0), px + pw, map_y(0.0));
    }

    for (const Series& s : series) {
        std::string points;
        const std::size_t n = s.x->size();
        const std::size_t stride = std::max<std::size_t>(1, n / 2000);
        for (std::size_t i = 0; i < n; i += stride) {
            points += fmt("%.2f,%.2f ", map_x((*s.x)[i]), map_y((*s.y)[i]));
        }
        if (n > 0 && (n - 1) % stride != 0) {
            points += fmt("%.2f,%.2f ", map_x(s.x->back()), map_y(s.y->back()));
        }
        svg += "<polyline fill='none' stroke='" + s.color +
               "' stroke-width='1.4' points='" + points + "'/>\n";
    }

    double lx = px + 8.0;
    for (const Series& s : series) {
        svg += fmt("<line x1='%.2f' y1='%.2f' x2='%.2f' y2='%.2f' stroke='", lx,
                   py + 10.0, lx + 16.0, py + 10.0) +
               s.color + "' stroke-width='2'/>\n";
        svg += fmt("<text x='%.2f' y='%.2f' font-size='10' fill='#222'>", lx + 20.0,
                   py + 13.0) +
               s.label + "</text>\n";
        lx += 24.0 + 7.0 * s.label.size();
    }

    svg += fmt("<text x='%.2f' y='%.2f' font-size='10' text-anchor='middle' "
               "fill='#222'>",
               px + pw / 2.0, py + ph + 26.0) +
           x_label + "</text>\n";
    svg += fmt("<text x='%.2f' y='%.2f' font-size='10' text-anchor='middle' "
               "fill='#222' transform='rotate(-90 %.2f %.2f)'>",
               px - 38.0, py + ph / 2.0, px - 38.0, py + ph / 2.0) +
           y_label + "</text>\n";
}

std::string svg_open(double width, double height, const std::string& title,
                     const std::string& run_id) {
    std::string svg = fmt(
        "<svg xmlns='http://www.w3.org/2000/svg' width='%.0f' height='%.0f' "
        "viewBox='0 0 %.0f %.0f' font-family='sans-serif'>\n",
        width, height, width, height);
    svg += "<!-- run " + run_id + " -->\n";
    svg += "<rect width='100%' height='100%' fill='white'/>\n";
    svg += fmt("<text x='%.2f' y='20' font-size='14' fill='#111'>", 12.0) + title +
           "</text>\n";
    return svg;
}

}  // namespace

std::string render_time_history(const RaceLog& log, const std::string& title,
                                const std::string& run_id) {
    std::vector<double> t, rear_theta, front_theta, dist, pot_rear, pot_front;
    for (const RaceRecord& r : log.records) {
        t.push_back(r.t);
        rear_theta.push_back(r.rear.theta);
        front_theta.push_back(r.front.theta);
        dist.push_back(r.distance);
        pot_rear.push_back(r.potential_rear);
        pot_front.push_back(r.potential_front);
    }

    const double W = 860, panel_h = 170, left = 70, right = 20;
    std::string svg = svg_open(W, 3 * (panel_h + 50) + 30, title, run_id);
    const double pw = W - left - right;

    draw_panel(svg, left, 40, pw, panel_h,
               {{"rear", "#d62728", &t, &rear_theta}, {"front", "#1f77b4", &t, &front_theta}},
               "t [s]", "path parameter");
    draw_panel(svg, left, 40 + panel_h + 50, pw, panel_h,
               {{"separation", "#2ca02c", &t, &dist}}, "t [s]", "distance [m]");
    draw_panel(svg, left, 40 + 2 * (panel_h + 50), pw, panel_h,
               {{"rear view", "#d62728", &t, &pot_rear},
                {"front view", "#1f77b4", &t, &pot_front}},
               "t [s]", "shaping term");
    svg += "</svg>\n";
    return svg;
}

std::string render_course(const ParametricPath& path,
                          const std::vector<std::pair<std::string, const RaceLog*>>& logs,
                          const std::string& title, const std::string& run_id) {
    // Isometric projection with z up.
    const auto iso_u = [](const Eigen::Vector3d& p) {
        return (p.x() - p.y()) * 0.8660254037844386;
    };
    const auto iso_v = [](const Eigen::Vector3d& p) {
        return (p.x() + p.y()) * 0.5 - p.z();
    };

    std::vector<double> cu, cv;
    const int samples = 1200;
    for (int i = 0; i <= samples; ++i) {
        const double theta =
            path.theta_min() + (path.theta_max() - path.theta_min()) * i / samples;
        const Eigen::Vector3d p = path.position(theta);
        cu.push_back(iso_u(p));
        cv.push_back(iso_v(p));
    }

    std::vector<Series> series;
    series.push_back({"course", "#999999", &cu, &cv});
    static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd"};
    std::vector<std::vector<double>> us, vs;
    us.reserve(2 * logs.size());
    vs.reserve(2 * logs.size());
    int color_idx = 0;
    for (const auto& [label, log] : logs) {
        std::vector<double> u_rear, v_rear, u_front, v_front;
        for (const RaceRecord& r : log->records) {
            u_rear.push_back(iso_u(r.rear.drone.position));
            v_rear.push_back(iso_v(r.rear.drone.position));
            u_front.push_back(iso_u(r.front.drone.position));
            v_front.push_back(iso_v(r.front.drone.position));
        }
        us.push_back(std::move(u_rear));
        vs.push_back(std::move(v_rear));
        series.push_back({label + " rear", colors[color_idx % 4], &us.back(), &vs.back()});
        ++color_idx;
        us.push_back(std::move(u_front));
        vs.push_back(std::move(v_front));
        series.push_back({label + " front", colors[color_idx % 4], &us.back(), &vs.back()});
        ++color_idx;
    }

    const double W = 860, H = 640;
    std::string svg = svg_open(W, H, title, run_id);
    draw_panel(svg, 70, 40, W - 90, H - 110, series, "isometric u", "isometric v");
    svg += "</svg>\n";
    return svg;
}

std::string render_progress_comparison(const FractionResult& result,
                                       const std::string& title,
                                       const std::string& run_id) {
    const double W = 860, H = 320;
    std::string svg = svg_open(W, H, title, run_id);
    draw_panel(svg, 70, 40, W - 90, H - 110,
               {{result.label, "#2ca02c", &result.time, &result.difference}}, "t [s]",
               "progress difference");
    svg += fmt("<text x='70' y='%.2f' font-size='11' fill='#111'>", H - 26.0) +
           fmt("fraction %.4f (threshold %.2f): ", result.fraction, result.threshold) +
           (result.pass ? "pass" : "FAIL") + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

void write_text_file(const std::string& content, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw Error("write to '" + path + "' failed");
    }
}

}  // namespace raceline
