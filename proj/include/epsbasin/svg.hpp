#pragma once

// Scatter plots of debut fields and basins as SVG. Output depends only on
// the inputs: fixed number formatting, points drawn in state order.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "epsbasin/basins.hpp"

namespace epsbasin {

namespace svg {

inline constexpr const char* kNegative = "#2b6cb0";  // robust side
inline constexpr const char* kPositive = "#c53030";  // needs control
inline constexpr const char* kMember = "#2f855a";
inline constexpr const char* kOutside = "#a0aec0";

inline std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '"') out += "&quot;";
        else out += c;
    }
    return out;
}

struct Dot {
    double x = 0, y = 0;
    double r = 3;
    const char* fill = kOutside;
    std::string title;
};

struct LegendEntry {
    const char* fill;
    double r;
    std::string text;
};

/// Plot area 640x480 plus a legend strip on the right; y grows upwards.
inline std::string scatter(const std::string& title, const std::vector<Dot>& dots,
                           const std::vector<LegendEntry>& legend) {
    constexpr double W = 640, H = 480, M = 40, LegendW = 200;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!dots.empty()) {
        x0 = x1 = dots[0].x;
        y0 = y1 = dots[0].y;
        for (const auto& d : dots) {
            x0 = std::min(x0, d.x), x1 = std::max(x1, d.x);
            y0 = std::min(y0, d.y), y1 = std::max(y1, d.y);
        }
    }
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
    auto py = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(W + LegendW) + "\" height=\"" + fixed(H) +
           "\" viewBox=\"0 0 " + fixed(W + LegendW) + " " + fixed(H) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + fixed(W + LegendW) + "\" height=\"" + fixed(H) + "\" fill=\"white\"/>\n";
    out += "<text x=\"" + fixed(M) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" + escape(title) +
           "</text>\n";
    out += "<rect x=\"" + fixed(M) + "\" y=\"" + fixed(M) + "\" width=\"" + fixed(W - 2 * M) + "\" height=\"" +
           fixed(H - 2 * M) + "\" fill=\"none\" stroke=\"#cbd5e0\"/>\n";
    out += "<text x=\"" + fixed(M) + "\" y=\"" + fixed(H - 12) + "\" font-family=\"sans-serif\" font-size=\"10\">x " +
           fixed(x0) + " .. " + fixed(x1) + ", y " + fixed(y0) + " .. " + fixed(y1) + "</text>\n";
    out += "<g id=\"points\">\n";
    for (const auto& d : dots) {
        out += "<circle cx=\"" + fixed(px(d.x)) + "\" cy=\"" + fixed(py(d.y)) + "\" r=\"" + fixed(d.r) + "\" fill=\"" +
               d.fill + "\" fill-opacity=\"0.8\">";
        if (!d.title.empty()) out += "<title>" + escape(d.title) + "</title>";
        out += "</circle>\n";
    }
    out += "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    double ly = M + 10;
    for (const auto& e : legend) {
        out += "<circle cx=\"" + fixed(W + 16) + "\" cy=\"" + fixed(ly) + "\" r=\"" + fixed(e.r) + "\" fill=\"" + e.fill +
               "\"/>\n";
        out += "<text x=\"" + fixed(W + 30) + "\" y=\"" + fixed(ly + 4) + "\">" + escape(e.text) + "</text>\n";
        ly += 22;
    }
    out += "</g>\n</svg>\n";
    return out;
}

/// Radius bucket: 0 -> 2, finite magnitudes in thirds of the largest
/// finite one -> 3..5, markers -> 6.
inline double debut_radius(const DebutValue& d, double max_finite) {
    if (d.is_marker()) return 6;
    const double m = d.magnitude();
    if (m == 0.0 || max_finite <= 0.0) return 2;
    if (m <= max_finite / 3) return 3;
    if (m <= 2 * max_finite / 3) return 4;
    return 5;
}

inline void require_plane(const SystemSpec& spec) {
    for (const auto& s : spec.states())
        if (s.coords.size() < 2) throw std::invalid_argument("state '" + s.label + "' has no 2-D coordinates to plot");
}

}  // namespace svg

/// Colour by side of the debut, radius by magnitude bucket.
inline std::string debut_svg(const SystemSpec& spec, const DebutField& field, const std::string& title) {
    svg::require_plane(spec);
    double max_finite = 0.0;
    for (const auto& d : field)
        if (!d.is_marker()) max_finite = std::max(max_finite, d.magnitude());
    std::vector<svg::Dot> dots;
    for (StateId s = 0; s < spec.size(); ++s) {
        const auto& c = spec.state(s).coords;
        dots.push_back({c[0], c[1], svg::debut_radius(field[s], max_finite),
                        field[s].is_negative_side() ? svg::kNegative : svg::kPositive,
                        spec.state(s).label + " " + to_string(field[s])});
    }
    const std::string third = format_cost(max_finite / 3), two = format_cost(2 * max_finite / 3);
    return svg::scatter(title, dots,
                        {{svg::kNegative, 4, "negative (robust)"},
                         {svg::kPositive, 4, "positive (needs control)"},
                         {svg::kOutside, 2, "|debut| = 0"},
                         {svg::kOutside, 3, "|debut| <= " + third},
                         {svg::kOutside, 4, "|debut| <= " + two},
                         {svg::kOutside, 5, "|debut| <= " + format_cost(max_finite)},
                         {svg::kOutside, 6, "|debut| = inf"}});
}

inline std::string basin_svg(const SystemSpec& spec, const StateSet& members, const std::string& title) {
    svg::require_plane(spec);
    std::vector<svg::Dot> dots;
    for (StateId s = 0; s < spec.size(); ++s) {
        const auto& c = spec.state(s).coords;
        const bool in = members.contains(s);
        dots.push_back({c[0], c[1], 3, in ? svg::kMember : svg::kOutside, spec.state(s).label});
    }
    return svg::scatter(title, dots,
                        {{svg::kMember, 4, "in basin (" + std::to_string(members.count()) + ")"},
                         {svg::kOutside, 4, "outside (" + std::to_string(spec.size() - members.count()) + ")"}});
}

}  // namespace epsbasin
