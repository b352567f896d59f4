#include "covsmooth/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "covsmooth/errors.hpp"

namespace covsmooth {

namespace {

const char* const kPalette[] = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);
constexpr const char* kDefaultFill = "#4e79a7";

struct Rgb {
    double r, g, b;
};

// Ramp stops for continuous covariates.
const Rgb kRampStops[] = {
    {0x44 / 255.0, 0x01 / 255.0, 0x54 / 255.0}, {0x3b / 255.0, 0x52 / 255.0, 0x8b / 255.0},
    {0x21 / 255.0, 0x91 / 255.0, 0x8c / 255.0}, {0x5e / 255.0, 0xc9 / 255.0, 0x62 / 255.0},
    {0xfd / 255.0, 0xe7 / 255.0, 0x25 / 255.0},
};
constexpr std::size_t kRampSize = sizeof(kRampStops) / sizeof(kRampStops[0]);

std::string hex_color(const Rgb& c) {
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x",
                  static_cast<unsigned>(std::clamp(c.r, 0.0, 1.0) * 255.0 + 0.5),
                  static_cast<unsigned>(std::clamp(c.g, 0.0, 1.0) * 255.0 + 0.5),
                  static_cast<unsigned>(std::clamp(c.b, 0.0, 1.0) * 255.0 + 0.5));
    return buffer;
}

std::string ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double scaled = t * static_cast<double>(kRampSize - 1);
    const std::size_t lo = std::min(static_cast<std::size_t>(scaled), kRampSize - 2);
    const double frac = scaled - static_cast<double>(lo);
    const Rgb& a = kRampStops[lo];
    const Rgb& b = kRampStops[lo + 1];
    return hex_color({a.r + frac * (b.r - a.r), a.g + frac * (b.g - a.g),
                      a.b + frac * (b.b - a.b)});
}

std::string px(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3f", value);
    return buffer;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_svg(const Layout& layout, const Graph& graph,
                       const CovariateTable* covariates, const RenderOptions& options) {
    if (layout.node_count() != graph.node_count()) {
        throw DimensionMismatchError("layout and graph node counts differ");
    }

    const CovariateColumn* color_col = nullptr;
    if (!options.color_by.empty()) {
        if (covariates == nullptr) {
            throw InvalidArgumentError("--color-by needs a covariate table");
        }
        color_col = covariates->find(options.color_by);
        if (color_col == nullptr) {
            throw InvalidArgumentError("unknown color-by column '" + options.color_by + "'");
        }
        if (covariates->node_count() != layout.node_count()) {
            throw DimensionMismatchError("covariate table and layout node counts differ");
        }
    }

    const Frame& frame = layout.frame();
    const double margin = options.margin_px;
    const double plot_w = options.width_px - 2.0 * margin;
    const double plot_h = plot_w * frame.height / frame.width;
    const double legend_w = color_col != nullptr ? 150.0 : 0.0;
    const double canvas_w = options.width_px + legend_w;
    const double canvas_h = plot_h + 2.0 * margin;

    const auto map_x = [&](double x) { return margin + x / frame.width * plot_w; };
    const auto map_y = [&](double y) { return margin + (frame.height - y) / frame.height * plot_h; };

    // Per-node fill colors plus legend entries.
    std::vector<std::string> fills(layout.node_count(), kDefaultFill);
    std::vector<std::pair<std::string, std::string>> legend; // label, color
    bool continuous_legend = false;
    double value_min = 0.0, value_max = 0.0;
    if (color_col != nullptr) {
        if (color_col->kind == ColumnKind::categorical) {
            std::set<std::string> unique(color_col->labels.begin(), color_col->labels.end());
            std::map<std::string, std::string> color_of;
            std::size_t next = 0;
            for (const std::string& label : unique) {
                color_of[label] = kPalette[next % kPaletteSize];
                legend.emplace_back(label, color_of[label]);
                ++next;
            }
            for (std::size_t i = 0; i < fills.size(); ++i) {
                fills[i] = color_of[color_col->labels[i]];
            }
        } else {
            continuous_legend = true;
            value_min = *std::min_element(color_col->values.begin(), color_col->values.end());
            value_max = *std::max_element(color_col->values.begin(), color_col->values.end());
            for (std::size_t i = 0; i < fills.size(); ++i) {
                const double range = value_max - value_min;
                const double t = range > 0.0 ? (color_col->values[i] - value_min) / range : 0.5;
                fills[i] = ramp_color(t);
            }
        }
    }

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(canvas_w) << "\" height=\""
        << px(canvas_h) << "\" viewBox=\"0 0 " << px(canvas_w) << ' ' << px(canvas_h) << "\">\n";
    if (continuous_legend) {
        out << "  <defs>\n"
            << "    <linearGradient id=\"ramp\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
        for (std::size_t s = 0; s < kRampSize; ++s) {
            const double offset = static_cast<double>(s) / static_cast<double>(kRampSize - 1);
            out << "      <stop offset=\"" << px(offset) << "\" stop-color=\""
                << hex_color(kRampStops[s]) << "\"/>\n";
        }
        out << "    </linearGradient>\n  </defs>\n";
    }
    out << "  <rect x=\"0\" y=\"0\" width=\"" << px(canvas_w) << "\" height=\"" << px(canvas_h)
        << "\" fill=\"#ffffff\"/>\n";

    out << "  <g stroke=\"#999999\" stroke-width=\"1\" stroke-opacity=\"0.55\">\n";
    for (const auto& [a, b] : graph.edges()) {
        out << "    <line x1=\"" << px(map_x(layout.at(a).x)) << "\" y1=\""
            << px(map_y(layout.at(a).y)) << "\" x2=\"" << px(map_x(layout.at(b).x)) << "\" y2=\""
            << px(map_y(layout.at(b).y)) << "\"/>\n";
    }
    out << "  </g>\n";

    out << "  <g stroke=\"#333333\" stroke-width=\"0.8\">\n";
    for (std::size_t i = 0; i < layout.node_count(); ++i) {
        out << "    <circle cx=\"" << px(map_x(layout.at(i).x)) << "\" cy=\""
            << px(map_y(layout.at(i).y)) << "\" r=\"" << px(options.node_radius_px)
            << "\" fill=\"" << fills[i] << "\"/>\n";
    }
    out << "  </g>\n";

    if (color_col != nullptr) {
        const double lx = options.width_px + 8.0;
        out << "  <g font-family=\"sans-serif\" font-size=\"12\">\n";
        out << "    <text x=\"" << px(lx) << "\" y=\"" << px(margin) << "\">"
            << xml_escape(color_col->name) << "</text>\n";
        if (continuous_legend) {
            const double bar_h = std::min(180.0, plot_h - 30.0);
            const double bar_top = margin + 12.0;
            out << "    <rect x=\"" << px(lx) << "\" y=\"" << px(bar_top)
                << "\" width=\"16\" height=\"" << px(bar_h) << "\" fill=\"url(#ramp)\"/>\n";
            out << "    <text x=\"" << px(lx + 22.0) << "\" y=\"" << px(bar_top + 10.0) << "\">"
                << px(value_max) << "</text>\n";
            out << "    <text x=\"" << px(lx + 22.0) << "\" y=\"" << px(bar_top + bar_h) << "\">"
                << px(value_min) << "</text>\n";
        } else {
            double ly = margin + 16.0;
            for (const auto& [label, color] : legend) {
                out << "    <rect x=\"" << px(lx) << "\" y=\"" << px(ly - 10.0)
                    << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
                out << "    <text x=\"" << px(lx + 18.0) << "\" y=\"" << px(ly) << "\">"
                    << xml_escape(label) << "</text>\n";
                ly += 18.0;
            }
        }
        out << "  </g>\n";
    }

    out << "</svg>\n";
    return out.str();
}

} // namespace covsmooth
