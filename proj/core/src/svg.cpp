#include "relaxcycle/svg.hpp"

#include <cmath>
#include <cstdio>

#include "relaxcycle/csv.hpp"

namespace relaxcycle {

namespace {

// fixed 800x600 canvas with the data frame inset by the margins
constexpr double canvas_w = 800.0;
constexpr double canvas_h = 600.0;
constexpr double margin_left = 80.0;
constexpr double margin_right = 40.0;
constexpr double margin_top = 40.0;
constexpr double margin_bottom = 60.0;
constexpr double plot_w = canvas_w - margin_left - margin_right;
constexpr double plot_h = canvas_h - margin_top - margin_bottom;

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c; break;
        }
    }
    return out;
}

struct Frame {
    double x_min, x_span;
    double y_min, y_span;

    double sx(double x) const { return margin_left + (x - x_min) * plot_w / x_span; }
    double sy(double y) const {
        return canvas_h - margin_bottom - (y - y_min) * plot_h / y_span;
    }
};

} // namespace

std::string render_svg(const PhasePolyline& poly, const SvgStyle& style) {
    if (poly.vertices.size() < 2) {
        throw ValidationError("render_svg: need at least 2 vertices");
    }
    const double x_span = poly.x_axis.max - poly.x_axis.min;
    const double y_span = poly.y_axis.max - poly.y_axis.min;
    if (!(x_span > 0.0) || !(y_span > 0.0) || !std::isfinite(x_span) ||
        !std::isfinite(y_span)) {
        throw NumericalError("degenerate", "render_svg: axis ranges must be positive "
                                           "and finite (x span " +
                                               format_double(x_span) + ", y span " +
                                               format_double(y_span) + ")");
    }
    const Frame frame{poly.x_axis.min, x_span, poly.y_axis.min, y_span};

    std::string svg;
    svg.reserve(4096 + poly.vertices.size() * 16);
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
    svg += "<!-- axis transform: x_svg = " + px(margin_left) + " + (x - " +
           format_double(poly.x_axis.min) + ") * " + format_double(plot_w / x_span) +
           "; y_svg = " + px(canvas_h - margin_bottom) + " - (y - " +
           format_double(poly.y_axis.min) + ") * " + format_double(plot_h / y_span) +
           " -->\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
    svg += "<rect x=\"" + px(margin_left) + "\" y=\"" + px(margin_top) + "\" width=\"" +
           px(plot_w) + "\" height=\"" + px(plot_h) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    if (!style.title.empty()) {
        svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"16\">" +
               xml_escape(style.title) + "</text>\n";
    }

    // five ticks per axis
    svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    for (int i = 0; i < 5; ++i) {
        const double vx = poly.x_axis.min + x_span * i / 4.0;
        const double gx = frame.sx(vx);
        svg += "<line x1=\"" + px(gx) + "\" y1=\"" + px(canvas_h - margin_bottom) +
               "\" x2=\"" + px(gx) + "\" y2=\"" + px(canvas_h - margin_bottom + 6.0) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + px(gx) + "\" y=\"" + px(canvas_h - margin_bottom + 20.0) +
               "\" text-anchor=\"middle\">" + xml_escape(tick_label(vx)) + "</text>\n";
    }
    for (int i = 0; i < 5; ++i) {
        const double vy = poly.y_axis.min + y_span * i / 4.0;
        const double gy = frame.sy(vy);
        svg += "<line x1=\"" + px(margin_left - 6.0) + "\" y1=\"" + px(gy) + "\" x2=\"" +
               px(margin_left) + "\" y2=\"" + px(gy) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + px(margin_left - 10.0) + "\" y=\"" + px(gy + 4.0) +
               "\" text-anchor=\"end\">" + xml_escape(tick_label(vy)) + "</text>\n";
    }
    svg += "<text x=\"" + px(margin_left + plot_w / 2.0) + "\" y=\"" +
           px(canvas_h - margin_bottom + 42.0) + "\" text-anchor=\"middle\">" +
           xml_escape(poly.x_axis.label) + "</text>\n";
    svg += "<text x=\"20\" y=\"" + px(margin_top + plot_h / 2.0) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
           px(margin_top + plot_h / 2.0) + ")\">" + xml_escape(poly.y_axis.label) +
           "</text>\n";
    svg += "</g>\n";

    // one path element per run of equally paced edges
    const std::string sw = px(style.stroke_width);
    std::size_t i = 0;
    while (i < poly.edge_pace.size()) {
        const Pace pace = poly.edge_pace[i];
        std::size_t j = i;
        while (j + 1 < poly.edge_pace.size() && poly.edge_pace[j + 1] == pace) ++j;
        svg += std::string("<path class=\"") + to_string(pace) + "\" fill=\"none\" stroke=\"" +
               (pace == Pace::fast ? style.fast_color : style.slow_color) +
               "\" stroke-width=\"" + sw + "\" d=\"M " +
               px(frame.sx(poly.vertices[i][0])) + " " + px(frame.sy(poly.vertices[i][1]));
        for (std::size_t v = i + 1; v <= j + 1; ++v) {
            svg += " L " + px(frame.sx(poly.vertices[v][0])) + " " +
                   px(frame.sy(poly.vertices[v][1]));
        }
        svg += "\"/>\n";
        i = j + 1;
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace relaxcycle
