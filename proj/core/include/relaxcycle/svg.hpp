#ifndef RELAXCYCLE_SVG_HPP
#define RELAXCYCLE_SVG_HPP

#include <string>

#include "relaxcycle/series.hpp"

namespace relaxcycle {

struct SvgStyle {
    std::string slow_color = "#1f77b4";
    std::string fast_color = "#d62728";
    double stroke_width = 1.5;
    std::string title; // optional caption above the plot
};

// Standalone SVG 1.1 document, fixed 800x600 viewBox: framed plot area, five
// labeled ticks per axis, one path element per run of equally paced edges
// (fast runs styled distinctly), and the linear axis transforms documented in
// a comment element. Byte-deterministic for identical input; no external
// references. Throws NumericalError("degenerate") when either axis range is
// zero or not finite.
std::string render_svg(const PhasePolyline& poly, const SvgStyle& style = {});

} // namespace relaxcycle

#endif
