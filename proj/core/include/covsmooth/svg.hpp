#pragma once

#include <string>

#include "covsmooth/covariates.hpp"
#include "covsmooth/graph.hpp"
#include "covsmooth/layout.hpp"

namespace covsmooth {

struct RenderOptions {
    double width_px = 800.0; // height follows the frame aspect ratio
    double margin_px = 24.0;
    double node_radius_px = 4.0;
    std::string color_by; // covariate column; empty = single fill
};

/// Static SVG rendering: one <circle> per node, one <line> per edge, and
/// a legend (rect/text only) when coloring by a covariate. Categorical
/// columns get one palette color per label (sorted label order);
/// continuous columns get a color ramp. Byte-deterministic for identical
/// inputs.
std::string render_svg(const Layout& layout, const Graph& graph,
                       const CovariateTable* covariates, const RenderOptions& options = {});

} // namespace covsmooth
