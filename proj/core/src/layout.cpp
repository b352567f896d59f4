#include "covsmooth/layout.hpp"

#include <cmath>
#include <string>

#include "covsmooth/errors.hpp"

namespace covsmooth {

Layout::Layout(std::vector<Point> coords, Frame frame)
    : coords_(std::move(coords)), frame_(frame) {
    if (coords_.empty()) {
        throw DegenerateInputError("layout needs at least one node");
    }
    if (!(frame_.width > 0.0) || !(frame_.height > 0.0)) {
        throw InvalidArgumentError("frame dimensions must be positive");
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        const Point& p = coords_[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw InvalidArgumentError("node " + std::to_string(i) + " has non-finite coordinates");
        }
        if (p.x < 0.0 || p.x > frame_.width || p.y < 0.0 || p.y > frame_.height) {
            throw InvalidArgumentError("node " + std::to_string(i) + " lies outside the frame");
        }
    }
}

DistanceMatrix pairwise_distances(const Layout& layout) {
    const std::size_t n = layout.node_count();
    DistanceMatrix dist(n);
    auto out = dist.packed();
    const auto& pts = layout.coords();
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            out[k] = std::hypot(dx, dy);
        }
    }
    return dist;
}

} // namespace covsmooth
