#pragma once

#include <cstddef>
#include <vector>

#include "covsmooth/sym_matrix.hpp"

namespace covsmooth {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Bounded drawing frame [0, width] x [0, height].
struct Frame {
    double width = 1.0;
    double height = 1.0;
};

/// Planar node coordinates on a bounded frame. Immutable after
/// construction; construction rejects coordinates outside the frame.
class Layout {
public:
    Layout(std::vector<Point> coords, Frame frame = {});

    std::size_t node_count() const noexcept { return coords_.size(); }
    const std::vector<Point>& coords() const noexcept { return coords_; }
    const Point& at(std::size_t i) const { return coords_.at(i); }
    const Frame& frame() const noexcept { return frame_; }

private:
    std::vector<Point> coords_;
    Frame frame_;
};

/// Pairwise Euclidean distance matrix of a layout.
DistanceMatrix pairwise_distances(const Layout& layout);

} // namespace covsmooth
