#pragma once

#include <array>

#include "covsmooth/layout.hpp"

namespace covsmooth {

struct ProcrustesResult {
    /// Minimized residual after alignment, in [0, 1]; 0 = identical
    /// shape, 1 = maximally different.
    double disparity = 0.0;
    /// Optimal 2x2 orthogonal transform (row-major); may be a reflection.
    std::array<double, 4> rotation{1.0, 0.0, 0.0, 1.0};
    /// Optimal uniform scale applied to the transformed configuration.
    double scale = 1.0;
};

/// Full Procrustes alignment of `other` onto `reference`: both point sets
/// are centered and scaled to unit Frobenius norm, then the orthogonal
/// transform (rotation or reflection) and scale minimizing the residual
/// sum of squares are found via SVD of the cross-covariance. Requires
/// equal node counts >= 2 and non-degenerate configurations.
ProcrustesResult procrustes_disparity(const Layout& reference, const Layout& other);

} // namespace covsmooth
