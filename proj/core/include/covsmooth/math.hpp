#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace covsmooth {

/// Logistic function 1 / (1 + exp(-x)), numerically stable for large |x|.
inline double expit(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// Inverse of expit; p must lie in (0, 1).
inline double logit(double p) {
    return std::log(p / (1.0 - p));
}

/// Clamps a probability into [1e-12, 1 - 1e-12] so logs and IRLS weights
/// stay finite.
inline double clamp_probability(double p) {
    constexpr double eps = 1e-12;
    if (p < eps) return eps;
    if (p > 1.0 - eps) return 1.0 - eps;
    return p;
}

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator). Requires size >= 2.
double sample_sd(std::span<const double> values);

/// Median; averages the two middle values for even sizes.
double median(std::vector<double> values);

/// Spearman rank correlation with mid-rank ties.
double spearman(std::span<const double> x, std::span<const double> y);

} // namespace covsmooth
