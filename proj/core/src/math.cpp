#include "covsmooth/math.hpp"

#include <algorithm>
#include <numeric>

#include "covsmooth/errors.hpp"

namespace covsmooth {

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw DegenerateInputError("mean of an empty vector");
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
    if (values.size() < 2) {
        throw DegenerateInputError("sample SD needs at least two values");
    }
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) {
        const double d = v - m;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw DegenerateInputError("median of an empty vector");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) {
        return hi;
    }
    double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

namespace {

// Mid-rank assignment for tied values.
std::vector<double> ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> result(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) result[order[k]] = rank;
        i = j + 1;
    }
    return result;
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionMismatchError("spearman inputs differ in length");
    }
    if (x.size() < 2) {
        throw DegenerateInputError("spearman needs at least two points");
    }
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DegenerateVectorError("spearman input has zero rank variance");
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace covsmooth
