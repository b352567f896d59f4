#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace covsmooth {

/// Symmetric real matrix with a structurally zero diagonal. Only the
/// strict upper triangle is stored, packed row-major in the pair order
/// (0,1), (0,2), ..., (0,n-1), (1,2), ... -- the same order used for
/// dyad rows, so probability predictions fill the storage directly.
class SymMatrix {
public:
    explicit SymMatrix(std::size_t dim);

    std::size_t dim() const noexcept { return n_; }
    std::size_t pair_count() const noexcept { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        if (i == j) return 0.0;
        return data_[pack_index(i, j)];
    }

    void set(std::size_t i, std::size_t j, double value);

    std::span<const double> packed() const noexcept { return data_; }
    std::span<double> packed() noexcept { return data_; }

    /// Packed index of the unordered pair {i, j}, i != j.
    std::size_t pack_index(std::size_t i, std::size_t j) const noexcept {
        if (i > j) std::swap(i, j);
        return i * n_ - i * (i + 1) / 2 + (j - i - 1);
    }

private:
    std::size_t n_;
    std::vector<double> data_;
};

/// Estimated linkage probabilities B-hat: entries in (0, 1).
using ProbabilityMatrix = SymMatrix;
/// Pairwise Euclidean distances D: entries >= 0.
using DistanceMatrix = SymMatrix;

/// Subtracts the mean over the n(n-1)/2 unordered off-diagonal entries
/// from every off-diagonal entry; the diagonal stays zero. The result's
/// off-diagonal entries sum to zero. Requires dim >= 2.
SymMatrix center_offdiag(const SymMatrix& m);

} // namespace covsmooth
