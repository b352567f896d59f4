#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "covsmooth/covariates.hpp"
#include "covsmooth/graph.hpp"
#include "covsmooth/sym_matrix.hpp"

namespace covsmooth {

enum class DyadEncoding {
    same_category, // 1 if both nodes share the label, 0 otherwise
    abs_difference // |x_i - x_j|
};

struct DyadTerm {
    std::string column;
    DyadEncoding encoding = DyadEncoding::same_category;
};

struct DyadFeatureSpec {
    std::vector<DyadTerm> terms;
    bool include_intercept = true;
};

/// Default univariate-or-multivariate spec: every categorical column as a
/// same-category indicator, every continuous column as an absolute
/// difference, intercept included.
DyadFeatureSpec default_feature_spec(const CovariateTable& covariates);

/// Dyad design matrix: one row per unordered node pair in lexicographic
/// order (0,1), (0,2), ..., matching SymMatrix packing.
class DyadDesign {
public:
    DyadDesign(std::size_t node_count, std::size_t column_count, bool has_intercept);

    std::size_t node_count() const noexcept { return n_nodes_; }
    std::size_t pair_count() const noexcept { return n_nodes_ * (n_nodes_ - 1) / 2; }
    std::size_t column_count() const noexcept { return n_cols_; }
    bool has_intercept() const noexcept { return has_intercept_; }

    double at(std::size_t row, std::size_t col) const { return values_[row * n_cols_ + col]; }
    double& at(std::size_t row, std::size_t col) { return values_[row * n_cols_ + col]; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::size_t n_nodes_;
    std::size_t n_cols_;
    bool has_intercept_;
    std::vector<double> values_; // row-major pair_count x column_count
};

/// Expands nodal covariates into dyad-level features. The intercept, when
/// requested, is the leading column.
DyadDesign build_dyad_features(const CovariateTable& covariates, const DyadFeatureSpec& spec);

struct DyadicModel {
    DyadFeatureSpec spec;
    std::vector<double> coefficients;    // intercept first when present
    std::vector<double> standard_errors; // from the inverse Fisher information
    bool converged = false;
    int iterations = 0;
};

struct FitOptions {
    double tolerance = 1e-8;        // max absolute coefficient change
    int max_iterations = 100;
    double separation_guard = 30.0; // abort when any |coefficient| exceeds this
};

/// Maximum-likelihood logistic fit by iteratively reweighted least
/// squares. The response for row (i, j) is the adjacency entry A_ij.
DyadicModel fit_logistic(const DyadDesign& design, const Graph& graph,
                         const FitOptions& options = {});

/// Convenience: build features from `spec` and fit against `graph`.
DyadicModel fit_logistic(const CovariateTable& covariates, const DyadFeatureSpec& spec,
                         const Graph& graph, const FitOptions& options = {});

/// Estimated linkage probabilities: expit of the linear predictor per
/// dyad, clamped into [1e-12, 1 - 1e-12]. Symmetric, zero diagonal.
ProbabilityMatrix predict_probs(const DyadicModel& model, const CovariateTable& covariates);

} // namespace covsmooth
