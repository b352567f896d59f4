#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covsmooth/graph.hpp"
#include "covsmooth/layout_engine.hpp"
#include "covsmooth/sym_matrix.hpp"

namespace covsmooth {

/// Smoothing metric m: sum over unordered pairs of the off-diagonal
/// centered distance and probability matrices, D^C_ij * B^C_ij.
double smoothing_metric(const DistanceMatrix& dist, const ProbabilityMatrix& bhat);

/// Edge-length metric e: sum over unordered pairs of D^C_ij * A_ij.
/// The adjacency matrix is not centered.
double edge_metric(const DistanceMatrix& dist, const Graph& graph);

/// (x - mean) / sd with the sample standard deviation (n - 1). Requires
/// length >= 2 and nonzero variance; throws DegenerateVectorError
/// otherwise (callers fall back to a zero contribution).
std::vector<double> standardize(const std::vector<double>& values);

/// `count` evenly spaced gamma values on [0, 1] including both endpoints.
std::vector<double> uniform_gamma_grid(std::size_t count = 20);

struct SelectionConfig {
    std::vector<double> grid = uniform_gamma_grid(); // strictly increasing in [0, 1]
    int replicates = 50;                             // v
    LayoutConfig layout; // per-cell gamma/seed overridden; cells are single runs
};

struct PsiCell {
    double m = 0.0;
    double e = 0.0;
    double m_s = 0.0;
    double e_s = 0.0;
    double psi = 0.0;
    bool ok = false;
    std::string error; // failure reason when !ok
    std::uint64_t seed = 0;
};

struct GammaReport {
    std::vector<double> grid;
    std::vector<std::vector<PsiCell>> replicates; // v rows, |grid| cells each
    std::vector<double> median_psi;               // per gamma, across replicates
    double selected_gamma = 0.0;
    std::size_t selected_index = 0;
    std::uint64_t base_seed = 0;
};

/// For each replicate and each grid gamma, lays the graph out with a seed
/// derived from (base seed, replicate, gamma index), computes m and e,
/// standardizes each curve within the replicate, and forms
/// psi = m^S + e^S. Selects the gamma minimizing the per-gamma median of
/// psi (ties break to the smallest gamma). Zero-variance curves
/// contribute zero; failed cells are excluded from the median, and more
/// than half the replicates failing at any gamma raises SelectionError.
GammaReport psi_curves(const Graph& graph, const ProbabilityMatrix& bhat,
                       const SelectionConfig& config);

/// Recomputes median_psi / selected_gamma / selected_index from the cells
/// already in the report. Split out so aggregation is testable on its own.
void aggregate_psi(GammaReport& report);

} // namespace covsmooth
