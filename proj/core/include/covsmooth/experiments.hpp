#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "covsmooth/covariates.hpp"
#include "covsmooth/gamma_select.hpp"
#include "covsmooth/graph.hpp"
#include "covsmooth/sym_matrix.hpp"

namespace covsmooth {

/// Planted-partition stochastic block model with balanced groups (sizes
/// differ by at most one) and a within/between odds ratio.
struct SbmDesign {
    std::size_t n = 100;
    std::size_t groups = 2;
    double odds = 1.0; // p_within / p_between, >= 1
    double target_mean_degree = 5.0;
    std::uint64_t seed = 0;
};

/// One uniform continuous covariate; linkage probability
/// expit(beta0 - log(beta1) |x_i - x_j|) with beta0 calibrated so the
/// mean expected degree hits the target.
struct ContinuousDesign {
    std::size_t n = 100;
    double beta1 = 1.0; // odds decrease per unit covariate distance, >= 1
    double target_mean_degree = 5.0;
    double lower = 0.0;
    double upper = 1.0;
    std::uint64_t seed = 0;
};

struct SbmPopulation {
    ProbabilityMatrix probabilities;
    CovariateTable covariates; // one categorical column "group"
    double p_within = 0.0;
    double p_between = 0.0;
};

struct ContinuousPopulation {
    ProbabilityMatrix probabilities;
    CovariateTable covariates; // one continuous column "x"
    double beta0 = 0.0;        // solved intercept
};

/// True linkage probabilities and group labels for an SBM design.
/// p_between solves the per-node expected-degree balance equation with
/// p_within = odds * p_between; throws InfeasibleDesignError when the
/// implied probabilities leave [0, 1].
SbmPopulation sbm_probabilities(const SbmDesign& design);

/// Samples the covariate, then solves beta0 by bisection on [-30, 30] so
/// the mean expected degree matches the target within 1e-8.
ContinuousPopulation continuous_probabilities(const ContinuousDesign& design);

/// Bernoulli graph: each unordered pair included independently with its
/// matrix probability. Deterministic given the seed.
Graph sample_graph(const ProbabilityMatrix& probabilities, std::uint64_t seed);

/// Removes round(fraction * |E|) edges uniformly without replacement;
/// the node set is unchanged.
Graph drop_edges_mcar(const Graph& graph, double fraction, std::uint64_t seed);

using ExperimentDesign = std::variant<SbmDesign, ContinuousDesign>;

/// 0 to 0.9 in steps of 0.045.
std::vector<double> default_missing_fractions();

struct GammaPolicy {
    bool automatic = true; // select gamma by psi for every layout
    double fixed = 0.5;    // used when !automatic
};

struct RobustnessConfig {
    std::vector<double> fractions = default_missing_fractions();
    int replicates = 100;
    GammaPolicy gamma;
    std::size_t grid_size = 20;    // psi grid for automatic selection
    int selection_replicates = 50; // v
    LayoutConfig layout;           // gamma, seed, and frame overridden per cell
    /// Drawing frame; defaults to sqrt(n) x sqrt(n) so the q = k = 1
    /// energy scale leaves room for attraction structure.
    std::optional<Frame> frame;
    std::uint64_t seed = 0;
};

struct RobustnessRow {
    int replicate = 0;
    double fraction = 0.0;
    std::string arm; // "covsmooth" or "fr"
    double gamma = 0.0;
    double disparity = 0.0;
    bool ok = true;
    std::string error;
};

struct RobustnessMean {
    std::string arm;
    double fraction = 0.0;
    double mean_disparity = 0.0;
    std::size_t count = 0;
};

struct RobustnessCurves {
    std::vector<RobustnessRow> rows;
    std::vector<double> fractions;
};

/// Mean disparity per (arm, fraction) over the rows that completed.
std::vector<RobustnessMean> summarize_robustness(const RobustnessCurves& curves);

/// Missing-data robustness protocol. Per replicate: generate (B, X, G);
/// build each arm's reference layout from the full graph; for every
/// missing fraction drop edges, refit the dyadic model on the degraded
/// graph, re-select gamma (or use gamma = 0 for the FR arm), lay out, and
/// record the Procrustes disparity against that arm's reference. Cell
/// seeds are keyed by the fraction value, so a 0 fraction reproduces the
/// reference exactly. Per-cell failures are recorded on the row rather
/// than aborting the sweep.
RobustnessCurves robustness_experiment(const ExperimentDesign& design,
                                       const RobustnessConfig& config);

/// One cell of the gamma-selection sweep: mean selected gamma with a 95%
/// normal confidence half-width across replicates.
struct GammaSweepCell {
    std::string design_type; // "sbm2", "sbm5", "continuous"
    std::size_t n = 0;
    double odds = 1.0;
    int replicates = 0;
    std::size_t ok_count = 0;
    double mean_gamma = 0.0;
    double sd_gamma = 0.0;
    double ci95_half_width = 0.0;
    std::vector<double> selected; // per successful replicate
    std::string error;            // first failure, when every replicate failed
};

struct GammaSweepConfig {
    std::vector<std::string> design_types{"sbm2", "sbm5", "continuous"};
    std::vector<std::size_t> sizes{20, 50, 100, 200};
    std::vector<double> odds{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    double target_mean_degree = 5.0;
    int replicates = 100;
    std::size_t grid_size = 20;
    int selection_replicates = 50; // v
    LayoutConfig layout;           // gamma, seed, and frame overridden per cell
    std::optional<Frame> frame;    // default: sqrt(n) x sqrt(n) per cell
    std::uint64_t seed = 0;
};

/// Gamma-selection sweep over (design type, size, odds) cells: per
/// replicate, generate a population, sample a graph, fit the dyadic
/// model, and select gamma by psi. Infeasible or failed cells are
/// reported in place without aborting the sweep.
std::vector<GammaSweepCell> gamma_selection_sweep(const GammaSweepConfig& config);

} // namespace covsmooth
