#pragma once

#include <cstdint>
#include <vector>

#include "covsmooth/graph.hpp"
#include "covsmooth/layout.hpp"
#include "covsmooth/sym_matrix.hpp"

namespace covsmooth {

/// Trial step at iteration t starts from initial * decay^t (also capped
/// by a multiple of the previously accepted step) and is halved until the
/// energy decreases.
struct StepSchedule {
    double initial = 0.1;
    double decay = 1.0;
};

struct LayoutConfig {
    double gamma = 0.0;        // smoothing weight in [0, 1]
    double repulsion_q = 1.0;  // > 0
    double attraction_k = 1.0; // > 0
    int max_iterations = 500;
    StepSchedule step;
    double tolerance = 1e-4; // projected-gradient max-norm for convergence
    int restarts = 5;        // independent runs, keep the lowest energy
    Frame frame;
    std::uint64_t seed = 0;
};

/// Fruchterman-Reingold energy: sum over unordered pairs of
/// q^2 / D_ij + k * A_ij * D_ij^2. Throws SingularDistanceError on
/// coincident nodes.
double energy_q1(const Layout& layout, const Graph& graph, double q = 1.0, double k = 1.0);

/// Covariate-smoothed energy: sum over unordered pairs of
/// 1 / D_ij + [(1 - gamma) A_ij + gamma B_ij] * D_ij^2. Equals energy_q1
/// with q = k = 1 at gamma = 0.
double energy_q2(const Layout& layout, const Graph& graph, const ProbabilityMatrix& bhat,
                 double gamma);

/// Gradient of energy_q2 with respect to the coordinates: node i receives
/// sum over j != i of (-1 / D_ij^3 + 2 w_ij) (p_i - p_j).
std::vector<Point> energy_gradient(const Layout& layout, const Graph& graph,
                                   const ProbabilityMatrix& bhat, double gamma);

struct LayoutResult {
    Layout layout;
    double energy = 0.0;         // final objective of the winning run
    double initial_energy = 0.0; // objective of that run's starting configuration
    bool converged = false;
    int iterations = 0;
    std::uint64_t run_seed = 0;               // seed of the winning restart
    std::vector<double> energy_trace;         // per-iteration energies, starting at
                                              // the initial configuration; non-increasing
};

/// Minimizes the smoothed energy over node positions: seeded uniform
/// initialization inside the frame, gradient descent with backtracking
/// line search, coordinates clamped to the frame after every step. Runs
/// `restarts` independent descents and returns the lowest-energy one.
/// `bhat` may be null only when gamma == 0 (plain FR). Deterministic for
/// a fixed config. Non-convergence is reported via the flag, not thrown.
LayoutResult minimize_layout(const Graph& graph, const ProbabilityMatrix* bhat,
                             const LayoutConfig& config);

} // namespace covsmooth
