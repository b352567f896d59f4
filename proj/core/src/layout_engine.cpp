#include "covsmooth/layout_engine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "covsmooth/errors.hpp"
#include "covsmooth/rng.hpp"

namespace covsmooth {

namespace {

// Pair distances are floored here inside force terms so 1/D and 1/D^3
// stay finite; candidate steps that would collide nodes get an enormous
// energy and are rejected by the line search.
constexpr double kDistanceFloor = 1e-9;

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw InvalidArgumentError("gamma must lie in [0, 1], got " + std::to_string(gamma));
    }
}

void check_bhat(const Graph& graph, const ProbabilityMatrix& bhat) {
    if (bhat.dim() != graph.node_count()) {
        throw DimensionMismatchError("probability matrix is " + std::to_string(bhat.dim()) +
                                     "-dimensional, graph has " +
                                     std::to_string(graph.node_count()) + " nodes");
    }
}

// Per-pair attraction weights (1 - gamma) A_ij + gamma B_ij, packed in
// SymMatrix pair order. Constant throughout a descent.
std::vector<double> packed_weights(const Graph& graph, const ProbabilityMatrix* bhat,
                                   double gamma) {
    const std::size_t n = graph.node_count();
    std::vector<double> weights(n * (n - 1) / 2, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            const double a = graph.has_edge(static_cast<NodeId>(i), static_cast<NodeId>(j)) ? 1.0 : 0.0;
            const double b = bhat != nullptr ? (*bhat)(i, j) : 0.0;
            weights[k] = (1.0 - gamma) * a + gamma * b;
        }
    }
    return weights;
}

double floored_energy(const std::vector<Point>& pos, const std::vector<double>& weights,
                      double q_squared, double k_attraction) {
    const std::size_t n = pos.size();
    double total = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = pos[i].x, yi = pos[i].y;
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            const double dx = xi - pos[j].x;
            const double dy = yi - pos[j].y;
            double d = std::sqrt(dx * dx + dy * dy);
            if (d < kDistanceFloor) d = kDistanceFloor;
            total += q_squared / d + k_attraction * weights[k] * d * d;
        }
    }
    return total;
}

void floored_gradient(const std::vector<Point>& pos, const std::vector<double>& weights,
                      double q_squared, double k_attraction, std::vector<Point>& grad) {
    const std::size_t n = pos.size();
    grad.assign(n, Point{});
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = pos[i].x, yi = pos[i].y;
        double gx = 0.0, gy = 0.0;
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            const double dx = xi - pos[j].x;
            const double dy = yi - pos[j].y;
            double d2 = dx * dx + dy * dy;
            double d = std::sqrt(d2);
            if (d < kDistanceFloor) {
                d = kDistanceFloor;
                d2 = kDistanceFloor * kDistanceFloor;
            }
            const double coef = -q_squared / (d2 * d) + 2.0 * k_attraction * weights[k];
            const double fx = coef * dx;
            const double fy = coef * dy;
            gx += fx;
            gy += fy;
            grad[j].x -= fx;
            grad[j].y -= fy;
        }
        grad[i].x += gx;
        grad[i].y += gy;
    }
}

// Max-norm of the gradient projected onto the frame box: components that
// push against an active bound do not count, since clamping blocks them.
double projected_gradient_norm(const std::vector<Point>& pos, const std::vector<Point>& grad,
                               const Frame& frame) {
    double worst = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        double gx = grad[i].x, gy = grad[i].y;
        if (pos[i].x <= 0.0 && gx > 0.0) gx = 0.0;
        if (pos[i].x >= frame.width && gx < 0.0) gx = 0.0;
        if (pos[i].y <= 0.0 && gy > 0.0) gy = 0.0;
        if (pos[i].y >= frame.height && gy < 0.0) gy = 0.0;
        worst = std::max(worst, std::max(std::abs(gx), std::abs(gy)));
    }
    return worst;
}

std::vector<Point> random_positions(std::size_t n, const Frame& frame, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, frame.width);
    std::uniform_real_distribution<double> uy(0.0, frame.height);
    std::vector<Point> pos(n);
    for (auto& p : pos) {
        p.x = ux(rng);
        p.y = uy(rng);
    }

    // Exactly coincident pairs get a 1e-6 jitter so force terms are finite.
    std::mt19937_64 jitter_rng(splitmix64(seed));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    for (int round = 0; round < 10; ++round) {
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (pos[i].x == pos[j].x && pos[i].y == pos[j].y) {
                    const double a = angle(jitter_rng);
                    pos[j].x = std::clamp(pos[j].x + 1e-6 * std::cos(a), 0.0, frame.width);
                    pos[j].y = std::clamp(pos[j].y + 1e-6 * std::sin(a), 0.0, frame.height);
                    any = true;
                }
            }
        }
        if (!any) break;
    }
    return pos;
}

struct RunOutcome {
    std::vector<Point> positions;
    double energy = 0.0;
    double initial_energy = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace;
};

RunOutcome descend(std::vector<Point> pos, const std::vector<double>& weights,
                   const LayoutConfig& config) {
    const double q2 = config.repulsion_q * config.repulsion_q;
    const double ka = config.attraction_k;
    const Frame& frame = config.frame;

    RunOutcome run;
    double current = floored_energy(pos, weights, q2, ka);
    run.initial_energy = current;
    run.trace.push_back(current);

    std::vector<Point> grad, candidate(pos.size());
    double last_step = config.step.initial;
    double base_step = config.step.initial;

    for (int t = 0; t < config.max_iterations; ++t) {
        floored_gradient(pos, weights, q2, ka, grad);
        if (projected_gradient_norm(pos, grad, frame) < config.tolerance) {
            run.converged = true;
            break;
        }

        double step = std::min(base_step, 4.0 * last_step);
        bool accepted = false;
        double candidate_energy = 0.0;
        for (int halving = 0; halving <= 30; ++halving) {
            for (std::size_t i = 0; i < pos.size(); ++i) {
                candidate[i].x = std::clamp(pos[i].x - step * grad[i].x, 0.0, frame.width);
                candidate[i].y = std::clamp(pos[i].y - step * grad[i].y, 0.0, frame.height);
            }
            candidate_energy = floored_energy(candidate, weights, q2, ka);
            if (candidate_energy < current) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // no step of any size improves: stalled at the floor

        pos.swap(candidate);
        current = candidate_energy;
        last_step = step;
        run.trace.push_back(current);
        run.iterations = t + 1;
        base_step *= config.step.decay;
    }

    run.positions = std::move(pos);
    run.energy = current;
    return run;
}

void validate_config(const LayoutConfig& config) {
    check_gamma(config.gamma);
    if (!(config.repulsion_q > 0.0) || !(config.attraction_k > 0.0)) {
        throw InvalidArgumentError("repulsion and attraction constants must be positive");
    }
    if (!(config.tolerance > 0.0)) {
        throw InvalidArgumentError("convergence tolerance must be positive");
    }
    if (!(config.step.initial > 0.0) || !(config.step.decay > 0.0) || config.step.decay > 1.0) {
        throw InvalidArgumentError("step schedule needs initial > 0 and decay in (0, 1]");
    }
    if (config.max_iterations < 0) {
        throw InvalidArgumentError("max_iterations must be nonnegative");
    }
    if (config.restarts < 1) {
        throw InvalidArgumentError("restarts must be at least 1");
    }
    if (!(config.frame.width > 0.0) || !(config.frame.height > 0.0)) {
        throw InvalidArgumentError("frame dimensions must be positive");
    }
}

} // namespace

double energy_q1(const Layout& layout, const Graph& graph, double q, double k) {
    if (layout.node_count() != graph.node_count()) {
        throw DimensionMismatchError("layout and graph node counts differ");
    }
    if (!(q > 0.0) || !(k > 0.0)) {
        throw InvalidArgumentError("repulsion and attraction constants must be positive");
    }
    const auto& pts = layout.coords();
    const std::size_t n = pts.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d == 0.0) {
                throw SingularDistanceError("nodes " + std::to_string(i) + " and " +
                                            std::to_string(j) + " are coincident");
            }
            total += q * q / d +
                     k * graph.adjacency(static_cast<NodeId>(i), static_cast<NodeId>(j)) * d * d;
        }
    }
    return total;
}

double energy_q2(const Layout& layout, const Graph& graph, const ProbabilityMatrix& bhat,
                 double gamma) {
    if (layout.node_count() != graph.node_count()) {
        throw DimensionMismatchError("layout and graph node counts differ");
    }
    check_gamma(gamma);
    check_bhat(graph, bhat);
    const auto& pts = layout.coords();
    const std::size_t n = pts.size();
    const auto b = bhat.packed();
    double total = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d == 0.0) {
                throw SingularDistanceError("nodes " + std::to_string(i) + " and " +
                                            std::to_string(j) + " are coincident");
            }
            const double a = graph.adjacency(static_cast<NodeId>(i), static_cast<NodeId>(j));
            const double w = (1.0 - gamma) * a + gamma * b[k];
            total += 1.0 / d + w * d * d;
        }
    }
    return total;
}

std::vector<Point> energy_gradient(const Layout& layout, const Graph& graph,
                                   const ProbabilityMatrix& bhat, double gamma) {
    if (layout.node_count() != graph.node_count()) {
        throw DimensionMismatchError("layout and graph node counts differ");
    }
    check_gamma(gamma);
    check_bhat(graph, bhat);
    const auto& pts = layout.coords();
    const std::size_t n = pts.size();
    const auto b = bhat.packed();
    std::vector<Point> grad(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            const double d2 = dx * dx + dy * dy;
            const double d = std::sqrt(d2);
            if (d == 0.0) {
                throw SingularDistanceError("nodes " + std::to_string(i) + " and " +
                                            std::to_string(j) + " are coincident");
            }
            const double a = graph.adjacency(static_cast<NodeId>(i), static_cast<NodeId>(j));
            const double w = (1.0 - gamma) * a + gamma * b[k];
            const double coef = -1.0 / (d2 * d) + 2.0 * w;
            grad[i].x += coef * dx;
            grad[i].y += coef * dy;
            grad[j].x -= coef * dx;
            grad[j].y -= coef * dy;
        }
    }
    return grad;
}

LayoutResult minimize_layout(const Graph& graph, const ProbabilityMatrix* bhat,
                             const LayoutConfig& config) {
    validate_config(config);
    if (bhat == nullptr && config.gamma != 0.0) {
        throw InvalidArgumentError("smoothing with gamma > 0 needs a probability matrix");
    }
    if (bhat != nullptr) check_bhat(graph, *bhat);

    const std::size_t n = graph.node_count();
    if (n == 1) {
        Layout layout({Point{config.frame.width / 2.0, config.frame.height / 2.0}}, config.frame);
        LayoutResult result{std::move(layout), 0.0, 0.0, true, 0, config.seed, {0.0}};
        return result;
    }

    const std::vector<double> weights = packed_weights(graph, bhat, config.gamma);

    std::optional<RunOutcome> best;
    std::uint64_t best_seed = 0;
    for (int r = 0; r < config.restarts; ++r) {
        const std::uint64_t run_seed = derive_seed(config.seed, static_cast<std::uint64_t>(r));
        RunOutcome run = descend(random_positions(n, config.frame, run_seed), weights, config);
        if (!best || run.energy < best->energy) {
            best = std::move(run);
            best_seed = run_seed;
        }
    }

    LayoutResult result{Layout(std::move(best->positions), config.frame),
                        best->energy,
                        best->initial_energy,
                        best->converged,
                        best->iterations,
                        best_seed,
                        std::move(best->trace)};
    return result;
}

} // namespace covsmooth
