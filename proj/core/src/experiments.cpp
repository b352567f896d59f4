#include "covsmooth/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "covsmooth/dyad_model.hpp"
#include "covsmooth/errors.hpp"
#include "covsmooth/math.hpp"
#include "covsmooth/parallel.hpp"
#include "covsmooth/procrustes.hpp"
#include "covsmooth/rng.hpp"

namespace covsmooth {

namespace {

std::vector<std::size_t> balanced_group_sizes(std::size_t n, std::size_t groups) {
    std::vector<std::size_t> sizes(groups, n / groups);
    for (std::size_t g = 0; g < n % groups; ++g) ++sizes[g];
    return sizes;
}

} // namespace

SbmPopulation sbm_probabilities(const SbmDesign& design) {
    if (design.n < 2) {
        throw InvalidArgumentError("SBM design needs at least two nodes");
    }
    if (design.groups < 1 || design.groups > design.n) {
        throw InvalidArgumentError("SBM group count must lie in [1, n]");
    }
    if (!(design.odds >= 1.0)) {
        throw InvalidArgumentError("within/between odds ratio must be at least 1");
    }
    if (!(design.target_mean_degree >= 0.0)) {
        throw InvalidArgumentError("target mean degree must be nonnegative");
    }

    const std::vector<std::size_t> sizes = balanced_group_sizes(design.n, design.groups);
    std::vector<std::size_t> group_of(design.n);
    {
        std::size_t node = 0;
        for (std::size_t g = 0; g < design.groups; ++g) {
            for (std::size_t k = 0; k < sizes[g]; ++k) group_of[node++] = g;
        }
    }

    // Expected degree of node i is p_in (s_i - 1) + p_out (n - s_i) with
    // p_in = odds * p_out; solve the node average for p_out.
    double balance = 0.0;
    for (std::size_t i = 0; i < design.n; ++i) {
        const double s = static_cast<double>(sizes[group_of[i]]);
        balance += design.odds * (s - 1.0) + (static_cast<double>(design.n) - s);
    }
    balance /= static_cast<double>(design.n);
    if (balance <= 0.0) {
        throw InfeasibleDesignError("design admits no potential links");
    }
    const double p_between = design.target_mean_degree / balance;
    const double p_within = design.odds * p_between;
    if (p_within > 1.0 || p_between > 1.0) {
        throw InfeasibleDesignError("implied linkage probability exceeds 1 (p_within = " +
                                    std::to_string(p_within) + ")");
    }

    ProbabilityMatrix probs(design.n);
    auto out = probs.packed();
    std::size_t k = 0;
    for (std::size_t i = 0; i < design.n; ++i) {
        for (std::size_t j = i + 1; j < design.n; ++j, ++k) {
            out[k] = group_of[i] == group_of[j] ? p_within : p_between;
        }
    }

    CovariateTable covariates(design.n);
    std::vector<std::string> labels(design.n);
    for (std::size_t i = 0; i < design.n; ++i) labels[i] = std::to_string(group_of[i]);
    covariates.add_categorical("group", std::move(labels));

    return SbmPopulation{std::move(probs), std::move(covariates), p_within, p_between};
}

ContinuousPopulation continuous_probabilities(const ContinuousDesign& design) {
    if (design.n < 2) {
        throw InvalidArgumentError("continuous design needs at least two nodes");
    }
    if (!(design.beta1 >= 1.0)) {
        throw InvalidArgumentError("beta1 must be at least 1");
    }
    if (!(design.lower < design.upper)) {
        throw InvalidArgumentError("covariate bounds must satisfy lower < upper");
    }
    if (!(design.target_mean_degree >= 0.0) ||
        design.target_mean_degree >= static_cast<double>(design.n) - 1.0) {
        throw InvalidArgumentError("target mean degree must lie in [0, n - 1)");
    }

    std::mt19937_64 rng(design.seed);
    std::uniform_real_distribution<double> uniform(design.lower, design.upper);
    std::vector<double> x(design.n);
    for (double& v : x) v = uniform(rng);

    const double slope = std::log(design.beta1);
    const double n_real = static_cast<double>(design.n);
    const auto mean_degree = [&](double beta0) {
        double sum = 0.0;
        for (std::size_t i = 0; i < design.n; ++i) {
            for (std::size_t j = i + 1; j < design.n; ++j) {
                sum += expit(beta0 - slope * std::abs(x[i] - x[j]));
            }
        }
        return 2.0 * sum / n_real;
    };

    double lo = -30.0, hi = 30.0;
    if (mean_degree(lo) > design.target_mean_degree ||
        mean_degree(hi) < design.target_mean_degree) {
        throw RootBracketError("beta0 root is not bracketed by [-30, 30]");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_degree(mid) < design.target_mean_degree) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double beta0 = 0.5 * (lo + hi);
    if (std::abs(mean_degree(beta0) - design.target_mean_degree) > 1e-8) {
        throw RootBracketError("beta0 bisection failed to reach the target degree");
    }

    ProbabilityMatrix probs(design.n);
    auto out = probs.packed();
    std::size_t k = 0;
    for (std::size_t i = 0; i < design.n; ++i) {
        for (std::size_t j = i + 1; j < design.n; ++j, ++k) {
            out[k] = expit(beta0 - slope * std::abs(x[i] - x[j]));
        }
    }

    CovariateTable covariates(design.n);
    covariates.add_continuous("x", std::move(x));
    return ContinuousPopulation{std::move(probs), std::move(covariates), beta0};
}

Graph sample_graph(const ProbabilityMatrix& probabilities, std::uint64_t seed) {
    const std::size_t n = probabilities.dim();
    const auto p = probabilities.packed();
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InvalidArgumentError("linkage probabilities must lie in [0, 1]");
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<EdgePair> edges;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            if (uniform(rng) < p[k]) {
                edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
            }
        }
    }
    return Graph(n, std::move(edges));
}

Graph drop_edges_mcar(const Graph& graph, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw InvalidArgumentError("missing fraction must lie in [0, 1]");
    }
    std::vector<EdgePair> edges = graph.edges();
    const auto removed = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(edges.size())));
    std::mt19937_64 rng(seed);
    std::shuffle(edges.begin(), edges.end(), rng);
    edges.erase(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(removed));
    return Graph(graph.node_count(), std::move(edges));
}

std::vector<double> default_missing_fractions() {
    std::vector<double> fractions;
    for (int i = 0; i <= 20; ++i) fractions.push_back(0.045 * i);
    fractions.back() = 0.9;
    return fractions;
}

namespace {

struct Population {
    ProbabilityMatrix probabilities;
    CovariateTable covariates;
};

Population generate_population(const ExperimentDesign& design, std::uint64_t seed) {
    return std::visit(
        [&](auto d) -> Population {
            d.seed = seed;
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, SbmDesign>) {
                auto pop = sbm_probabilities(d);
                return {std::move(pop.probabilities), std::move(pop.covariates)};
            } else {
                auto pop = continuous_probabilities(d);
                return {std::move(pop.probabilities), std::move(pop.covariates)};
            }
        },
        design);
}

// Seed streams for the robustness protocol; cells are keyed by the
// fraction's bit pattern so a 0 fraction reproduces the reference run.
enum class Stream : std::uint64_t {
    population = 1,
    graph = 2,
    selection = 3,
    cov_layout = 4,
    fr_layout = 5,
    drop = 6,
};

std::uint64_t stream_seed(std::uint64_t base, int replicate, Stream stream, double fraction = 0.0) {
    return derive_seed(base, static_cast<std::uint64_t>(replicate) + 1,
                       static_cast<std::uint64_t>(stream), seed_bits(fraction));
}

struct ArmLayouts {
    Layout layout;
    double gamma = 0.0;
};

} // namespace

std::vector<RobustnessMean> summarize_robustness(const RobustnessCurves& curves) {
    std::vector<RobustnessMean> means;
    for (const std::string& arm : {std::string("covsmooth"), std::string("fr")}) {
        for (double fraction : curves.fractions) {
            RobustnessMean cell{arm, fraction, 0.0, 0};
            for (const RobustnessRow& row : curves.rows) {
                if (row.ok && row.arm == arm && row.fraction == fraction) {
                    cell.mean_disparity += row.disparity;
                    ++cell.count;
                }
            }
            if (cell.count > 0) cell.mean_disparity /= static_cast<double>(cell.count);
            means.push_back(std::move(cell));
        }
    }
    return means;
}

RobustnessCurves robustness_experiment(const ExperimentDesign& design,
                                       const RobustnessConfig& config) {
    if (config.replicates < 1) {
        throw InvalidArgumentError("robustness experiment needs at least one replicate");
    }
    if (config.fractions.empty()) {
        throw InvalidArgumentError("robustness experiment needs at least one missing fraction");
    }
    for (double f : config.fractions) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw InvalidArgumentError("missing fractions must lie in [0, 1]");
        }
    }

    const std::size_t per_replicate = config.fractions.size() * 2;
    RobustnessCurves curves;
    curves.fractions = config.fractions;
    curves.rows.assign(static_cast<std::size_t>(config.replicates) * per_replicate,
                       RobustnessRow{});

    parallel_for(static_cast<std::size_t>(config.replicates), [&](std::size_t rep_index) {
        const int rep = static_cast<int>(rep_index);
        RobustnessRow* rows = curves.rows.data() + rep_index * per_replicate;
        for (std::size_t fi = 0; fi < config.fractions.size(); ++fi) {
            rows[2 * fi].replicate = rep;
            rows[2 * fi].fraction = config.fractions[fi];
            rows[2 * fi].arm = "covsmooth";
            rows[2 * fi + 1].replicate = rep;
            rows[2 * fi + 1].fraction = config.fractions[fi];
            rows[2 * fi + 1].arm = "fr";
        }

        const auto fail_all = [&](const std::string& message) {
            for (std::size_t k = 0; k < per_replicate; ++k) {
                rows[k].ok = false;
                rows[k].error = message;
            }
        };

        try {
            const Population pop = generate_population(
                design, stream_seed(config.seed, rep, Stream::population));
            const Graph graph =
                sample_graph(pop.probabilities, stream_seed(config.seed, rep, Stream::graph));
            const DyadFeatureSpec spec = default_feature_spec(pop.covariates);
            const double side = std::sqrt(static_cast<double>(graph.node_count()));
            const Frame frame = config.frame.value_or(Frame{side, side});

            const auto covsmooth_arm = [&](const Graph& observed, double fraction) -> ArmLayouts {
                const DyadicModel model = fit_logistic(pop.covariates, spec, observed);
                const ProbabilityMatrix bhat = predict_probs(model, pop.covariates);
                double gamma = config.gamma.fixed;
                if (config.gamma.automatic) {
                    SelectionConfig sel;
                    sel.grid = uniform_gamma_grid(config.grid_size);
                    sel.replicates = config.selection_replicates;
                    sel.layout = config.layout;
                    sel.layout.frame = frame;
                    sel.layout.seed = stream_seed(config.seed, rep, Stream::selection, fraction);
                    gamma = psi_curves(observed, bhat, sel).selected_gamma;
                }
                LayoutConfig cfg = config.layout;
                cfg.frame = frame;
                cfg.gamma = gamma;
                cfg.seed = stream_seed(config.seed, rep, Stream::cov_layout, fraction);
                return {minimize_layout(observed, &bhat, cfg).layout, gamma};
            };
            const auto fr_arm = [&](const Graph& observed, double fraction) -> Layout {
                LayoutConfig cfg = config.layout;
                cfg.frame = frame;
                cfg.gamma = 0.0;
                cfg.seed = stream_seed(config.seed, rep, Stream::fr_layout, fraction);
                return minimize_layout(observed, nullptr, cfg).layout;
            };

            const ArmLayouts cov_reference = covsmooth_arm(graph, 0.0);
            const Layout fr_reference = fr_arm(graph, 0.0);

            for (std::size_t fi = 0; fi < config.fractions.size(); ++fi) {
                const double fraction = config.fractions[fi];
                RobustnessRow& cov_row = rows[2 * fi];
                RobustnessRow& fr_row = rows[2 * fi + 1];
                // A zero fraction reuses the reference run: the derived
                // seeds coincide, so recomputing would reproduce it anyway.
                try {
                    const ArmLayouts cov =
                        fraction == 0.0
                            ? cov_reference
                            : covsmooth_arm(
                                  drop_edges_mcar(graph, fraction,
                                                  stream_seed(config.seed, rep, Stream::drop,
                                                              fraction)),
                                  fraction);
                    cov_row.gamma = cov.gamma;
                    cov_row.disparity =
                        procrustes_disparity(cov_reference.layout, cov.layout).disparity;
                    cov_row.ok = true;
                } catch (const Error& err) {
                    cov_row.ok = false;
                    cov_row.error = err.what();
                }
                try {
                    const Layout fr =
                        fraction == 0.0
                            ? fr_reference
                            : fr_arm(drop_edges_mcar(graph, fraction,
                                                     stream_seed(config.seed, rep, Stream::drop,
                                                                 fraction)),
                                     fraction);
                    fr_row.gamma = 0.0;
                    fr_row.disparity = procrustes_disparity(fr_reference, fr).disparity;
                    fr_row.ok = true;
                } catch (const Error& err) {
                    fr_row.ok = false;
                    fr_row.error = err.what();
                }
            }
        } catch (const Error& err) {
            fail_all(err.what());
        }
    });

    return curves;
}

std::vector<GammaSweepCell> gamma_selection_sweep(const GammaSweepConfig& config) {
    if (config.replicates < 1) {
        throw InvalidArgumentError("gamma sweep needs at least one replicate");
    }
    for (const std::string& type : config.design_types) {
        if (type != "sbm2" && type != "sbm5" && type != "continuous") {
            throw InvalidArgumentError("unknown design type '" + type +
                                       "' (expected sbm2, sbm5, or continuous)");
        }
    }

    std::vector<GammaSweepCell> cells;
    for (const std::string& type : config.design_types) {
        for (std::size_t n : config.sizes) {
            for (double odds : config.odds) {
                GammaSweepCell cell;
                cell.design_type = type;
                cell.n = n;
                cell.odds = odds;
                cell.replicates = config.replicates;
                cell.selected.assign(static_cast<std::size_t>(config.replicates),
                                     std::numeric_limits<double>::quiet_NaN());
                cells.push_back(std::move(cell));
            }
        }
    }

    const std::size_t reps = static_cast<std::size_t>(config.replicates);
    std::vector<std::string> errors(cells.size() * reps);

    parallel_for(cells.size() * reps, [&](std::size_t index) {
        const std::size_t ci = index / reps;
        const std::size_t rep = index % reps;
        GammaSweepCell& cell = cells[ci];
        try {
            ExperimentDesign design;
            if (cell.design_type == "continuous") {
                design = ContinuousDesign{cell.n, cell.odds, config.target_mean_degree,
                                          0.0, 1.0, 0};
            } else {
                const std::size_t groups = cell.design_type == "sbm2" ? 2 : 5;
                design = SbmDesign{cell.n, groups, cell.odds, config.target_mean_degree, 0};
            }
            const Population pop =
                generate_population(design, derive_seed(config.seed, ci, rep, 1));
            const Graph graph =
                sample_graph(pop.probabilities, derive_seed(config.seed, ci, rep, 2));

            const DyadicModel model =
                fit_logistic(pop.covariates, default_feature_spec(pop.covariates), graph);
            const ProbabilityMatrix bhat = predict_probs(model, pop.covariates);

            const double side = std::sqrt(static_cast<double>(cell.n));
            SelectionConfig sel;
            sel.grid = uniform_gamma_grid(config.grid_size);
            sel.replicates = config.selection_replicates;
            sel.layout = config.layout;
            sel.layout.frame = config.frame.value_or(Frame{side, side});
            sel.layout.seed = derive_seed(config.seed, ci, rep, 3);
            cell.selected[rep] = psi_curves(graph, bhat, sel).selected_gamma;
        } catch (const Error& err) {
            errors[index] = err.what();
        }
    });

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        GammaSweepCell& cell = cells[ci];
        std::vector<double> ok;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            if (std::isnan(cell.selected[rep])) {
                if (cell.error.empty()) cell.error = errors[ci * reps + rep];
            } else {
                ok.push_back(cell.selected[rep]);
            }
        }
        cell.ok_count = ok.size();
        if (!ok.empty()) {
            cell.mean_gamma = mean(ok);
            if (ok.size() >= 2) {
                cell.sd_gamma = sample_sd(ok);
                cell.ci95_half_width =
                    1.96 * cell.sd_gamma / std::sqrt(static_cast<double>(ok.size()));
            }
        }
        cell.selected = std::move(ok);
    }
    return cells;
}

} // namespace covsmooth
