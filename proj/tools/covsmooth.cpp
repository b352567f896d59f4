// covsmooth: covariate-smoothed force-directed graph layout.
//
// Subcommands:
//   layout      lay out a graph, optionally smoothing by fitted dyad
//               probabilities with a fixed or auto-selected gamma
//   render      draw a stored layout to SVG
//   simulate    gamma-selection sweep over simulated designs
//   robustness  missing-edge robustness curves (covsmooth vs plain FR)

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "covsmooth/covariates.hpp"
#include "covsmooth/dyad_model.hpp"
#include "covsmooth/errors.hpp"
#include "covsmooth/experiments.hpp"
#include "covsmooth/gamma_select.hpp"
#include "covsmooth/io.hpp"
#include "covsmooth/layout_engine.hpp"
#include "covsmooth/svg.hpp"

namespace {

using namespace covsmooth;

struct LayoutArgs {
    std::string edges;
    std::string covariates;
    std::string schema;
    std::vector<std::string> terms;
    std::string gamma = "auto";
    std::size_t grid_size = 20;
    int replicates_v = 50;
    int restarts = 5;
    int max_iterations = 500;
    double tolerance = 1e-4;
    std::uint64_t seed = 0;
    std::vector<double> frame; // empty: sqrt(n) x sqrt(n)
    std::string out;
    std::string report;
};

struct RenderArgs {
    std::string layout;
    std::string edges;
    std::string covariates;
    std::string schema;
    std::string color_by;
    double width = 800.0;
    std::string out;
};

struct SimulateArgs {
    std::vector<double> frame; // empty: sqrt(n) x sqrt(n)
    std::vector<std::string> types{"sbm2", "sbm5", "continuous"};
    std::vector<std::size_t> sizes{20, 50, 100, 200};
    std::vector<double> odds{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    int replicates = 100;
    int replicates_v = 50;
    std::size_t grid_size = 20;
    int max_iterations = 500;
    double target_degree = 5.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string raw;
};

struct RobustnessArgs {
    std::vector<double> frame; // empty: sqrt(n) x sqrt(n)
    std::string design = "continuous";
    std::size_t groups = 2;
    std::size_t n = 100;
    double odds = 1.0;
    std::vector<double> fractions;
    int replicates = 100;
    std::string gamma = "auto";
    std::size_t grid_size = 20;
    int replicates_v = 50;
    int restarts = 5;
    int max_iterations = 500;
    double target_degree = 5.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string summary;
};

double parse_gamma_value(const std::string& text) {
    try {
        std::size_t consumed = 0;
        const double value = std::stod(text, &consumed);
        if (consumed != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw InvalidArgumentError("--gamma expects a number in [0, 1] or 'auto', got '" + text +
                                   "'");
    }
}

std::optional<SchemaMap> schema_from_flag(const std::string& flag) {
    if (flag.empty()) return std::nullopt;
    return parse_schema_flag(flag);
}

DyadFeatureSpec spec_for(const CovariateTable& covariates, const std::vector<std::string>& terms) {
    if (terms.empty()) return default_feature_spec(covariates);
    DyadFeatureSpec spec;
    for (const std::string& name : terms) {
        const CovariateColumn* col = covariates.find(name);
        if (col == nullptr) {
            throw InvalidArgumentError("--terms names unknown column '" + name + "'");
        }
        spec.terms.push_back({name, col->kind == ColumnKind::categorical
                                        ? DyadEncoding::same_category
                                        : DyadEncoding::abs_difference});
    }
    return spec;
}

int run_layout(const LayoutArgs& args) {
    const NamedGraph named = read_edge_list(args.edges);

    std::optional<CovariateTable> covariates;
    if (!args.covariates.empty()) {
        covariates = read_covariates(args.covariates, named, schema_from_flag(args.schema));
    }

    LayoutConfig config;
    config.max_iterations = args.max_iterations;
    config.tolerance = args.tolerance;
    config.restarts = args.restarts;
    if (args.frame.empty()) {
        const double side = std::sqrt(static_cast<double>(named.graph.node_count()));
        config.frame = Frame{side, side};
    } else {
        config.frame = Frame{args.frame.at(0), args.frame.at(1)};
    }
    config.seed = args.seed;

    const bool automatic = args.gamma == "auto";
    double gamma = automatic ? 0.0 : parse_gamma_value(args.gamma);
    if ((automatic || gamma > 0.0) && !covariates.has_value()) {
        throw InvalidArgumentError("smoothing requires covariates: pass --covariates or --gamma 0");
    }

    std::optional<ProbabilityMatrix> bhat;
    if (automatic || gamma > 0.0) {
        const DyadFeatureSpec spec = spec_for(*covariates, args.terms);
        const DyadicModel model = fit_logistic(*covariates, spec, named.graph);
        bhat = predict_probs(model, *covariates);
    }

    if (automatic) {
        SelectionConfig sel;
        sel.grid = uniform_gamma_grid(args.grid_size);
        sel.replicates = args.replicates_v;
        sel.layout = config;
        const GammaReport report = psi_curves(named.graph, *bhat, sel);
        gamma = report.selected_gamma;
        const std::string report_path =
            args.report.empty() ? args.out + ".gamma.csv" : args.report;
        write_gamma_report(std::filesystem::path(report_path), report);
        std::cout << "selected gamma " << format_double(gamma) << " (report: " << report_path
                  << ")\n";
    }

    config.gamma = gamma;
    const LayoutResult result =
        minimize_layout(named.graph, bhat.has_value() ? &*bhat : nullptr, config);

    const LayoutFileData data{result.layout, gamma, args.seed, result.energy, result.converged};
    write_layout_file(args.out, data);
    if (!named.integer_ids) {
        write_name_map(args.out + ".names", named.names);
    }
    std::cout << "layout written to " << args.out << " (energy " << format_double(result.energy)
              << ", " << (result.converged ? "converged" : "not converged") << ")\n";
    return 0;
}

int run_render(const RenderArgs& args) {
    const LayoutFileData data = read_layout_file(args.layout);
    const NamedGraph named = read_edge_list(args.edges);
    if (named.graph.node_count() != data.layout.node_count()) {
        throw DimensionMismatchError("layout has " + std::to_string(data.layout.node_count()) +
                                     " nodes, edge list has " +
                                     std::to_string(named.graph.node_count()));
    }

    std::optional<CovariateTable> covariates;
    if (!args.covariates.empty()) {
        covariates = read_covariates(args.covariates, named, schema_from_flag(args.schema));
    }
    if (!args.color_by.empty() && !covariates.has_value()) {
        throw InvalidArgumentError("--color-by requires --covariates");
    }

    RenderOptions options;
    options.width_px = args.width;
    options.color_by = args.color_by;
    const std::string svg = render_svg(data.layout, named.graph,
                                       covariates.has_value() ? &*covariates : nullptr, options);
    atomic_write(args.out, svg);
    std::cout << "svg written to " << args.out << "\n";
    return 0;
}

int run_simulate(const SimulateArgs& args) {
    GammaSweepConfig config;
    config.design_types = args.types;
    config.sizes = args.sizes;
    config.odds = args.odds;
    config.target_mean_degree = args.target_degree;
    config.replicates = args.replicates;
    config.grid_size = args.grid_size;
    config.selection_replicates = args.replicates_v;
    config.layout.max_iterations = args.max_iterations;
    if (!args.frame.empty()) config.frame = Frame{args.frame.at(0), args.frame.at(1)};
    config.seed = args.seed;

    std::vector<GammaSweepCell> cells = gamma_selection_sweep(config);
    write_gamma_sweep(args.out, cells);
    if (!args.raw.empty()) {
        write_gamma_sweep_raw(args.raw, cells);
    }

    std::size_t failed_cells = 0;
    for (const GammaSweepCell& cell : cells) {
        if (cell.ok_count == 0) ++failed_cells;
    }
    std::cout << "gamma sweep written to " << args.out << " (" << cells.size() << " cells";
    if (failed_cells > 0) std::cout << ", " << failed_cells << " infeasible";
    std::cout << ")\n";
    return 0;
}

int run_robustness(const RobustnessArgs& args) {
    ExperimentDesign design;
    if (args.design == "continuous") {
        design = ContinuousDesign{args.n, args.odds, args.target_degree, 0.0, 1.0, 0};
    } else if (args.design == "sbm") {
        design = SbmDesign{args.n, args.groups, args.odds, args.target_degree, 0};
    } else {
        throw InvalidArgumentError("--design must be 'sbm' or 'continuous', got '" + args.design +
                                   "'");
    }

    RobustnessConfig config;
    if (!args.fractions.empty()) config.fractions = args.fractions;
    config.replicates = args.replicates;
    if (args.gamma == "auto") {
        config.gamma.automatic = true;
    } else {
        config.gamma.automatic = false;
        config.gamma.fixed = parse_gamma_value(args.gamma);
    }
    config.grid_size = args.grid_size;
    config.selection_replicates = args.replicates_v;
    config.layout.max_iterations = args.max_iterations;
    config.layout.restarts = args.restarts;
    if (!args.frame.empty()) config.frame = Frame{args.frame.at(0), args.frame.at(1)};
    config.seed = args.seed;

    const RobustnessCurves curves = robustness_experiment(design, config);
    write_robustness_rows(args.out, curves);
    if (!args.summary.empty()) {
        write_robustness_summary(args.summary, curves);
    }
    std::cout << "robustness curves written to " << args.out << " (" << curves.rows.size()
              << " rows)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covariate-smoothed force-directed graph layout"};
    app.require_subcommand(1);

    LayoutArgs layout_args;
    CLI::App* layout = app.add_subcommand("layout", "Lay out a graph");
    layout->add_option("--edges", layout_args.edges, "Edge list file")->required();
    layout->add_option("--covariates", layout_args.covariates, "Covariate file");
    layout->add_option("--schema", layout_args.schema,
                       "Column kinds, e.g. grade=categorical,age=continuous");
    layout->add_option("--terms", layout_args.terms, "Covariate columns for the dyad model")
        ->delimiter(',');
    layout->add_option("--gamma", layout_args.gamma, "Smoothing weight in [0, 1], or 'auto'");
    layout->add_option("--grid-size", layout_args.grid_size, "Gamma grid size for auto selection");
    layout->add_option("--replicates-v", layout_args.replicates_v,
                       "Psi replicates per gamma (auto selection)");
    layout->add_option("--restarts", layout_args.restarts, "Independent descents, keep best");
    layout->add_option("--max-iterations", layout_args.max_iterations, "Descent iteration cap");
    layout->add_option("--tolerance", layout_args.tolerance, "Gradient norm for convergence");
    layout->add_option("--seed", layout_args.seed, "RNG seed");
    layout->add_option("--frame", layout_args.frame,
                       "Frame width and height (default: sqrt(n) x sqrt(n))")
        ->expected(2);
    layout->add_option("--out", layout_args.out, "Layout file to write")->required();
    layout->add_option("--report", layout_args.report,
                       "Gamma report path (auto mode; default <out>.gamma.csv)");

    RenderArgs render_args;
    CLI::App* render = app.add_subcommand("render", "Render a layout to SVG");
    render->add_option("--layout", render_args.layout, "Layout file")->required();
    render->add_option("--edges", render_args.edges, "Edge list file")->required();
    render->add_option("--covariates", render_args.covariates, "Covariate file");
    render->add_option("--schema", render_args.schema, "Column kinds");
    render->add_option("--color-by", render_args.color_by, "Covariate column to color nodes by");
    render->add_option("--width", render_args.width, "Plot width in pixels");
    render->add_option("--out", render_args.out, "SVG file to write")->required();

    SimulateArgs simulate_args;
    CLI::App* simulate = app.add_subcommand("simulate", "Gamma-selection sweep");
    simulate->add_option("--types", simulate_args.types, "Designs: sbm2, sbm5, continuous")
        ->delimiter(',');
    simulate->add_option("--sizes", simulate_args.sizes, "Node counts")->delimiter(',');
    simulate->add_option("--odds", simulate_args.odds, "Within/between odds ratios")
        ->delimiter(',');
    simulate->add_option("--replicates", simulate_args.replicates, "Replicates per cell");
    simulate->add_option("--replicates-v", simulate_args.replicates_v, "Psi replicates (v)");
    simulate->add_option("--grid-size", simulate_args.grid_size, "Gamma grid size");
    simulate->add_option("--max-iterations", simulate_args.max_iterations,
                         "Descent iteration cap");
    simulate->add_option("--target-degree", simulate_args.target_degree, "Mean expected degree");
    simulate->add_option("--frame", simulate_args.frame,
                         "Frame width and height (default: sqrt(n) x sqrt(n))")
        ->expected(2);
    simulate->add_option("--seed", simulate_args.seed, "RNG seed");
    simulate->add_option("--out", simulate_args.out, "Summary table to write")->required();
    simulate->add_option("--raw", simulate_args.raw, "Optional per-replicate table");

    RobustnessArgs robustness_args;
    CLI::App* robustness = app.add_subcommand("robustness", "Missing-edge robustness curves");
    robustness->add_option("--design", robustness_args.design, "'sbm' or 'continuous'");
    robustness->add_option("--groups", robustness_args.groups, "SBM group count");
    robustness->add_option("--n", robustness_args.n, "Node count");
    robustness->add_option("--odds", robustness_args.odds, "Within/between odds ratio");
    robustness->add_option("--fractions", robustness_args.fractions, "Missing-edge fractions")
        ->delimiter(',');
    robustness->add_option("--replicates", robustness_args.replicates, "Replicates");
    robustness->add_option("--gamma", robustness_args.gamma,
                           "Covsmooth arm gamma: value or 'auto'");
    robustness->add_option("--grid-size", robustness_args.grid_size, "Gamma grid size");
    robustness->add_option("--replicates-v", robustness_args.replicates_v, "Psi replicates (v)");
    robustness->add_option("--restarts", robustness_args.restarts, "Layout restarts");
    robustness->add_option("--max-iterations", robustness_args.max_iterations,
                           "Descent iteration cap");
    robustness->add_option("--target-degree", robustness_args.target_degree,
                           "Mean expected degree");
    robustness->add_option("--frame", robustness_args.frame,
                           "Frame width and height (default: sqrt(n) x sqrt(n))")
        ->expected(2);
    robustness->add_option("--seed", robustness_args.seed, "RNG seed");
    robustness->add_option("--out", robustness_args.out, "Per-cell rows to write")->required();
    robustness->add_option("--summary", robustness_args.summary, "Optional mean-curve table");

    try {
        app.parse(argc, argv);
        if (layout->parsed()) return run_layout(layout_args);
        if (render->parsed()) return run_render(render_args);
        if (simulate->parsed()) {
            for (auto& type : simulate_args.types) {
                if (type != "sbm2" && type != "sbm5" && type != "continuous") {
                    throw InvalidArgumentError("--types accepts sbm2, sbm5, continuous; got '" +
                                               type + "'");
                }
            }
            return run_simulate(simulate_args);
        }
        if (robustness->parsed()) return run_robustness(robustness_args);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help and friends
        }
        std::cerr << "error: usage: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
