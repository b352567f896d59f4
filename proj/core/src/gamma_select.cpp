#include "covsmooth/gamma_select.hpp"

#include <cmath>
#include <string>

#include "covsmooth/errors.hpp"
#include "covsmooth/math.hpp"
#include "covsmooth/parallel.hpp"
#include "covsmooth/rng.hpp"

namespace covsmooth {

double smoothing_metric(const DistanceMatrix& dist, const ProbabilityMatrix& bhat) {
    if (dist.dim() != bhat.dim()) {
        throw DimensionMismatchError("distance and probability matrices differ in dimension");
    }
    const SymMatrix dc = center_offdiag(dist);
    const SymMatrix bc = center_offdiag(bhat);
    const auto d = dc.packed();
    const auto b = bc.packed();
    double total = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) total += d[k] * b[k];
    return total;
}

double edge_metric(const DistanceMatrix& dist, const Graph& graph) {
    if (dist.dim() != graph.node_count()) {
        throw DimensionMismatchError("distance matrix and graph differ in dimension");
    }
    const SymMatrix dc = center_offdiag(dist);
    double total = 0.0;
    for (const auto& [i, j] : graph.edges()) total += dc(i, j);
    return total;
}

std::vector<double> standardize(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw DegenerateInputError("standardize needs at least two values");
    }
    const double m = mean(values);
    const double sd = sample_sd(values);
    if (sd == 0.0) {
        throw DegenerateVectorError("standardize input has zero variance");
    }
    std::vector<double> result(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) result[i] = (values[i] - m) / sd;
    return result;
}

std::vector<double> uniform_gamma_grid(std::size_t count) {
    if (count < 1) {
        throw InvalidArgumentError("gamma grid needs at least one value");
    }
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = 0.0;
        return grid;
    }
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = static_cast<double>(i) / static_cast<double>(count - 1);
    }
    grid.back() = 1.0;
    return grid;
}

namespace {

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw InvalidArgumentError("gamma grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
            throw InvalidArgumentError("gamma grid value outside [0, 1]");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidArgumentError("gamma grid must be strictly increasing");
        }
    }
}

// Standardizes one metric curve over the cells that completed; a
// degenerate (constant or too short) curve contributes zero.
void standardize_curve(std::vector<PsiCell>& row, double PsiCell::* raw, double PsiCell::* out) {
    std::vector<double> values;
    values.reserve(row.size());
    for (const PsiCell& cell : row) {
        if (cell.ok) values.push_back(cell.*raw);
    }
    std::vector<double> scaled;
    bool degenerate = false;
    try {
        scaled = standardize(values);
    } catch (const Error&) {
        degenerate = true;
    }
    std::size_t k = 0;
    for (PsiCell& cell : row) {
        if (cell.ok) cell.*out = degenerate ? 0.0 : scaled[k++];
    }
}

} // namespace

void aggregate_psi(GammaReport& report) {
    const std::size_t g = report.grid.size();
    const std::size_t v = report.replicates.size();
    report.median_psi.assign(g, 0.0);

    for (std::size_t gi = 0; gi < g; ++gi) {
        std::vector<double> values;
        values.reserve(v);
        std::size_t failures = 0;
        for (const auto& row : report.replicates) {
            if (row[gi].ok) {
                values.push_back(row[gi].psi);
            } else {
                ++failures;
            }
        }
        if (failures * 2 > v) {
            throw SelectionError("more than half the replicates failed at gamma = " +
                                 std::to_string(report.grid[gi]));
        }
        report.median_psi[gi] = median(std::move(values));
    }

    report.selected_index = 0;
    for (std::size_t gi = 1; gi < g; ++gi) {
        if (report.median_psi[gi] < report.median_psi[report.selected_index]) {
            report.selected_index = gi; // strict <: ties keep the smallest gamma
        }
    }
    report.selected_gamma = report.grid[report.selected_index];
}

GammaReport psi_curves(const Graph& graph, const ProbabilityMatrix& bhat,
                       const SelectionConfig& config) {
    validate_grid(config.grid);
    if (config.replicates < 1) {
        throw InvalidArgumentError("psi needs at least one replicate");
    }
    if (bhat.dim() != graph.node_count()) {
        throw DimensionMismatchError("probability matrix and graph differ in dimension");
    }

    const std::size_t g = config.grid.size();
    const std::size_t v = static_cast<std::size_t>(config.replicates);

    GammaReport report;
    report.grid = config.grid;
    report.base_seed = config.layout.seed;
    report.replicates.assign(v, std::vector<PsiCell>(g));

    // Salted so cell seeds cannot collide with the restart seeds
    // minimize_layout derives from the same base.
    const std::uint64_t psi_base = derive_seed(config.layout.seed, 0x70736963ULL);

    parallel_for(v * g, [&](std::size_t cell_index) {
        const std::size_t r = cell_index / g;
        const std::size_t gi = cell_index % g;
        PsiCell& cell = report.replicates[r][gi];
        cell.seed = derive_seed(psi_base, r, gi);
        try {
            LayoutConfig cfg = config.layout;
            cfg.gamma = config.grid[gi];
            cfg.seed = cell.seed;
            cfg.restarts = 1; // the median across replicates supplies the robustness
            const LayoutResult run = minimize_layout(graph, &bhat, cfg);
            const DistanceMatrix dist = pairwise_distances(run.layout);
            cell.m = smoothing_metric(dist, bhat);
            cell.e = edge_metric(dist, graph);
            cell.ok = true;
        } catch (const Error& err) {
            cell.ok = false;
            cell.error = err.what();
        }
    });

    for (auto& row : report.replicates) {
        standardize_curve(row, &PsiCell::m, &PsiCell::m_s);
        standardize_curve(row, &PsiCell::e, &PsiCell::e_s);
        for (PsiCell& cell : row) {
            if (cell.ok) cell.psi = cell.m_s + cell.e_s;
        }
    }

    aggregate_psi(report);
    return report;
}

} // namespace covsmooth
