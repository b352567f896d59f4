#include "covsmooth/dyad_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "covsmooth/errors.hpp"
#include "covsmooth/math.hpp"

namespace covsmooth {

DyadFeatureSpec default_feature_spec(const CovariateTable& covariates) {
    DyadFeatureSpec spec;
    for (const auto& col : covariates.columns()) {
        const DyadEncoding enc = col.kind == ColumnKind::categorical
                                     ? DyadEncoding::same_category
                                     : DyadEncoding::abs_difference;
        spec.terms.push_back({col.name, enc});
    }
    return spec;
}

DyadDesign::DyadDesign(std::size_t node_count, std::size_t column_count, bool has_intercept)
    : n_nodes_(node_count), n_cols_(column_count), has_intercept_(has_intercept) {
    if (n_nodes_ < 2) {
        throw DegenerateInputError("dyad design needs at least two nodes");
    }
    values_.assign(pair_count() * n_cols_, 0.0);
}

DyadDesign build_dyad_features(const CovariateTable& covariates, const DyadFeatureSpec& spec) {
    const std::size_t n = covariates.node_count();
    std::vector<const CovariateColumn*> cols;
    cols.reserve(spec.terms.size());
    for (const auto& term : spec.terms) {
        const CovariateColumn* col = covariates.find(term.column);
        if (col == nullptr) {
            throw InvalidArgumentError("unknown covariate column '" + term.column + "'");
        }
        if (term.encoding == DyadEncoding::same_category && col->kind != ColumnKind::categorical) {
            throw InvalidArgumentError("same-category encoding needs a categorical column, '" +
                                       term.column + "' is continuous");
        }
        if (term.encoding == DyadEncoding::abs_difference && col->kind != ColumnKind::continuous) {
            throw InvalidArgumentError("absolute-difference encoding needs a continuous column, '" +
                                       term.column + "' is categorical");
        }
        cols.push_back(col);
    }

    const std::size_t n_cols = spec.terms.size() + (spec.include_intercept ? 1 : 0);
    if (n_cols == 0) {
        throw InvalidArgumentError("dyad model has no terms and no intercept");
    }
    DyadDesign design(n, n_cols, spec.include_intercept);

    std::size_t row = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++row) {
            std::size_t c = 0;
            if (spec.include_intercept) design.at(row, c++) = 1.0;
            for (std::size_t t = 0; t < cols.size(); ++t, ++c) {
                const CovariateColumn& col = *cols[t];
                if (spec.terms[t].encoding == DyadEncoding::same_category) {
                    design.at(row, c) = col.labels[i] == col.labels[j] ? 1.0 : 0.0;
                } else {
                    design.at(row, c) = std::abs(col.values[i] - col.values[j]);
                }
            }
        }
    }
    return design;
}

DyadicModel fit_logistic(const DyadDesign& design, const Graph& graph,
                         const FitOptions& options) {
    if (design.node_count() != graph.node_count()) {
        throw DimensionMismatchError("design is for " + std::to_string(design.node_count()) +
                                     " nodes, graph has " + std::to_string(graph.node_count()));
    }
    const std::size_t rows = design.pair_count();
    const std::size_t p = design.column_count();
    if (graph.edge_count() == 0 || graph.edge_count() == rows) {
        throw DegenerateResponseError(graph.edge_count() == 0
                                          ? "graph has no edges; response is all zero"
                                          : "graph is complete; response is all one");
    }

    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        x(design.values().data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));

    VectorXd y(rows);
    {
        const std::size_t n = design.node_count();
        std::size_t row = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j, ++row) {
                y(static_cast<Eigen::Index>(row)) =
                    graph.adjacency(static_cast<NodeId>(i), static_cast<NodeId>(j));
            }
        }
    }

    VectorXd beta = VectorXd::Zero(static_cast<Eigen::Index>(p));
    VectorXd mu(rows), weights(rows);
    MatrixXd info(p, p);
    bool converged = false;
    int iteration = 0;

    while (iteration < options.max_iterations) {
        ++iteration;
        const VectorXd eta = x * beta;
        for (Eigen::Index r = 0; r < mu.size(); ++r) {
            mu(r) = clamp_probability(expit(eta(r)));
            weights(r) = mu(r) * (1.0 - mu(r));
        }
        info.noalias() = x.transpose() * weights.asDiagonal() * x;
        const VectorXd score = x.transpose() * (y - mu);

        Eigen::FullPivLU<MatrixXd> lu(info);
        if (!lu.isInvertible()) {
            throw CollinearityError("singular information matrix; dyad features are collinear");
        }
        const VectorXd delta = lu.solve(score);
        beta += delta;

        if (beta.cwiseAbs().maxCoeff() > options.separation_guard) {
            throw SeparationError("coefficients diverged past " +
                                  std::to_string(options.separation_guard) +
                                  "; response is (quasi-)separated");
        }
        if (delta.cwiseAbs().maxCoeff() < options.tolerance) {
            converged = true;
            break;
        }
    }

    // Fisher information at the final coefficients for the standard errors.
    const VectorXd eta = x * beta;
    for (Eigen::Index r = 0; r < mu.size(); ++r) {
        mu(r) = clamp_probability(expit(eta(r)));
        weights(r) = mu(r) * (1.0 - mu(r));
    }
    info.noalias() = x.transpose() * weights.asDiagonal() * x;
    Eigen::FullPivLU<MatrixXd> lu(info);
    if (!lu.isInvertible()) {
        throw CollinearityError("singular information matrix at the fitted coefficients");
    }
    const MatrixXd covariance = lu.inverse();

    DyadicModel model;
    model.coefficients.assign(beta.data(), beta.data() + beta.size());
    model.standard_errors.resize(p);
    for (std::size_t k = 0; k < p; ++k) {
        model.standard_errors[k] = std::sqrt(covariance(static_cast<Eigen::Index>(k),
                                                        static_cast<Eigen::Index>(k)));
    }
    model.converged = converged;
    model.iterations = iteration;
    return model;
}

DyadicModel fit_logistic(const CovariateTable& covariates, const DyadFeatureSpec& spec,
                         const Graph& graph, const FitOptions& options) {
    DyadicModel model = fit_logistic(build_dyad_features(covariates, spec), graph, options);
    model.spec = spec;
    return model;
}

ProbabilityMatrix predict_probs(const DyadicModel& model, const CovariateTable& covariates) {
    if (!model.converged) {
        throw InvalidArgumentError("cannot predict from a model that did not converge");
    }
    const DyadDesign design = build_dyad_features(covariates, model.spec);
    if (design.column_count() != model.coefficients.size()) {
        throw DimensionMismatchError("model has " + std::to_string(model.coefficients.size()) +
                                     " coefficients, design has " +
                                     std::to_string(design.column_count()) + " columns");
    }

    ProbabilityMatrix probs(covariates.node_count());
    auto out = probs.packed();
    for (std::size_t row = 0; row < design.pair_count(); ++row) {
        double lp = 0.0;
        for (std::size_t c = 0; c < design.column_count(); ++c) {
            lp += design.at(row, c) * model.coefficients[c];
        }
        out[row] = clamp_probability(expit(lp));
    }
    return probs;
}

} // namespace covsmooth
