#include "covsmooth/covariates.hpp"

#include <cmath>

#include "covsmooth/errors.hpp"

namespace covsmooth {

std::string to_string(ColumnKind kind) {
    return kind == ColumnKind::categorical ? "categorical" : "continuous";
}

CovariateTable::CovariateTable(std::size_t node_count) : n_(node_count) {
    if (n_ < 1) {
        throw DegenerateInputError("covariate table needs at least one node");
    }
}

void CovariateTable::check_new_column(const std::string& name, std::size_t size) const {
    if (name.empty()) {
        throw InvalidArgumentError("covariate column name is empty");
    }
    if (find(name) != nullptr) {
        throw InvalidArgumentError("duplicate covariate column '" + name + "'");
    }
    if (size != n_) {
        throw DimensionMismatchError("column '" + name + "' has " + std::to_string(size) +
                                     " values, expected " + std::to_string(n_));
    }
}

void CovariateTable::add_categorical(std::string name, std::vector<std::string> labels) {
    check_new_column(name, labels.size());
    CovariateColumn col;
    col.name = std::move(name);
    col.kind = ColumnKind::categorical;
    col.labels = std::move(labels);
    columns_.push_back(std::move(col));
}

void CovariateTable::add_continuous(std::string name, std::vector<double> values) {
    check_new_column(name, values.size());
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidArgumentError("column '" + name + "' has a non-finite value");
        }
    }
    CovariateColumn col;
    col.name = std::move(name);
    col.kind = ColumnKind::continuous;
    col.values = std::move(values);
    columns_.push_back(std::move(col));
}

const CovariateColumn* CovariateTable::find(std::string_view name) const noexcept {
    for (const auto& col : columns_) {
        if (col.name == name) return &col;
    }
    return nullptr;
}

std::vector<std::string> CovariateTable::names() const {
    std::vector<std::string> result;
    result.reserve(columns_.size());
    for (const auto& col : columns_) result.push_back(col.name);
    return result;
}

} // namespace covsmooth
