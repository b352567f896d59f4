#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace covsmooth {

enum class ColumnKind { categorical, continuous };

std::string to_string(ColumnKind kind);

struct CovariateColumn {
    std::string name;
    ColumnKind kind = ColumnKind::continuous;
    std::vector<std::string> labels; // categorical: one label per node
    std::vector<double> values;      // continuous: one finite value per node
};

/// n x p nodal feature table. Each column is either categorical (finite
/// label set) or continuous (finite reals). Immutable once populated.
class CovariateTable {
public:
    explicit CovariateTable(std::size_t node_count);

    void add_categorical(std::string name, std::vector<std::string> labels);
    void add_continuous(std::string name, std::vector<double> values);

    std::size_t node_count() const noexcept { return n_; }
    std::size_t column_count() const noexcept { return columns_.size(); }
    const CovariateColumn& column(std::size_t index) const { return columns_.at(index); }
    const std::vector<CovariateColumn>& columns() const noexcept { return columns_; }

    /// nullptr when no column has this name.
    const CovariateColumn* find(std::string_view name) const noexcept;

    std::vector<std::string> names() const;

private:
    void check_new_column(const std::string& name, std::size_t size) const;

    std::size_t n_;
    std::vector<CovariateColumn> columns_;
};

} // namespace covsmooth
