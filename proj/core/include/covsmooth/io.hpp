#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covsmooth/covariates.hpp"
#include "covsmooth/experiments.hpp"
#include "covsmooth/gamma_select.hpp"
#include "covsmooth/graph.hpp"
#include "covsmooth/layout.hpp"

namespace covsmooth {

/// Graph parsed from an edge-list file plus the node-name index. When
/// every endpoint token in the file is a nonnegative integer the tokens
/// are taken as dense 0-based ids; otherwise names are mapped to dense
/// ids in first-appearance order.
struct NamedGraph {
    Graph graph;
    std::vector<std::string> names; // names[id]; equals the id string in id mode
    bool integer_ids = true;

    std::optional<NodeId> id_of(const std::string& name) const;
};

/// Edge-list format: one edge per line as "a b", '#' lines and blank
/// lines ignored; "a b" and "b a" collapse to one undirected edge.
NamedGraph read_edge_list(const std::filesystem::path& path);
NamedGraph parse_edge_list(std::istream& in, const std::string& filename);

using SchemaMap = std::map<std::string, ColumnKind>;

/// Parses "col=categorical,col2=continuous" (kinds may be abbreviated to
/// "cat" / "cont").
SchemaMap parse_schema_flag(const std::string& flag);

/// Covariate file: delimited text (comma, tab, or spaces) with a header
/// row; the first column is the node id or name. Column kinds come from a
/// "#kinds: ..." sidecar line after the header or from `schema`
/// (the flag wins when both are present). Exactly one row per node of
/// `nodes` is required; rows are reordered to node-id order.
CovariateTable read_covariates(const std::filesystem::path& path, const NamedGraph& nodes,
                               const std::optional<SchemaMap>& schema = std::nullopt);
CovariateTable parse_covariates(std::istream& in, const std::string& filename,
                                const NamedGraph& nodes,
                                const std::optional<SchemaMap>& schema = std::nullopt);

/// Layout file: "# key value" metadata header (frame, gamma, seed,
/// energy, converged), then one "id x y" row per node with coordinates at
/// 17 significant digits so round-trips are exact.
struct LayoutFileData {
    Layout layout;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    double energy = 0.0;
    bool converged = false;
};

void write_layout_file(const std::filesystem::path& path, const LayoutFileData& data);
LayoutFileData read_layout_file(const std::filesystem::path& path);

/// Node-name sidecar ("id name" per line), written next to a layout when
/// the edge list used names.
void write_name_map(const std::filesystem::path& path, const std::vector<std::string>& names);

/// Gamma report: "# key value" header (base seed, selected gamma,
/// per-gamma medians) followed by one CSV row per replicate x gamma with
/// m, e, m^S, e^S, psi columns.
void write_gamma_report(std::ostream& out, const GammaReport& report);
void write_gamma_report(const std::filesystem::path& path, const GammaReport& report);

/// Robustness rows: CSV "replicate,fraction,arm,gamma,disparity,ok,error".
void write_robustness_rows(const std::filesystem::path& path, const RobustnessCurves& curves);
/// Mean curves: CSV "arm,fraction,mean_disparity,count".
void write_robustness_summary(const std::filesystem::path& path, const RobustnessCurves& curves);

/// Gamma sweep table: CSV with one row per (design type, n, odds) cell.
void write_gamma_sweep(const std::filesystem::path& path,
                       const std::vector<GammaSweepCell>& cells);
/// Raw sweep rows: CSV "design,n,odds,replicate,gamma".
void write_gamma_sweep_raw(const std::filesystem::path& path,
                           const std::vector<GammaSweepCell>& cells);

/// Whole-file atomic write: contents go to a temporary file in the target
/// directory which is then renamed over the destination.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

/// 17-significant-digit decimal form; round-trips through strtod exactly.
std::string format_double(double value);

} // namespace covsmooth
