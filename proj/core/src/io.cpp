#include "covsmooth/io.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "covsmooth/errors.hpp"

namespace covsmooth {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

std::vector<std::string> split_whitespace(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

std::vector<std::string> split_on(const std::string& line, char delim) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : line) {
        if (c == delim) {
            tokens.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    tokens.push_back(trim(current));
    return tokens;
}

bool parse_u64(const std::string& token, std::uint64_t& out) {
    if (token.empty()) return false;
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(token.c_str(), &end, 10);
    if (errno != 0 || end != token.c_str() + token.size()) return false;
    out = value;
    return true;
}

bool parse_double(const std::string& token, double& out) {
    if (token.empty()) return false;
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (errno == ERANGE || end != token.c_str() + token.size()) return false;
    out = value;
    return true;
}

bool is_integer_token(const std::string& token) {
    if (token.empty()) return false;
    for (char c : token) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    std::uint64_t value = 0;
    return parse_u64(token, value) && value <= 0xffffffffULL;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

} // namespace

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out.good()) {
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("failed to move '" + tmp.string() + "' to '" + path.string() +
                      "': " + ec.message());
    }
}

std::optional<NodeId> NamedGraph::id_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<NodeId>(i);
    }
    return std::nullopt;
}

NamedGraph parse_edge_list(std::istream& in, const std::string& filename) {
    struct RawEdge {
        std::string a, b;
        std::size_t line;
    };
    std::vector<RawEdge> raw;
    bool all_integers = true;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::vector<std::string> tokens = split_whitespace(stripped);
        if (tokens.size() != 2) {
            throw ParseError(filename, line_number,
                             "expected two endpoints, got " + std::to_string(tokens.size()));
        }
        if (tokens[0] == tokens[1]) {
            throw ParseError(filename, line_number, "self-loop on '" + tokens[0] + "'");
        }
        all_integers = all_integers && is_integer_token(tokens[0]) && is_integer_token(tokens[1]);
        raw.push_back({tokens[0], tokens[1], line_number});
    }
    if (raw.empty()) {
        throw ParseError(filename + ": no edges found");
    }

    NamedGraph result{Graph(1, {}), {}, all_integers};
    std::vector<EdgePair> edges;
    edges.reserve(raw.size());

    if (all_integers) {
        std::uint64_t max_id = 0;
        for (const RawEdge& e : raw) {
            std::uint64_t a = 0, b = 0;
            parse_u64(e.a, a);
            parse_u64(e.b, b);
            max_id = std::max({max_id, a, b});
            edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
        }
        const std::size_t n = static_cast<std::size_t>(max_id) + 1;
        result.names.resize(n);
        for (std::size_t i = 0; i < n; ++i) result.names[i] = std::to_string(i);
        result.graph = Graph(n, std::move(edges));
    } else {
        std::unordered_map<std::string, NodeId> index;
        const auto id_for = [&](const std::string& name) {
            auto [it, inserted] = index.emplace(name, static_cast<NodeId>(result.names.size()));
            if (inserted) result.names.push_back(name);
            return it->second;
        };
        for (const RawEdge& e : raw) {
            const NodeId a = id_for(e.a);
            const NodeId b = id_for(e.b);
            edges.emplace_back(a, b);
        }
        result.graph = Graph(result.names.size(), std::move(edges));
    }
    return result;
}

NamedGraph read_edge_list(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    return parse_edge_list(in, path.string());
}

SchemaMap parse_schema_flag(const std::string& flag) {
    SchemaMap schema;
    for (const std::string& entry : split_on(flag, ',')) {
        if (entry.empty()) continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgumentError("schema entry '" + entry + "' is not name=kind");
        }
        const std::string name = trim(entry.substr(0, eq));
        const std::string kind = trim(entry.substr(eq + 1));
        if (name.empty()) {
            throw InvalidArgumentError("schema entry '" + entry + "' has an empty column name");
        }
        if (kind == "categorical" || kind == "cat") {
            schema[name] = ColumnKind::categorical;
        } else if (kind == "continuous" || kind == "cont") {
            schema[name] = ColumnKind::continuous;
        } else {
            throw InvalidArgumentError("unknown column kind '" + kind +
                                       "' (expected categorical or continuous)");
        }
    }
    if (schema.empty()) {
        throw InvalidArgumentError("schema flag is empty");
    }
    return schema;
}

namespace {

ColumnKind parse_kind_token(const std::string& token, const std::string& filename,
                            std::size_t line) {
    if (token == "categorical" || token == "cat") return ColumnKind::categorical;
    if (token == "continuous" || token == "cont") return ColumnKind::continuous;
    throw ParseError(filename, line,
                     "unknown column kind '" + token + "' (expected categorical or continuous)");
}

} // namespace

CovariateTable parse_covariates(std::istream& in, const std::string& filename,
                                const NamedGraph& nodes,
                                const std::optional<SchemaMap>& schema) {
    struct Row {
        std::vector<std::string> tokens;
        std::size_t line;
    };

    std::string line;
    std::size_t line_number = 0;
    std::vector<std::string> header;
    std::vector<std::string> sidecar_kinds;
    std::size_t sidecar_line = 0;
    char delim = ' ';
    std::vector<Row> rows;

    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped[0] == '#') {
            if (stripped.rfind("#kinds:", 0) == 0) {
                const std::string rest = trim(stripped.substr(7));
                sidecar_kinds = rest.find(',') != std::string::npos ? split_on(rest, ',')
                                                                    : split_whitespace(rest);
                sidecar_line = line_number;
            }
            continue;
        }
        if (header.empty()) {
            if (stripped.find(',') != std::string::npos) {
                delim = ',';
            } else if (stripped.find('\t') != std::string::npos) {
                delim = '\t';
            }
            header = delim == ' ' ? split_whitespace(stripped) : split_on(stripped, delim);
            if (header.size() < 2) {
                throw ParseError(filename, line_number,
                                 "header needs an id column and at least one covariate");
            }
            continue;
        }
        Row row;
        row.tokens = delim == ' ' ? split_whitespace(stripped) : split_on(stripped, delim);
        row.line = line_number;
        if (row.tokens.size() != header.size()) {
            throw ParseError(filename, line_number,
                             "expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(row.tokens.size()));
        }
        rows.push_back(std::move(row));
    }
    if (header.empty()) {
        throw ParseError(filename + ": missing header row");
    }

    const std::size_t n = nodes.graph.node_count();
    const std::size_t n_cols = header.size() - 1;

    // Column kinds: the schema flag wins, then the "#kinds:" sidecar line.
    std::vector<ColumnKind> kinds(n_cols);
    if (schema.has_value()) {
        SchemaMap remaining = *schema;
        for (std::size_t c = 0; c < n_cols; ++c) {
            const auto it = remaining.find(header[c + 1]);
            if (it == remaining.end()) {
                throw InvalidArgumentError("schema does not type column '" + header[c + 1] + "'");
            }
            kinds[c] = it->second;
            remaining.erase(it);
        }
        if (!remaining.empty()) {
            throw InvalidArgumentError("schema names unknown column '" + remaining.begin()->first +
                                       "'");
        }
    } else if (!sidecar_kinds.empty()) {
        if (sidecar_kinds.size() != n_cols) {
            throw ParseError(filename, sidecar_line,
                             "#kinds: lists " + std::to_string(sidecar_kinds.size()) +
                                 " kinds for " + std::to_string(n_cols) + " covariate columns");
        }
        for (std::size_t c = 0; c < n_cols; ++c) {
            kinds[c] = parse_kind_token(sidecar_kinds[c], filename, sidecar_line);
        }
    } else {
        throw InvalidArgumentError(
            "column kinds not specified: pass a schema or add a '#kinds:' line after the header");
    }

    std::unordered_map<std::string, NodeId> index;
    index.reserve(n);
    for (std::size_t i = 0; i < n; ++i) index.emplace(nodes.names[i], static_cast<NodeId>(i));

    std::vector<std::size_t> row_of_node(n, static_cast<std::size_t>(-1));
    std::vector<bool> seen(n, false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto it = index.find(rows[r].tokens[0]);
        if (it == index.end()) {
            throw ParseError(filename, rows[r].line,
                             "node '" + rows[r].tokens[0] + "' is not in the edge list");
        }
        if (seen[it->second]) {
            throw ParseError(filename, rows[r].line,
                             "duplicate covariate row for node '" + rows[r].tokens[0] + "'");
        }
        seen[it->second] = true;
        row_of_node[it->second] = r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!seen[i]) {
            throw ParseError(filename + ": missing covariate row for node '" + nodes.names[i] +
                             "'");
        }
    }

    CovariateTable table(n);
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (kinds[c] == ColumnKind::categorical) {
            std::vector<std::string> labels(n);
            for (std::size_t i = 0; i < n; ++i) labels[i] = rows[row_of_node[i]].tokens[c + 1];
            table.add_categorical(header[c + 1], std::move(labels));
        } else {
            std::vector<double> values(n);
            for (std::size_t i = 0; i < n; ++i) {
                const Row& row = rows[row_of_node[i]];
                if (!parse_double(row.tokens[c + 1], values[i])) {
                    throw ParseError(filename, row.line,
                                     "column '" + header[c + 1] + "': '" + row.tokens[c + 1] +
                                         "' is not a finite number");
                }
            }
            table.add_continuous(header[c + 1], std::move(values));
        }
    }
    return table;
}

CovariateTable read_covariates(const std::filesystem::path& path, const NamedGraph& nodes,
                               const std::optional<SchemaMap>& schema) {
    std::ifstream in = open_input(path);
    return parse_covariates(in, path.string(), nodes, schema);
}

void write_layout_file(const std::filesystem::path& path, const LayoutFileData& data) {
    std::ostringstream out;
    const Layout& layout = data.layout;
    out << "# covsmooth-layout v1\n";
    out << "# n " << layout.node_count() << "\n";
    out << "# frame " << format_double(layout.frame().width) << ' '
        << format_double(layout.frame().height) << "\n";
    out << "# gamma " << format_double(data.gamma) << "\n";
    out << "# seed " << data.seed << "\n";
    out << "# energy " << format_double(data.energy) << "\n";
    out << "# converged " << (data.converged ? 1 : 0) << "\n";
    out << "id x y\n";
    for (std::size_t i = 0; i < layout.node_count(); ++i) {
        out << i << ' ' << format_double(layout.at(i).x) << ' ' << format_double(layout.at(i).y)
            << "\n";
    }
    atomic_write(path, out.str());
}

LayoutFileData read_layout_file(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    const std::string filename = path.string();

    std::size_t n = 0;
    bool have_n = false;
    Frame frame;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    double energy = 0.0;
    bool converged = false;
    std::vector<Point> coords;
    std::vector<bool> filled;
    bool header_seen = false;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped[0] == '#') {
            const std::vector<std::string> tokens = split_whitespace(stripped.substr(1));
            if (tokens.empty()) continue;
            const std::string& key = tokens[0];
            const auto need = [&](std::size_t count) {
                if (tokens.size() != count + 1) {
                    throw ParseError(filename, line_number, "malformed '" + key + "' header");
                }
            };
            if (key == "n") {
                need(1);
                std::uint64_t value = 0;
                if (!parse_u64(tokens[1], value) || value == 0) {
                    throw ParseError(filename, line_number, "invalid node count");
                }
                n = static_cast<std::size_t>(value);
                have_n = true;
                coords.assign(n, Point{});
                filled.assign(n, false);
            } else if (key == "frame") {
                need(2);
                if (!parse_double(tokens[1], frame.width) ||
                    !parse_double(tokens[2], frame.height)) {
                    throw ParseError(filename, line_number, "invalid frame");
                }
            } else if (key == "gamma") {
                need(1);
                if (!parse_double(tokens[1], gamma)) {
                    throw ParseError(filename, line_number, "invalid gamma");
                }
            } else if (key == "seed") {
                need(1);
                if (!parse_u64(tokens[1], seed)) {
                    throw ParseError(filename, line_number, "invalid seed");
                }
            } else if (key == "energy") {
                need(1);
                if (!parse_double(tokens[1], energy)) {
                    throw ParseError(filename, line_number, "invalid energy");
                }
            } else if (key == "converged") {
                need(1);
                converged = tokens[1] == "1";
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true; // "id x y" column header
            continue;
        }
        if (!have_n) {
            throw ParseError(filename, line_number, "coordinate row before '# n' header");
        }
        const std::vector<std::string> tokens = split_whitespace(stripped);
        if (tokens.size() != 3) {
            throw ParseError(filename, line_number, "expected 'id x y'");
        }
        std::uint64_t id = 0;
        double x = 0.0, y = 0.0;
        if (!parse_u64(tokens[0], id) || id >= n) {
            throw ParseError(filename, line_number, "invalid node id '" + tokens[0] + "'");
        }
        if (!parse_double(tokens[1], x) || !parse_double(tokens[2], y)) {
            throw ParseError(filename, line_number, "invalid coordinates");
        }
        if (filled[id]) {
            throw ParseError(filename, line_number, "duplicate row for node " + tokens[0]);
        }
        coords[id] = Point{x, y};
        filled[id] = true;
    }

    if (!have_n) {
        throw ParseError(filename + ": missing '# n' header");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!filled[i]) {
            throw ParseError(filename + ": missing coordinates for node " + std::to_string(i));
        }
    }
    try {
        return LayoutFileData{Layout(std::move(coords), frame), gamma, seed, energy, converged};
    } catch (const Error& err) {
        throw ParseError(filename + ": " + err.what());
    }
}

void write_name_map(const std::filesystem::path& path, const std::vector<std::string>& names) {
    std::ostringstream out;
    out << "# covsmooth-names v1\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << i << ' ' << names[i] << "\n";
    }
    atomic_write(path, out.str());
}

void write_gamma_report(std::ostream& out, const GammaReport& report) {
    out << "# covsmooth-gamma-report v1\n";
    out << "# base_seed " << report.base_seed << "\n";
    out << "# selected_gamma " << format_double(report.selected_gamma) << "\n";
    out << "# selected_index " << report.selected_index << "\n";
    for (std::size_t gi = 0; gi < report.grid.size(); ++gi) {
        out << "# median " << format_double(report.grid[gi]) << ' '
            << format_double(report.median_psi[gi]) << "\n";
    }
    out << "replicate,gamma,m,e,m_s,e_s,psi,ok\n";
    for (std::size_t r = 0; r < report.replicates.size(); ++r) {
        for (std::size_t gi = 0; gi < report.grid.size(); ++gi) {
            const PsiCell& cell = report.replicates[r][gi];
            out << (r + 1) << ',' << format_double(report.grid[gi]) << ','
                << format_double(cell.m) << ',' << format_double(cell.e) << ','
                << format_double(cell.m_s) << ',' << format_double(cell.e_s) << ','
                << format_double(cell.psi) << ',' << (cell.ok ? 1 : 0) << "\n";
        }
    }
}

void write_gamma_report(const std::filesystem::path& path, const GammaReport& report) {
    std::ostringstream out;
    write_gamma_report(out, report);
    atomic_write(path, out.str());
}

namespace {

std::string csv_safe(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return text;
}

} // namespace

void write_robustness_rows(const std::filesystem::path& path, const RobustnessCurves& curves) {
    std::ostringstream out;
    out << "replicate,fraction,arm,gamma,disparity,ok,error\n";
    for (const RobustnessRow& row : curves.rows) {
        out << row.replicate << ',' << format_double(row.fraction) << ',' << row.arm << ','
            << format_double(row.gamma) << ',' << format_double(row.disparity) << ','
            << (row.ok ? 1 : 0) << ',' << csv_safe(row.error) << "\n";
    }
    atomic_write(path, out.str());
}

void write_robustness_summary(const std::filesystem::path& path, const RobustnessCurves& curves) {
    std::ostringstream out;
    out << "arm,fraction,mean_disparity,count\n";
    for (const RobustnessMean& cell : summarize_robustness(curves)) {
        out << cell.arm << ',' << format_double(cell.fraction) << ','
            << format_double(cell.mean_disparity) << ',' << cell.count << "\n";
    }
    atomic_write(path, out.str());
}

void write_gamma_sweep(const std::filesystem::path& path,
                       const std::vector<GammaSweepCell>& cells) {
    std::ostringstream out;
    out << "design,n,odds,replicates,ok,mean_gamma,sd_gamma,ci95_half_width,error\n";
    for (const GammaSweepCell& cell : cells) {
        out << cell.design_type << ',' << cell.n << ',' << format_double(cell.odds) << ','
            << cell.replicates << ',' << cell.ok_count << ',' << format_double(cell.mean_gamma)
            << ',' << format_double(cell.sd_gamma) << ',' << format_double(cell.ci95_half_width)
            << ',' << csv_safe(cell.error) << "\n";
    }
    atomic_write(path, out.str());
}

void write_gamma_sweep_raw(const std::filesystem::path& path,
                           const std::vector<GammaSweepCell>& cells) {
    std::ostringstream out;
    out << "design,n,odds,replicate,gamma\n";
    for (const GammaSweepCell& cell : cells) {
        for (std::size_t r = 0; r < cell.selected.size(); ++r) {
            out << cell.design_type << ',' << cell.n << ',' << format_double(cell.odds) << ','
                << (r + 1) << ',' << format_double(cell.selected[r]) << "\n";
        }
    }
    atomic_write(path, out.str());
}

} // namespace covsmooth
