#include "graphdyn/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <system_error>

#include "graphdyn/common.hpp"

namespace graphdyn {

namespace {

std::string location(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

char detect_delimiter(const std::string& line) {
    if (line.find('\t') != std::string::npos) return '\t';
    if (line.find(',') != std::string::npos) return ',';
    return ' ';
}

std::vector<std::string_view> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string_view> fields;
    std::string_view view(line);
    while (!view.empty()) {
        const std::size_t pos = view.find(delimiter);
        std::string_view field = view.substr(0, pos);
        if (delimiter == ' ') {
            // collapse runs of blanks
            if (!field.empty()) fields.push_back(field);
        } else {
            fields.push_back(field);
        }
        if (pos == std::string_view::npos) break;
        view.remove_prefix(pos + 1);
        if (delimiter != ' ' && view.empty()) fields.push_back(view);
    }
    return fields;
}

double parse_double(std::string_view field, const std::filesystem::path& path,
                    std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw ValidationError(location(path, line) + ": cannot parse number '" +
                              std::string(field) + "'");
    return value;
}

long parse_long(std::string_view field, const std::filesystem::path& path,
                std::size_t line) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw ValidationError(location(path, line) + ": cannot parse integer '" +
                              std::string(field) + "'");
    return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

bool skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;  // blank
}

}  // namespace

std::string format_double(double v) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, ptr);
}

std::vector<EdgeFileRow> read_edge_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<EdgeFileRow> rows;
    std::string line;
    std::size_t line_no = 0;
    char delimiter = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        if (delimiter == 0) delimiter = detect_delimiter(line);
        const auto fields = split_fields(line, delimiter);
        if (fields.size() != 3 && fields.size() != 4)
            throw ValidationError(location(path, line_no) +
                                  ": expected 'src, dst, weight[, t]', got " +
                                  std::to_string(fields.size()) + " fields");
        EdgeFileRow row;
        row.src = std::string(fields[0]);
        row.dst = std::string(fields[1]);
        row.weight = parse_double(fields[2], path, line_no);
        if (fields.size() == 4) {
            const long t = parse_long(fields[3], path, line_no);
            if (t < 1)
                throw ValidationError(location(path, line_no) + ": time step must be >= 1");
            row.t = static_cast<int>(t);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<LabelRow> read_label_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<LabelRow> rows;
    std::string line;
    std::size_t line_no = 0;
    char delimiter = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        if (delimiter == 0) delimiter = detect_delimiter(line);
        const auto fields = split_fields(line, delimiter);
        if (fields.size() != 2)
            throw ValidationError(location(path, line_no) +
                                  ": expected 'vertex, community'");
        LabelRow row;
        row.token = std::string(fields[0]);
        row.community = static_cast<int>(parse_long(fields[1], path, line_no));
        rows.push_back(std::move(row));
    }
    return rows;
}

LoadedGraph load_graph(const std::vector<std::filesystem::path>& edge_files,
                       const std::filesystem::path& label_file, int k,
                       bool undirected, bool allow_negative) {
    if (edge_files.empty()) throw ValidationError("no edge files given");

    std::vector<std::vector<EdgeFileRow>> per_file;
    per_file.reserve(edge_files.size());
    for (const auto& path : edge_files) per_file.push_back(read_edge_file(path));

    const bool timed = !per_file[0].empty() && per_file[0][0].t > 0;
    if (timed && per_file.size() > 1)
        throw ValidationError(
            "either pass one edge file per time step or a single file with a t column");

    LoadedGraph loaded;
    for (const auto& rows : per_file)
        for (const auto& row : rows) {
            loaded.registry.register_vertex(row.src);
            loaded.registry.register_vertex(row.dst);
        }

    std::vector<LabelRow> label_rows;
    if (!label_file.empty()) {
        label_rows = read_label_file(label_file);
        for (const auto& row : label_rows) loaded.registry.register_vertex(row.token);
    }

    std::size_t t_count = per_file.size();
    if (timed) {
        int max_t = 0;
        for (const auto& row : per_file[0]) {
            if (row.t == 0)
                throw ValidationError(edge_files[0].string() +
                                      ": mixed rows with and without a t column");
            max_t = std::max(max_t, row.t);
        }
        t_count = static_cast<std::size_t>(max_t);
    } else {
        for (std::size_t f = 0; f < per_file.size(); ++f)
            for (const auto& row : per_file[f])
                if (row.t != 0)
                    throw ValidationError(edge_files[f].string() +
                                          ": unexpected t column in per-step file");
    }

    loaded.graph.n = loaded.registry.size();
    loaded.graph.undirected = undirected;
    loaded.graph.steps.assign(t_count, {});
    auto add_row = [&](const EdgeFileRow& row, std::size_t t) {
        if (!std::isfinite(row.weight))
            throw ValidationError("edge " + row.src + " -> " + row.dst +
                                  ": non-finite weight");
        if (row.weight < 0.0 && !allow_negative)
            throw ValidationError("edge " + row.src + " -> " + row.dst +
                                  ": negative weight (weights must be >= 0; pass "
                                  "--allow-negative to accept)");
        loaded.graph.steps[t].push_back({loaded.registry.index_of(row.src),
                                         loaded.registry.index_of(row.dst), row.weight});
    };
    if (timed) {
        for (const auto& row : per_file[0]) add_row(row, static_cast<std::size_t>(row.t - 1));
    } else {
        for (std::size_t f = 0; f < per_file.size(); ++f)
            for (const auto& row : per_file[f]) add_row(row, f);
    }

    if (!label_file.empty()) {
        if (k == 0)
            for (const auto& row : label_rows) k = std::max(k, row.community);
        loaded.labels = load_labels(label_rows, loaded.registry, k);
        loaded.has_labels = true;
    }
    return loaded;
}

void write_edge_file(const std::filesystem::path& path, const TemporalGraph& graph,
                     const VertexRegistry& registry) {
    auto out = open_output(path);
    out << "# src\tdst\tweight\tt\n";
    for (std::size_t t = 0; t < graph.time_steps(); ++t)
        for (const Edge& e : graph.steps[t])
            out << registry.token_of(e.source) << '\t' << registry.token_of(e.target)
                << '\t' << format_double(e.weight) << '\t' << (t + 1) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_label_file(const std::filesystem::path& path, const LabelVector& labels,
                      const VertexRegistry& registry) {
    auto out = open_output(path);
    out << "# vertex\tcommunity\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels.labels[i] > 0)
            out << registry.token_of(static_cast<VertexIndex>(i)) << '\t'
                << labels.labels[i] << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_embedding_text(const std::filesystem::path& path, const EmbeddingSeries& z,
                          const VertexRegistry& registry) {
    auto out = open_output(path);
    out << "# t\tvertex";
    for (int d = 1; d <= z.k; ++d) out << "\tz_" << d;
    out << "\tnormalized\n";
    for (std::size_t t = 0; t < z.time_steps(); ++t) {
        for (std::size_t i = 0; i < z.n; ++i) {
            out << (t + 1) << '\t' << registry.token_of(static_cast<VertexIndex>(i));
            for (int d = 0; d < z.k; ++d) out << '\t' << format_double(z.at(t, i, d));
            out << '\t' << static_cast<int>(z.normalized[t][i]) << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

EmbeddingSeries read_embedding_text(const std::filesystem::path& path,
                                    VertexRegistry& registry) {
    auto in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    EmbeddingSeries series;
    int k = 0;
    std::vector<double> flat;
    std::vector<std::uint8_t> flags;
    std::vector<int> times;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        const auto fields = split_fields(line, '\t');
        if (fields.size() < 4)
            throw ValidationError(location(path, line_no) + ": malformed embedding row");
        if (k == 0)
            k = static_cast<int>(fields.size()) - 3;
        else if (static_cast<int>(fields.size()) - 3 != k)
            throw ValidationError(location(path, line_no) + ": inconsistent column count");
        times.push_back(static_cast<int>(parse_long(fields[0], path, line_no)));
        registry.register_vertex(std::string(fields[1]));
        for (int d = 0; d < k; ++d)
            flat.push_back(parse_double(fields[2 + static_cast<std::size_t>(d)], path, line_no));
        flags.push_back(static_cast<std::uint8_t>(
            parse_long(fields.back(), path, line_no) != 0 ? 1 : 0));
    }
    if (times.empty()) throw ValidationError(path.string() + ": empty embedding file");
    const int t_count = *std::max_element(times.begin(), times.end());
    const std::size_t n = registry.size();
    if (times.size() != n * static_cast<std::size_t>(t_count))
        throw ValidationError(path.string() + ": embedding rows do not cover T x n grid");
    series.n = n;
    series.k = k;
    series.z.assign(static_cast<std::size_t>(t_count),
                    std::vector<double>(n * static_cast<std::size_t>(k), 0.0));
    series.normalized.assign(static_cast<std::size_t>(t_count),
                             std::vector<std::uint8_t>(n, 0));
    // rows are written grouped by t with a fixed vertex order
    std::size_t row = 0;
    for (int t = 0; t < t_count; ++t) {
        for (std::size_t i = 0; i < n; ++i, ++row) {
            if (times[row] != t + 1)
                throw ValidationError(path.string() + ": rows must be grouped by t");
            for (int d = 0; d < k; ++d)
                series.z[static_cast<std::size_t>(t)][i * static_cast<std::size_t>(k) +
                                                      static_cast<std::size_t>(d)] =
                    flat[row * static_cast<std::size_t>(k) + static_cast<std::size_t>(d)];
            series.normalized[static_cast<std::size_t>(t)][i] = flags[row];
        }
    }
    return series;
}

void write_embedding_binary(const std::filesystem::path& path, const EmbeddingSeries& z) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    const char magic[4] = {'G', 'D', 'E', 'B'};
    out.write(magic, 4);
    const std::uint64_t header[3] = {static_cast<std::uint64_t>(z.n),
                                     static_cast<std::uint64_t>(z.k),
                                     static_cast<std::uint64_t>(z.time_steps())};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (const auto& zt : z.z)
        out.write(reinterpret_cast<const char*>(zt.data()),
                  static_cast<std::streamsize>(zt.size() * sizeof(double)));
    for (const auto& ft : z.normalized)
        out.write(reinterpret_cast<const char*>(ft.data()),
                  static_cast<std::streamsize>(ft.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

EmbeddingSeries read_embedding_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "GDEB", 4) != 0)
        throw ValidationError(path.string() + ": not an embedding binary (bad magic)");
    std::uint64_t header[3];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in) throw ValidationError(path.string() + ": truncated header");
    EmbeddingSeries series;
    series.n = static_cast<std::size_t>(header[0]);
    series.k = static_cast<int>(header[1]);
    const auto t_count = static_cast<std::size_t>(header[2]);
    series.z.assign(t_count, std::vector<double>(series.n * header[1], 0.0));
    series.normalized.assign(t_count, std::vector<std::uint8_t>(series.n, 0));
    for (auto& zt : series.z)
        in.read(reinterpret_cast<char*>(zt.data()),
                static_cast<std::streamsize>(zt.size() * sizeof(double)));
    for (auto& ft : series.normalized)
        in.read(reinterpret_cast<char*>(ft.data()), static_cast<std::streamsize>(ft.size()));
    if (!in) throw ValidationError(path.string() + ": truncated payload");
    return series;
}

void write_spectral_embedding_text(const std::filesystem::path& path,
                                   const UnfoldedEmbedding& embedding,
                                   const VertexRegistry& registry) {
    auto out = open_output(path);
    out << "# t\tvertex";
    for (int d = 1; d <= embedding.d; ++d) out << "\tx_" << d;
    out << "\tmethod\n";
    for (std::size_t t = 0; t < embedding.per_time.size(); ++t) {
        for (std::size_t i = 0; i < embedding.n; ++i) {
            out << (t + 1) << '\t' << registry.token_of(static_cast<VertexIndex>(i));
            for (int d = 0; d < embedding.d; ++d)
                out << '\t'
                    << format_double(
                           embedding.per_time[t][i * static_cast<std::size_t>(embedding.d) +
                                                 static_cast<std::size_t>(d)]);
            out << "\tspectral\n";
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_vertex_dynamics(const std::filesystem::path& path, const DynamicsReport& report,
                           const VertexRegistry& registry) {
    auto out = open_output(path);
    out << "# t\tvertex\tdynamic\tinactive\n";
    for (std::size_t t = 0; t < report.time_steps(); ++t)
        for (std::size_t i = 0; i < report.n; ++i)
            out << (t + 1) << '\t' << registry.token_of(static_cast<VertexIndex>(i)) << '\t'
                << format_double(report.vertex[t][i]) << '\t'
                << static_cast<int>(report.inactive[t][i]) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_community_dynamics(const std::filesystem::path& path,
                              const DynamicsReport& report) {
    auto out = open_output(path);
    out << "# t\tcommunity\tdynamic\n";
    for (std::size_t t = 0; t < report.time_steps(); ++t)
        for (int c = 0; c < report.k; ++c) {
            const double v = report.community[t][static_cast<std::size_t>(c)];
            out << (t + 1) << '\t' << (c + 1) << '\t'
                << (std::isnan(v) ? std::string("nan") : format_double(v)) << '\n';
        }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_graph_dynamics(const std::filesystem::path& path, const DynamicsReport& report) {
    auto out = open_output(path);
    const bool with_active = report.graph_active.size() == report.time_steps();
    out << (with_active ? "# t\tdynamic\tdynamic_active\n" : "# t\tdynamic\n");
    for (std::size_t t = 0; t < report.time_steps(); ++t) {
        out << (t + 1) << '\t' << format_double(report.graph[t]);
        if (with_active) {
            const double v = report.graph_active[t];
            out << '\t' << (std::isnan(v) ? std::string("nan") : format_double(v));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_histogram(const std::filesystem::path& path, const std::vector<double>& bin_edges,
                     const std::vector<std::int64_t>& counts) {
    auto out = open_output(path);
    out << "# bin_lo\tbin_hi\tcount\n";
    for (std::size_t b = 0; b < counts.size(); ++b)
        out << format_double(bin_edges[b]) << '\t' << format_double(bin_edges[b + 1]) << '\t'
            << counts[b] << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> read_token_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        const auto begin = line.find_first_not_of(" \t");
        const auto end = line.find_last_not_of(" \t");
        tokens.push_back(line.substr(begin, end - begin + 1));
    }
    return tokens;
}

std::vector<std::pair<std::string, std::string>> read_params_file(
    const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto begin = s.find_first_not_of(" \t");
        const auto end = s.find_last_not_of(" \t");
        return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(location(path, line_no) + ": expected 'key = value'");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return entries;
}

}  // namespace graphdyn
