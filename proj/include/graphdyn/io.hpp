#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "graphdyn/dynamics.hpp"
#include "graphdyn/encoder.hpp"
#include "graphdyn/graph.hpp"
#include "graphdyn/spectral.hpp"

namespace graphdyn {

// Raw text rows of one edgelist file: src, dst, weight and an optional
// fourth column t in {1..T}. Delimiter (tab or comma) is auto-detected,
// '#'-prefixed lines are skipped.
struct EdgeFileRow {
    std::string src;
    std::string dst;
    double weight = 0.0;
    int t = 0;  // 0 when the file has no time column
};

std::vector<EdgeFileRow> read_edge_file(const std::filesystem::path& path);
std::vector<LabelRow> read_label_file(const std::filesystem::path& path);

struct LoadedGraph {
    VertexRegistry registry;
    TemporalGraph graph;
    LabelVector labels;
    bool has_labels = false;
};

// Assembles a TemporalGraph from one or more edge files plus an optional
// label file. A single file with a time column yields T = max t; multiple
// files are one time step each, in argument order. The vertex universe is
// the union of edge endpoints and label-file vertices.
LoadedGraph load_graph(const std::vector<std::filesystem::path>& edge_files,
                       const std::filesystem::path& label_file, int k,
                       bool undirected, bool allow_negative = false);

void write_edge_file(const std::filesystem::path& path, const TemporalGraph& graph,
                     const VertexRegistry& registry);
void write_label_file(const std::filesystem::path& path, const LabelVector& labels,
                      const VertexRegistry& registry);

// One row per (t, vertex): t, external id, z_1..z_K, normalized_flag.
void write_embedding_text(const std::filesystem::path& path, const EmbeddingSeries& z,
                          const VertexRegistry& registry);
EmbeddingSeries read_embedding_text(const std::filesystem::path& path,
                                    VertexRegistry& registry);

// Flat binary layout: magic "GDEB", u64 n, k, t, then t*n*k little-endian
// doubles followed by t*n normalized flags as bytes.
void write_embedding_binary(const std::filesystem::path& path, const EmbeddingSeries& z);
EmbeddingSeries read_embedding_binary(const std::filesystem::path& path);

// Same text layout as the encoder embedding with d columns and a trailing
// method tag instead of the normalized flag.
void write_spectral_embedding_text(const std::filesystem::path& path,
                                   const UnfoldedEmbedding& embedding,
                                   const VertexRegistry& registry);

void write_vertex_dynamics(const std::filesystem::path& path, const DynamicsReport& report,
                           const VertexRegistry& registry);
void write_community_dynamics(const std::filesystem::path& path, const DynamicsReport& report);
void write_graph_dynamics(const std::filesystem::path& path, const DynamicsReport& report);
void write_histogram(const std::filesystem::path& path, const std::vector<double>& bin_edges,
                     const std::vector<std::int64_t>& counts);

// Key = value parameter files for the simulate command; '#' comments allowed.
std::vector<std::pair<std::string, std::string>> read_params_file(
    const std::filesystem::path& path);

// One token per line ('#' comments skipped), e.g. a planted-outlier manifest.
std::vector<std::string> read_token_file(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace graphdyn
