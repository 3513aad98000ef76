#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace graphdyn {

using VertexIndex = std::uint32_t;

// Weighted directed triple over internal vertex indices. The undirected
// interpretation is applied at embedding time, not in storage.
struct Edge {
    VertexIndex source = 0;
    VertexIndex target = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;

// Bijective mapping between external vertex tokens and dense internal
// indices in [0, n). Registration is idempotent; indices are assigned in
// first-seen order.
class VertexRegistry {
public:
    VertexIndex register_vertex(const std::string& token);
    void register_vertices(std::span<const std::string> tokens);

    // Throws ValidationError when the token is unknown.
    VertexIndex index_of(const std::string& token) const;
    bool contains(const std::string& token) const;

    const std::string& token_of(VertexIndex index) const { return tokens_.at(index); }
    std::size_t size() const { return tokens_.size(); }

private:
    std::unordered_map<std::string, VertexIndex> index_;
    std::vector<std::string> tokens_;
};

// T weighted edgelists over one shared vertex set.
struct TemporalGraph {
    std::size_t n = 0;
    bool undirected = true;
    std::vector<EdgeList> steps;  // size T >= 1, step sizes s_1..s_T

    std::size_t time_steps() const { return steps.size(); }
    std::size_t total_edges() const;

    // Throws ValidationError on out-of-range endpoints or T == 0.
    void validate() const;
};

// Re-stores an undirected graph with every edge as two directed rows
// (self-loops twice). The embedding is identical; the row form allows
// asymmetric per-row edits, e.g. outlier injection into one vertex's row.
TemporalGraph expand_to_directed(const TemporalGraph& graph);

// Per-vertex community assignment. Label 0 marks unknown/unused vertices;
// known communities are 1..K.
struct LabelVector {
    std::vector<int> labels;          // size n, values in {0, 1, .., K}
    int k = 0;                        // number of communities
    std::vector<std::int64_t> class_counts;  // size K + 1; [0] counts unknowns

    std::size_t size() const { return labels.size(); }
    void recount();

    static LabelVector from_labels(std::vector<int> labels, int k);
};

struct LabelRow {
    std::string token;
    int community = 0;
};

// Build an edge array from (src, dst, weight) token triples. Input order is
// preserved; duplicates are kept (multigraph semantics, contributions sum at
// embedding time). Negative weights are rejected unless allow_negative.
EdgeList ingest_edgelist(std::span<const std::string> src_tokens,
                         std::span<const std::string> dst_tokens,
                         std::span<const double> weights,
                         const VertexRegistry& registry,
                         bool allow_negative = false);

// Build a LabelVector of size registry.size() from (token, community) rows.
// Vertices absent from the rows get label 0. Conflicting duplicates and
// communities outside {1..K} are errors.
LabelVector load_labels(std::span<const LabelRow> rows,
                        const VertexRegistry& registry, int k);

}  // namespace graphdyn
