#include "graphdyn/graph.hpp"

#include <cmath>
#include <string>

#include "graphdyn/common.hpp"

namespace graphdyn {

std::string version_string() { return "graphdyn 0.1.0"; }

VertexIndex VertexRegistry::register_vertex(const std::string& token) {
    auto [it, inserted] = index_.try_emplace(token, static_cast<VertexIndex>(tokens_.size()));
    if (inserted) tokens_.push_back(token);
    return it->second;
}

void VertexRegistry::register_vertices(std::span<const std::string> tokens) {
    for (const auto& token : tokens) register_vertex(token);
}

VertexIndex VertexRegistry::index_of(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end())
        throw ValidationError("unknown vertex token '" + token + "'");
    return it->second;
}

bool VertexRegistry::contains(const std::string& token) const {
    return index_.find(token) != index_.end();
}

std::size_t TemporalGraph::total_edges() const {
    std::size_t total = 0;
    for (const auto& step : steps) total += step.size();
    return total;
}

void TemporalGraph::validate() const {
    if (steps.empty()) throw ValidationError("temporal graph needs at least one time step");
    for (std::size_t t = 0; t < steps.size(); ++t) {
        for (const Edge& e : steps[t]) {
            if (e.source >= n || e.target >= n)
                throw ValidationError("edge endpoint out of range at time " +
                                      std::to_string(t + 1));
        }
    }
}

TemporalGraph expand_to_directed(const TemporalGraph& graph) {
    if (!graph.undirected) return graph;
    TemporalGraph directed;
    directed.n = graph.n;
    directed.undirected = false;
    directed.steps.reserve(graph.time_steps());
    for (const EdgeList& step : graph.steps) {
        EdgeList rows;
        rows.reserve(step.size() * 2);
        for (const Edge& e : step) {
            rows.push_back(e);
            // an undirected self-loop contributes twice, so its row doubles too
            rows.push_back(e.source == e.target ? e : Edge{e.target, e.source, e.weight});
        }
        directed.steps.push_back(std::move(rows));
    }
    return directed;
}

void LabelVector::recount() {
    class_counts.assign(static_cast<std::size_t>(k) + 1, 0);
    for (int label : labels) {
        if (label < 0 || label > k)
            throw ValidationError("label " + std::to_string(label) +
                                  " outside {0.." + std::to_string(k) + "}");
        ++class_counts[static_cast<std::size_t>(label)];
    }
}

LabelVector LabelVector::from_labels(std::vector<int> labels, int k) {
    LabelVector result;
    result.labels = std::move(labels);
    result.k = k;
    result.recount();
    return result;
}

EdgeList ingest_edgelist(std::span<const std::string> src_tokens,
                         std::span<const std::string> dst_tokens,
                         std::span<const double> weights,
                         const VertexRegistry& registry, bool allow_negative) {
    EdgeList edges;
    edges.reserve(src_tokens.size());
    for (std::size_t row = 0; row < src_tokens.size(); ++row) {
        const auto row_label = std::to_string(row + 1);
        if (!registry.contains(src_tokens[row]))
            throw ValidationError("row " + row_label + ": unknown vertex token '" +
                                  src_tokens[row] + "'");
        if (!registry.contains(dst_tokens[row]))
            throw ValidationError("row " + row_label + ": unknown vertex token '" +
                                  dst_tokens[row] + "'");
        const double w = weights[row];
        if (!std::isfinite(w))
            throw ValidationError("row " + row_label + ": non-finite weight");
        if (w < 0.0 && !allow_negative)
            throw ValidationError("row " + row_label +
                                  ": negative weight (weights must be >= 0; "
                                  "pass the negative-weight override to accept)");
        edges.push_back({registry.index_of(src_tokens[row]),
                         registry.index_of(dst_tokens[row]), w});
    }
    return edges;
}

LabelVector load_labels(std::span<const LabelRow> rows, const VertexRegistry& registry,
                        int k) {
    if (k < 1) throw ValidationError("K must be >= 1");
    LabelVector result;
    result.k = k;
    result.labels.assign(registry.size(), 0);
    std::vector<bool> seen(registry.size(), false);
    for (const LabelRow& row : rows) {
        if (row.community < 1 || row.community > k)
            throw ValidationError("vertex '" + row.token + "': community " +
                                  std::to_string(row.community) + " outside {1.." +
                                  std::to_string(k) + "}");
        const VertexIndex i = registry.index_of(row.token);
        if (seen[i] && result.labels[i] != row.community)
            throw ValidationError("vertex '" + row.token + "': conflicting labels " +
                                  std::to_string(result.labels[i]) + " and " +
                                  std::to_string(row.community));
        seen[i] = true;
        result.labels[i] = row.community;
    }
    result.recount();
    return result;
}

}  // namespace graphdyn
