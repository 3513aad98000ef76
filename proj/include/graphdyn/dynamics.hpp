#pragma once

#include <cstdint>
#include <vector>

#include "graphdyn/encoder.hpp"
#include "graphdyn/graph.hpp"

namespace graphdyn {

// Vertex / community / graph temporal dynamics measured against one
// reference time step. All values lie in [0,1] for non-negative inputs;
// community entries for empty communities are NaN (reported as missing).
struct DynamicsReport {
    std::size_t n = 0;
    int k = 0;
    std::size_t reference_time = 0;              // 0-based
    std::vector<std::vector<double>> vertex;     // T vectors of length n
    std::vector<std::vector<std::uint8_t>> inactive;  // zero row at ref or t
    std::vector<std::vector<std::uint8_t>> row_active;  // per-time normalized flags
    std::vector<std::vector<double>> community;  // T vectors of length K
    std::vector<double> graph;                   // length T, mean over all n
    // mean over vertices active at both ref and t; NaN when none are
    std::vector<double> graph_active;

    std::size_t time_steps() const { return vertex.size(); }
};

// Entry (t,i) = 1 - <Z_t(i,:), Z_ref(i,:)>. Negative float dust within
// 1e-12 of 0 (resp. above 1) is clamped; genuinely negative inner products
// (possible only with negative weights) pass through unclamped. At t == ref
// active vertices get exactly 0. A row that is zero at either time yields 1
// and is flagged inactive.
std::vector<std::vector<double>> vertex_dynamic(
    const EmbeddingSeries& z, std::size_t ref_t,
    std::vector<std::vector<std::uint8_t>>* inactive_out = nullptr);

// Per-community mean of the vertex dynamic; empty communities give NaN.
std::vector<std::vector<double>> community_dynamic(
    const std::vector<std::vector<double>>& vertex_dyn, const LabelVector& labels);

// Whole-graph mean of the vertex dynamic, all n vertices.
std::vector<double> graph_dynamic(const std::vector<std::vector<double>>& vertex_dyn);

DynamicsReport compute_dynamics(const EmbeddingSeries& z, std::size_t ref_t,
                                const LabelVector& labels);

// Per-vertex max over t in [t_lo, t_hi] (inclusive, 0-based).
std::vector<double> max_window_dynamic(const std::vector<std::vector<double>>& vertex_dyn,
                                       std::size_t t_lo, std::size_t t_hi);

struct ThresholdSummary {
    std::vector<VertexIndex> outliers;  // dyn > outlier_threshold
    std::vector<VertexIndex> inliers;   // dyn < inlier_threshold
    double outlier_fraction = 0.0;      // of the considered vertex count
    double inlier_fraction = 0.0;
    std::size_t considered = 0;
};

// include_inactive = false drops vertices whose rows are zero at both the
// reference time and t; fractions are then relative to the remaining count.
ThresholdSummary threshold_summary(const DynamicsReport& report, std::size_t t,
                                   double outlier_threshold, double inlier_threshold,
                                   bool include_inactive = true);

// Counts per [edge_i, edge_{i+1}) bin, last bin closed. Edges must be
// strictly increasing.
std::vector<std::int64_t> histogram(const std::vector<double>& values,
                                    const std::vector<double>& bin_edges);

// Descending sort by dynamic, ties broken by ascending vertex index.
std::vector<VertexIndex> rank_by_dynamic(const std::vector<double>& dyn);

// Ranking over the entries where the dynamic is informative: vertices active
// at both the reference time and t. Flagged entries (silent, appeared, or
// never present - all pinned at dynamic 1 with no ordering information) are
// appended afterwards in index order.
std::vector<VertexIndex> rank_by_dynamic_active(const DynamicsReport& report,
                                                std::size_t t);

}  // namespace graphdyn
