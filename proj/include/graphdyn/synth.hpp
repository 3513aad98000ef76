#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphdyn/graph.hpp"

namespace graphdyn {

enum class LabelAssignment {
    kRoundRobin,   // Y_i = (i mod K) + 1, exactly balanced
    kCategorical,  // i.i.d. draw from the prior
};

struct SbmParams {
    std::size_t n = 0;
    int k = 1;
    std::vector<double> block;           // K x K row-major, entries in [0,1]
    LabelAssignment assignment = LabelAssignment::kRoundRobin;
    std::vector<double> prior;           // size K, used for kCategorical
    bool degree_corrected = false;       // theta_i ~ Beta(alpha, beta)
    double theta_alpha = 1.0;
    double theta_beta = 4.0;
    std::vector<double> theta_override;  // size n when set, values in [0,1]
    double weight_min = 1.0;             // integer-uniform weight range
    double weight_max = 100.0;
    std::uint64_t seed = 0;

    double block_at(int a, int b) const { return block[static_cast<std::size_t>(a) * k + b]; }
    void validate() const;

    // Uniform diagonal/off-diagonal block matrix, the usual planted-partition shape.
    static std::vector<double> two_level_block(int k, double diag, double off);
};

struct EvolutionParams {
    std::size_t t = 1;                // number of time steps
    double change_fraction = 0.5;     // exact fraction of edges perturbed per step
    double perturb_min = -20.0;
    double perturb_max = 20.0;
    bool clamp_at_zero = true;
};

struct OutlierSpec {
    std::size_t count = 10;
    std::size_t injection_time = 0;   // 0-based; see last_step flag
    bool at_last_step = true;
    double weight_min = 500.0;
    double weight_max = 1000.0;
    int edges_min = 1;
    int edges_max = 2;
    bool add_new_edges = false;       // default overwrites existing incident edges
    std::uint64_t seed = 0;
};

struct SynthGraph {
    EdgeList edges;       // undirected simple graph, each unordered pair once
    LabelVector labels;
    std::vector<double> theta;  // empty unless degree_corrected
};

// Samples an (optionally degree-corrected) SBM: A(i,j) ~ Bernoulli(theta_i
// theta_j B(Y_i, Y_j)) over unordered pairs, no self-loops, integer-uniform
// weights on existing edges. Deterministic given the seed.
SynthGraph generate_dcsbm(const SbmParams& params);

// i.i.d. Beta(alpha, beta) draws, one per vertex.
std::vector<double> sample_degree_params(std::size_t n, double alpha, double beta,
                                         std::uint64_t seed);

// One evolution step: exactly round(change_fraction * s) edges chosen without
// replacement get weight += U[perturb_min, perturb_max], clamped at zero.
// Connectivity is unchanged.
EdgeList evolve_weights(const EdgeList& previous, const EvolutionParams& params,
                        std::uint64_t step_seed);

// Full time series: t=1 base graph, then per-step weight evolution.
TemporalGraph evolve_graph(const EdgeList& base, const EvolutionParams& params,
                           std::size_t n, std::uint64_t seed);

// Picks `count` distinct vertices (re-drawn while they have no incident edge
// at the injection step) and rewrites 1..2 of their incident edge weights
// with U[weight_min, weight_max]; with add_new_edges, fresh edges to random
// endpoints are appended instead. On a directed (row-form) graph the incident
// slots are the vertex's outgoing rows, so edits touch only its own adjacency
// row; see expand_to_directed. Returns the planted vertices.
std::vector<VertexIndex> inject_outliers(TemporalGraph& graph, const OutlierSpec& spec);

}  // namespace graphdyn
