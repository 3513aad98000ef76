#pragma once

#include <cstdint>
#include <vector>

#include "graphdyn/graph.hpp"

namespace graphdyn {

// Truncated SVD of the column-concatenated adjacency [A_1 | .. | A_T].
// anchor holds the top-d left singular vectors (n x d, orthonormal columns);
// per_time[t] is the t-th n-block of the right factor scaled by the singular
// values, the per-time vertex embedding.
struct UnfoldedEmbedding {
    std::size_t n = 0;
    int d = 0;
    std::vector<double> singular_values;       // length d, descending
    std::vector<double> anchor;                // n x d row-major
    std::vector<std::vector<double>> per_time; // T matrices, n x d row-major
};

struct SpectralOptions {
    int d = 10;
    double tolerance = 1e-8;      // relative change of singular values
    int max_iterations = 200;
    int oversample = 8;
    std::size_t max_vertices = 50000;  // refuse larger inputs, desk-scale only
    std::uint64_t seed = 7;
};

// Randomized subspace iteration on the implicit n x nT unfolding; products
// stream over the per-time edgelists, the unfolding is never materialized.
// Throws ValidationError above max_vertices and ConvergenceError (with the
// final residual in the message) when the tolerance is not reached within
// max_iterations.
UnfoldedEmbedding unfolded_spectral_embed(const TemporalGraph& graph,
                                          const SpectralOptions& options);

// Per-vertex Euclidean distance between the embeddings at t and ref_t.
std::vector<double> spectral_outlier_measure(const UnfoldedEmbedding& embedding,
                                             std::size_t ref_t, std::size_t t);

}  // namespace graphdyn
