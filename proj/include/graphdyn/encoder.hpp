#pragma once

#include <cstdint>
#include <vector>

#include "graphdyn/graph.hpp"

namespace graphdyn {

// Column-normalized one-hot encoder, stored sparsely: labeled vertex i
// carries a single non-zero 1/n_{Y_i} in column Y_i - 1, label-0 rows are
// all zero. Each non-empty column sums to 1.
struct EncoderMatrix {
    std::vector<int> labels;    // size n, {0, 1, .., K}
    std::vector<double> value;  // size n, 1/n_{Y_i} for labeled rows else 0
    int k = 0;

    std::size_t rows() const { return labels.size(); }
};

// T row-major n x K matrices plus a per-row flag recording whether the row
// had positive norm and was normalized.
struct EmbeddingSeries {
    std::size_t n = 0;
    int k = 0;
    std::vector<std::vector<double>> z;            // T matrices, each n*K
    std::vector<std::vector<std::uint8_t>> normalized;  // T flag vectors, each n

    std::size_t time_steps() const { return z.size(); }
    double at(std::size_t t, std::size_t vertex, int dim) const {
        return z[t][vertex * static_cast<std::size_t>(k) + static_cast<std::size_t>(dim)];
    }
};

EncoderMatrix build_encoder_matrix(const LabelVector& labels);

// Single pass over the edges, O(s_t + nK), exactly equal to the dense
// A_t x W product up to summation order. When undirected, each edge applies
// the two-sided update, so a self-loop contributes twice to its row.
std::vector<double> embed_time_step(const EdgeList& edges, std::size_t n,
                                    const EncoderMatrix& w, bool undirected);

// Divides rows with positive Euclidean norm by that norm; zero rows are
// left untouched. Returns one flag per row (1 = normalized).
std::vector<std::uint8_t> normalize_rows(std::vector<double>& z, std::size_t n, int k);

// Full pipeline: per-time embed + normalize. Deterministic for a fixed edge
// order; time steps are processed in parallel when threads > 1, which does
// not change the result (each step is accumulated sequentially in file
// order by exactly one thread).
EmbeddingSeries temporal_encoder_embedding(const TemporalGraph& graph,
                                           const LabelVector& labels,
                                           int threads = 1);

}  // namespace graphdyn
