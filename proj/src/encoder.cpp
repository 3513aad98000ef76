#include "graphdyn/encoder.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "graphdyn/common.hpp"

namespace graphdyn {

EncoderMatrix build_encoder_matrix(const LabelVector& labels) {
    if (labels.k < 1) throw ValidationError("K must be >= 1");
    EncoderMatrix w;
    w.k = labels.k;
    w.labels = labels.labels;
    w.value.assign(labels.size(), 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int label = labels.labels[i];
        if (label > 0)
            w.value[i] = 1.0 / static_cast<double>(labels.class_counts[static_cast<std::size_t>(label)]);
    }
    return w;
}

namespace {

// per-vertex encoder entry packed into one cache-line-friendly slot
struct PackedEncoder {
    std::int64_t column;  // Y_i - 1, or -1 for unlabeled rows
    double value;         // 1 / n_{Y_i}
};

}  // namespace

std::vector<double> embed_time_step(const EdgeList& edges, std::size_t n,
                                    const EncoderMatrix& w, bool undirected) {
    const std::size_t k = static_cast<std::size_t>(w.k);
    std::vector<double> z(n * k, 0.0);

    std::vector<PackedEncoder> packed(n);
    for (std::size_t i = 0; i < n; ++i)
        packed[i] = {w.labels[i] - 1, w.value[i]};

    const std::size_t s = edges.size();
    // Two-stage software prefetch: endpoint lookups at kFar, the target
    // accumulator cells at kNear (their addresses need the entries fetched
    // at kFar). Hides the random-access latency once z outgrows the cache;
    // the accumulation order is untouched.
    constexpr std::size_t kFar = 40;
    constexpr std::size_t kNear = 16;
    for (std::size_t i = 0; i < s; ++i) {
        if (i + kFar < s) {
            const Edge& f = edges[i + kFar];
            __builtin_prefetch(&packed[f.target]);
            if (undirected) __builtin_prefetch(&packed[f.source]);
        }
        if (i + kNear < s) {
            const Edge& m = edges[i + kNear];
            const PackedEncoder& near_dst = packed[m.target];
            if (near_dst.column >= 0)
                __builtin_prefetch(
                    &z[m.source * k + static_cast<std::size_t>(near_dst.column)], 1);
            if (undirected) {
                const PackedEncoder& near_src = packed[m.source];
                if (near_src.column >= 0)
                    __builtin_prefetch(
                        &z[m.target * k + static_cast<std::size_t>(near_src.column)], 1);
            }
        }
        const Edge& e = edges[i];
        const PackedEncoder& dst = packed[e.target];
        if (dst.column >= 0)
            z[e.source * k + static_cast<std::size_t>(dst.column)] += dst.value * e.weight;
        if (undirected) {
            const PackedEncoder& src = packed[e.source];
            if (src.column >= 0)
                z[e.target * k + static_cast<std::size_t>(src.column)] += src.value * e.weight;
        }
    }
    return z;
}

std::vector<std::uint8_t> normalize_rows(std::vector<double>& z, std::size_t n, int k) {
    std::vector<std::uint8_t> flags(n, 0);
    const std::size_t kk = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (std::size_t d = 0; d < kk; ++d) sq += z[i * kk + d] * z[i * kk + d];
        if (sq > 0.0) {
            const double inv = 1.0 / std::sqrt(sq);
            for (std::size_t d = 0; d < kk; ++d) z[i * kk + d] *= inv;
            flags[i] = 1;
        }
    }
    return flags;
}

EmbeddingSeries temporal_encoder_embedding(const TemporalGraph& graph,
                                           const LabelVector& labels, int threads) {
    if (labels.size() != graph.n)
        throw ValidationError("graph and label vector disagree on vertex count");
    graph.validate();

    const EncoderMatrix w = build_encoder_matrix(labels);
    const std::size_t t_count = graph.time_steps();

    EmbeddingSeries series;
    series.n = graph.n;
    series.k = w.k;
    series.z.resize(t_count);
    series.normalized.resize(t_count);

    auto run_step = [&](std::size_t t) {
        series.z[t] = embed_time_step(graph.steps[t], graph.n, w, graph.undirected);
        series.normalized[t] = normalize_rows(series.z[t], graph.n, w.k);
    };

    if (threads <= 1 || t_count == 1) {
        for (std::size_t t = 0; t < t_count; ++t) run_step(t);
    } else {
        const std::size_t worker_count =
            std::min<std::size_t>(static_cast<std::size_t>(threads), t_count);
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        for (std::size_t w_i = 0; w_i < worker_count; ++w_i) {
            workers.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < t_count; t = next.fetch_add(1))
                    run_step(t);
            });
        }
        for (auto& worker : workers) worker.join();
    }
    return series;
}

}  // namespace graphdyn
