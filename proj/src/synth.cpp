#include "graphdyn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphdyn/common.hpp"
#include "graphdyn/rng.hpp"

namespace graphdyn {

namespace {

// Geometric skip: number of failures before the next success at rate p.
// Returns SIZE_MAX when p == 0.
std::size_t geometric_skip(Rng& rng, double p) {
    if (p <= 0.0) return SIZE_MAX;
    if (p >= 1.0) return 0;
    double u = rng.uniform01();
    while (u <= 0.0) u = rng.uniform01();
    const double skip = std::floor(std::log(u) / std::log1p(-p));
    if (skip >= static_cast<double>(SIZE_MAX)) return SIZE_MAX;
    return static_cast<std::size_t>(skip);
}

// Decode a linear index over pairs (p, q) with 0 <= p < q < m, row-major.
void decode_triangular(std::size_t linear, std::size_t m, std::size_t& p, std::size_t& q) {
    // cum(r) = r(m-1) - r(r-1)/2 pairs precede row r
    double pd = m - 0.5 -
                std::sqrt((m - 0.5) * (m - 0.5) - 2.0 * static_cast<double>(linear));
    std::size_t row = pd <= 0.0 ? 0 : static_cast<std::size_t>(pd);
    auto cum = [m](std::size_t r) {
        return r * (m - 1) - r * (r - 1) / 2;
    };
    while (row + 1 < m && cum(row + 1) <= linear) ++row;
    while (row > 0 && cum(row) > linear) --row;
    p = row;
    q = row + 1 + (linear - cum(row));
}

std::vector<int> assign_labels(const SbmParams& params, Rng& rng) {
    std::vector<int> labels(params.n);
    if (params.assignment == LabelAssignment::kRoundRobin) {
        for (std::size_t i = 0; i < params.n; ++i)
            labels[i] = static_cast<int>(i % static_cast<std::size_t>(params.k)) + 1;
    } else {
        std::vector<double> cumulative(params.prior.size());
        std::partial_sum(params.prior.begin(), params.prior.end(), cumulative.begin());
        for (std::size_t i = 0; i < params.n; ++i) {
            const double u = rng.uniform01();
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            labels[i] = static_cast<int>(it - cumulative.begin()) + 1;
            if (labels[i] > params.k) labels[i] = params.k;
        }
    }
    return labels;
}

}  // namespace

std::vector<double> SbmParams::two_level_block(int k, double diag, double off) {
    std::vector<double> block(static_cast<std::size_t>(k) * k, off);
    for (int a = 0; a < k; ++a) block[static_cast<std::size_t>(a) * k + a] = diag;
    return block;
}

void SbmParams::validate() const {
    if (n == 0) throw ValidationError("sbm: n must be >= 1");
    if (k < 1) throw ValidationError("sbm: K must be >= 1");
    if (block.size() != static_cast<std::size_t>(k) * k)
        throw ValidationError("sbm: block matrix must be K x K");
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            const double v = block_at(a, b);
            if (!(v >= 0.0 && v <= 1.0))
                throw ValidationError("sbm: block probabilities must lie in [0,1]");
            if (std::abs(v - block_at(b, a)) > 1e-12)
                throw ValidationError("sbm: block matrix must be symmetric");
        }
    }
    if (assignment == LabelAssignment::kCategorical) {
        if (prior.size() != static_cast<std::size_t>(k))
            throw ValidationError("sbm: prior must have K entries");
        double sum = 0.0;
        for (double p : prior) {
            if (p < 0.0) throw ValidationError("sbm: prior entries must be >= 0");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ValidationError("sbm: prior must sum to 1");
    }
    if (weight_min > weight_max) throw ValidationError("sbm: weight range inverted");
    if (degree_corrected && (theta_alpha <= 0.0 || theta_beta <= 0.0))
        throw ValidationError("sbm: Beta shape parameters must be positive");
    if (!theta_override.empty()) {
        if (theta_override.size() != n)
            throw ValidationError("sbm: theta override must have n entries");
        for (double t : theta_override)
            if (!(t >= 0.0 && t <= 1.0))
                throw ValidationError("sbm: theta values must lie in [0,1]");
    }
}

std::vector<double> sample_degree_params(std::size_t n, double alpha, double beta,
                                         std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) theta[i] = rng.beta(alpha, beta);
    return theta;
}

SynthGraph generate_dcsbm(const SbmParams& params) {
    params.validate();
    Rng rng(params.seed);

    SynthGraph result;
    std::vector<int> labels = assign_labels(params, rng);
    if (!params.theta_override.empty())
        result.theta = params.theta_override;
    else if (params.degree_corrected)
        result.theta = sample_degree_params(params.n, params.theta_alpha,
                                            params.theta_beta,
                                            Rng::derive_seed(params.seed, 0x7e7a));

    std::vector<std::vector<VertexIndex>> blocks(static_cast<std::size_t>(params.k));
    for (std::size_t i = 0; i < params.n; ++i)
        blocks[static_cast<std::size_t>(labels[i] - 1)].push_back(static_cast<VertexIndex>(i));

    const std::int64_t w_lo = std::llround(params.weight_min);
    const std::int64_t w_hi = std::llround(params.weight_max);

    const bool thinned = !result.theta.empty();
    auto accept = [&](VertexIndex i, VertexIndex j) {
        if (!thinned) return true;
        return rng.uniform01() < result.theta[i] * result.theta[j];
    };
    auto emit = [&](VertexIndex i, VertexIndex j) {
        const double w = static_cast<double>(rng.uniform_int(w_lo, w_hi));
        result.edges.push_back({std::min(i, j), std::max(i, j), w});
    };

    // Candidate pairs per block pair via geometric skipping at rate B(a,b),
    // thinned by theta_i * theta_j for the degree-corrected case.
    for (int a = 0; a < params.k; ++a) {
        const auto& block_a = blocks[static_cast<std::size_t>(a)];
        // within-block: pairs p < q
        const std::size_t m = block_a.size();
        if (m >= 2) {
            const double p_block = params.block_at(a, a);
            const std::size_t pair_count = m * (m - 1) / 2;
            std::size_t linear = geometric_skip(rng, p_block);
            while (linear < pair_count) {
                std::size_t p, q;
                decode_triangular(linear, m, p, q);
                if (accept(block_a[p], block_a[q])) emit(block_a[p], block_a[q]);
                const std::size_t skip = geometric_skip(rng, p_block);
                if (skip == SIZE_MAX || skip >= pair_count - linear - 1) break;
                linear += 1 + skip;
            }
        }
        for (int b = a + 1; b < params.k; ++b) {
            const auto& block_b = blocks[static_cast<std::size_t>(b)];
            if (block_a.empty() || block_b.empty()) continue;
            const double p_block = params.block_at(a, b);
            const std::size_t pair_count = block_a.size() * block_b.size();
            std::size_t linear = geometric_skip(rng, p_block);
            while (linear < pair_count) {
                const VertexIndex i = block_a[linear / block_b.size()];
                const VertexIndex j = block_b[linear % block_b.size()];
                if (accept(i, j)) emit(i, j);
                const std::size_t skip = geometric_skip(rng, p_block);
                if (skip == SIZE_MAX || skip >= pair_count - linear - 1) break;
                linear += 1 + skip;
            }
        }
    }

    result.labels = LabelVector::from_labels(std::move(labels), params.k);
    return result;
}

EdgeList evolve_weights(const EdgeList& previous, const EvolutionParams& params,
                        std::uint64_t step_seed) {
    if (previous.empty()) throw ValidationError("evolve: empty edge list");
    if (params.change_fraction < 0.0 || params.change_fraction > 1.0)
        throw ValidationError("evolve: change fraction outside [0,1]");
    EdgeList next = previous;
    const std::size_t s = previous.size();
    const std::size_t c =
        static_cast<std::size_t>(std::llround(params.change_fraction * static_cast<double>(s)));
    if (c == 0) return next;

    Rng rng(step_seed);
    // choose exactly c edges without replacement
    std::vector<std::size_t> indices(s);
    std::iota(indices.begin(), indices.end(), 0);
    for (std::size_t i = 0; i < c; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(s - i));
        std::swap(indices[i], indices[j]);
    }
    std::sort(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(c));
    for (std::size_t i = 0; i < c; ++i) {
        Edge& e = next[indices[i]];
        e.weight += rng.uniform(params.perturb_min, params.perturb_max);
        if (params.clamp_at_zero && e.weight < 0.0) e.weight = 0.0;
    }
    return next;
}

TemporalGraph evolve_graph(const EdgeList& base, const EvolutionParams& params,
                           std::size_t n, std::uint64_t seed) {
    if (params.t < 1) throw ValidationError("evolve: T must be >= 1");
    TemporalGraph graph;
    graph.n = n;
    graph.undirected = true;
    graph.steps.reserve(params.t);
    graph.steps.push_back(base);
    for (std::size_t t = 1; t < params.t; ++t)
        graph.steps.push_back(
            evolve_weights(graph.steps.back(), params, Rng::derive_seed(seed, t)));
    return graph;
}

std::vector<VertexIndex> inject_outliers(TemporalGraph& graph, const OutlierSpec& spec) {
    if (spec.count == 0) return {};
    if (spec.count > graph.n) throw ValidationError("inject: more outliers than vertices");
    const std::size_t t_inj =
        spec.at_last_step ? graph.time_steps() - 1 : spec.injection_time;
    if (t_inj >= graph.time_steps()) throw ValidationError("inject: time out of range");
    if (spec.edges_min < 1 || spec.edges_max < spec.edges_min)
        throw ValidationError("inject: bad edges-per-outlier range");

    EdgeList& step = graph.steps[t_inj];
    Rng rng(spec.seed);

    // On a directed (row-form) graph a vertex's incident slots are its
    // outgoing rows, i.e. the entries of its own adjacency row.
    std::vector<std::vector<std::size_t>> incident(graph.n);
    for (std::size_t e = 0; e < step.size(); ++e) {
        incident[step[e].source].push_back(e);
        if (graph.undirected && step[e].target != step[e].source)
            incident[step[e].target].push_back(e);
    }
    std::size_t eligible = 0;
    for (const auto& list : incident)
        if (!list.empty()) ++eligible;
    if (eligible < spec.count)
        throw ValidationError(
            "inject: fewer vertices with incident edges than requested outliers");

    std::vector<std::uint8_t> chosen(graph.n, 0);
    std::vector<VertexIndex> planted;
    while (planted.size() < spec.count) {
        const auto v = static_cast<VertexIndex>(rng.next_below(graph.n));
        if (chosen[v]) continue;
        if (incident[v].empty()) continue;  // re-draw: no incident edge here
        chosen[v] = 1;
        planted.push_back(v);
    }

    for (const VertexIndex v : planted) {
        int c = static_cast<int>(rng.uniform_int(spec.edges_min, spec.edges_max));
        if (spec.add_new_edges) {
            // on a directed graph the new rows are one-sided: only the
            // planted vertex's own row moves
            for (int e = 0; e < c; ++e) {
                VertexIndex partner = v;
                while (partner == v)
                    partner = static_cast<VertexIndex>(rng.next_below(graph.n));
                step.push_back({v, partner, rng.uniform(spec.weight_min, spec.weight_max)});
            }
        } else {
            auto& slots = incident[v];
            c = std::min<int>(c, static_cast<int>(slots.size()));
            for (int e = 0; e < c; ++e) {
                const std::size_t pick =
                    static_cast<std::size_t>(e) + rng.next_below(slots.size() - static_cast<std::size_t>(e));
                std::swap(slots[static_cast<std::size_t>(e)], slots[pick]);
                step[slots[static_cast<std::size_t>(e)]].weight =
                    rng.uniform(spec.weight_min, spec.weight_max);
            }
        }
    }
    std::sort(planted.begin(), planted.end());
    return planted;
}

}  // namespace graphdyn
