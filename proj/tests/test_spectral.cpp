#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "graphdyn/common.hpp"
#include "graphdyn/rng.hpp"
#include "graphdyn/spectral.hpp"

using namespace graphdyn;

namespace {

// Densified unfolding with the same symmetrization the operator applies;
// Eigen's SVD of this matrix is the oracle.
Eigen::MatrixXd dense_unfolding(const TemporalGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.n);
    Eigen::MatrixXd m =
        Eigen::MatrixXd::Zero(n, n * static_cast<Eigen::Index>(g.time_steps()));
    for (std::size_t t = 0; t < g.time_steps(); ++t) {
        const auto base = static_cast<Eigen::Index>(t * g.n);
        for (const Edge& e : g.steps[t]) {
            m(e.source, base + e.target) += e.weight;
            if (g.undirected) m(e.target, base + e.source) += e.weight;
        }
    }
    return m;
}

TemporalGraph random_graph(Rng& rng, std::size_t n, std::size_t t_count,
                           std::size_t edges_per_step) {
    TemporalGraph g;
    g.n = n;
    for (std::size_t t = 0; t < t_count; ++t) {
        EdgeList edges;
        for (std::size_t e = 0; e < edges_per_step; ++e)
            edges.push_back({static_cast<VertexIndex>(rng.next_below(n)),
                             static_cast<VertexIndex>(rng.next_below(n)),
                             rng.uniform(0.1, 1.0)});
        g.steps.push_back(std::move(edges));
    }
    return g;
}

// Three-block weighted graph with a strong planted structure, so the top
// three singular values are well separated from the rest.
TemporalGraph blocked_graph(Rng& rng, std::size_t n, std::size_t t_count) {
    TemporalGraph g;
    g.n = n;
    for (std::size_t t = 0; t < t_count; ++t) {
        EdgeList edges;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const bool same = (i % 3) == (j % 3);
                const double p = same ? 0.6 : 0.05;
                if (rng.uniform01() < p)
                    edges.push_back({static_cast<VertexIndex>(i),
                                     static_cast<VertexIndex>(j), rng.uniform(0.5, 1.5)});
            }
        }
        g.steps.push_back(std::move(edges));
    }
    return g;
}

double max_subspace_angle(const Eigen::MatrixXd& u_oracle, const std::vector<double>& anchor,
                          std::size_t n, int d) {
    Eigen::MatrixXd u_computed(static_cast<Eigen::Index>(n), d);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j)
            u_computed(static_cast<Eigen::Index>(i), j) =
                anchor[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
    const Eigen::MatrixXd overlap = u_oracle.leftCols(d).transpose() * u_computed;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(overlap);
    double worst = 0.0;
    for (int j = 0; j < d; ++j) {
        const double c = std::min(1.0, std::max(-1.0, svd.singularValues()(j)));
        worst = std::max(worst, std::acos(c));
    }
    return worst;
}

}  // namespace

TEST_CASE("rank-2 two-community graph matches the dense oracle") {
    // two constant blocks (self-loops included): exact rank-2 unfolding
    const std::size_t n = 40;
    TemporalGraph g;
    g.n = n;
    EdgeList edges;
    for (std::size_t i = 0; i < n; ++i) {
        // undirected self-loop counts twice, so half the block weight here
        edges.push_back({static_cast<VertexIndex>(i), static_cast<VertexIndex>(i),
                         (i < n / 2) ? 1.0 : 1.5});
        for (std::size_t j = i + 1; j < n; ++j)
            if ((i < n / 2) == (j < n / 2))
                edges.push_back({static_cast<VertexIndex>(i), static_cast<VertexIndex>(j),
                                 (i < n / 2) ? 2.0 : 3.0});
    }
    g.steps = {edges};

    SpectralOptions options;
    options.d = 2;
    options.tolerance = 1e-12;
    const UnfoldedEmbedding embedding = unfolded_spectral_embed(g, options);

    Eigen::BDCSVD<Eigen::MatrixXd> oracle(dense_unfolding(g));
    CHECK(std::abs(embedding.singular_values[0] - oracle.singularValues()(0)) < 1e-6);
    CHECK(std::abs(embedding.singular_values[1] - oracle.singularValues()(1)) < 1e-6);
    // everything past rank 2 is numerically zero
    CHECK(oracle.singularValues()(2) < 1e-8);
}

TEST_CASE("singular values match the dense oracle on random graphs") {
    Rng rng(15);
    for (int trial = 0; trial < 3; ++trial) {
        const TemporalGraph g = random_graph(rng, 60, 2, 300);
        SpectralOptions options;
        options.d = 5;
        options.tolerance = 1e-12;
        options.seed = 100 + static_cast<std::uint64_t>(trial);
        const UnfoldedEmbedding embedding = unfolded_spectral_embed(g, options);
        Eigen::BDCSVD<Eigen::MatrixXd> oracle(dense_unfolding(g));
        for (int j = 0; j < 5; ++j)
            CHECK(std::abs(embedding.singular_values[static_cast<std::size_t>(j)] -
                           oracle.singularValues()(j)) < 1e-6);
    }
}

TEST_CASE("left subspace agrees with the oracle on structured graphs") {
    Rng rng(71);
    const std::size_t n = 90;
    const TemporalGraph g = blocked_graph(rng, n, 2);
    SpectralOptions options;
    options.d = 3;
    options.tolerance = 1e-12;
    const UnfoldedEmbedding embedding = unfolded_spectral_embed(g, options);

    Eigen::BDCSVD<Eigen::MatrixXd> oracle(dense_unfolding(g), Eigen::ComputeThinU);
    for (int j = 0; j < 3; ++j)
        CHECK(std::abs(embedding.singular_values[static_cast<std::size_t>(j)] -
                       oracle.singularValues()(j)) < 1e-6);
    CHECK(max_subspace_angle(oracle.matrixU(), embedding.anchor, n, 3) < 1e-4);
}

TEST_CASE("anchor columns are orthonormal") {
    Rng rng(8);
    const TemporalGraph g = blocked_graph(rng, 60, 3);
    SpectralOptions options;
    options.d = 4;
    const UnfoldedEmbedding embedding = unfolded_spectral_embed(g, options);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < g.n; ++i)
                dot += embedding.anchor[i * 4 + static_cast<std::size_t>(a)] *
                       embedding.anchor[i * 4 + static_cast<std::size_t>(b)];
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
        }
}

TEST_CASE("identical adjacency at every step embeds identically per time") {
    Rng rng(33);
    TemporalGraph g = random_graph(rng, 50, 1, 250);
    g.steps = {g.steps[0], g.steps[0], g.steps[0]};
    SpectralOptions options;
    options.d = 3;
    const UnfoldedEmbedding embedding = unfolded_spectral_embed(g, options);
    for (std::size_t t = 1; t < 3; ++t)
        for (std::size_t i = 0; i < embedding.per_time[t].size(); ++i)
            CHECK(std::abs(embedding.per_time[t][i] - embedding.per_time[0][i]) < 1e-8);
}

TEST_CASE("the all-zero graph yields zero factors") {
    TemporalGraph g;
    g.n = 20;
    g.steps = {{}, {}};
    SpectralOptions options;
    options.d = 3;
    const UnfoldedEmbedding embedding = unfolded_spectral_embed(g, options);
    for (double s : embedding.singular_values) CHECK(s == 0.0);
    for (const auto& step : embedding.per_time)
        for (double v : step) CHECK(v == 0.0);
}

TEST_CASE("outlier measure is the per-vertex row distance") {
    UnfoldedEmbedding embedding;
    embedding.n = 2;
    embedding.d = 2;
    embedding.per_time = {{1.0, 2.0, 0.0, 0.0}, {1.0, 2.0, 3.0, 0.0}};
    const auto same = spectral_outlier_measure(embedding, 0, 0);
    CHECK(same == std::vector<double>{0.0, 0.0});
    const auto moved = spectral_outlier_measure(embedding, 0, 1);
    CHECK(moved[0] == 0.0);
    CHECK(moved[1] == doctest::Approx(3.0));

    Rng rng(5);
    UnfoldedEmbedding random_embedding;
    random_embedding.n = 30;
    random_embedding.d = 4;
    random_embedding.per_time.assign(2, std::vector<double>(120));
    for (auto& step : random_embedding.per_time)
        for (auto& v : step) v = rng.uniform(-1.0, 1.0);
    const auto measure = spectral_outlier_measure(random_embedding, 0, 1);
    for (std::size_t i = 0; i < 30; ++i) {
        double sq = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            const double diff = random_embedding.per_time[1][i * 4 + j] -
                                random_embedding.per_time[0][i * 4 + j];
            sq += diff * diff;
        }
        CHECK(std::abs(measure[i] - std::sqrt(sq)) < 1e-12);
    }
}

TEST_CASE("input validation") {
    Rng rng(4);
    const TemporalGraph g = random_graph(rng, 30, 1, 60);
    SpectralOptions options;
    options.d = 31;
    CHECK_THROWS_AS(unfolded_spectral_embed(g, options), ValidationError);
    options.d = 3;
    options.max_vertices = 10;
    try {
        unfolded_spectral_embed(g, options);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("encoder") != std::string::npos);
    }
}

TEST_CASE("iteration cap raises a convergence error with the residual") {
    Rng rng(21);
    const TemporalGraph g = random_graph(rng, 40, 1, 120);
    SpectralOptions options;
    options.d = 3;
    options.tolerance = 0.0;  // unreachable
    options.max_iterations = 3;
    CHECK_THROWS_AS(unfolded_spectral_embed(g, options), ConvergenceError);
}
