#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "graphdyn/common.hpp"
#include "graphdyn/synth.hpp"

using namespace graphdyn;

namespace {

SbmParams small_params(std::size_t n, int k, std::uint64_t seed) {
    SbmParams params;
    params.n = n;
    params.k = k;
    params.block = SbmParams::two_level_block(k, 0.5, 0.1);
    params.seed = seed;
    return params;
}

}  // namespace

TEST_CASE("parameter validation") {
    SbmParams params = small_params(10, 2, 1);
    params.block[1] = 1.5;
    CHECK_THROWS_AS(params.validate(), ValidationError);  // probability above 1
    params.block = {0.5, 0.2, 0.3, 0.5};
    CHECK_THROWS_AS(params.validate(), ValidationError);  // asymmetric
    params = small_params(10, 2, 1);
    params.assignment = LabelAssignment::kCategorical;
    params.prior = {0.9, 0.3};
    CHECK_THROWS_AS(params.validate(), ValidationError);  // prior sum
    params.prior = {0.7, 0.3};
    CHECK_NOTHROW(params.validate());
}

TEST_CASE("same seed reproduces the graph bit for bit") {
    const SbmParams params = small_params(300, 4, 99);
    const SynthGraph a = generate_dcsbm(params);
    const SynthGraph b = generate_dcsbm(params);
    CHECK(a.edges == b.edges);
    CHECK(a.labels.labels == b.labels.labels);
    // and a different seed changes it
    SbmParams other = params;
    other.seed = 100;
    CHECK(generate_dcsbm(other).edges != a.edges);
}

TEST_CASE("round-robin labels are exactly balanced") {
    const SynthGraph g = generate_dcsbm(small_params(103, 5, 3));
    for (int c = 1; c <= 5; ++c) {
        const auto count = g.labels.class_counts[static_cast<std::size_t>(c)];
        CHECK(std::abs(count - 103 / 5) <= 1);
    }
}

TEST_CASE("sampled graphs are simple and canonically ordered") {
    const SynthGraph g = generate_dcsbm(small_params(200, 3, 17));
    std::set<std::pair<VertexIndex, VertexIndex>> seen;
    for (const Edge& e : g.edges) {
        CHECK(e.source < e.target);  // no self-loops, min-max order
        CHECK(seen.emplace(e.source, e.target).second);  // each pair once
    }
}

TEST_CASE("weights are integer-uniform in range") {
    SbmParams params = small_params(200, 2, 5);
    params.weight_min = 1;
    params.weight_max = 100;
    const SynthGraph g = generate_dcsbm(params);
    REQUIRE(!g.edges.empty());
    for (const Edge& e : g.edges) {
        CHECK(e.weight >= 1.0);
        CHECK(e.weight <= 100.0);
        CHECK(e.weight == std::floor(e.weight));
    }
}

TEST_CASE("within-block density matches the block probability") {
    // n=2000, theta == 1, B(1,1) = 0.5: empirical density within block 1
    SbmParams params = small_params(2000, 2, 31);
    const SynthGraph g = generate_dcsbm(params);
    std::size_t within = 0;
    for (const Edge& e : g.edges)
        if (g.labels.labels[e.source] == 1 && g.labels.labels[e.target] == 1) ++within;
    const double block_size = 1000.0;
    const double pairs = block_size * (block_size - 1) / 2.0;
    const double density = static_cast<double>(within) / pairs;
    CHECK(std::abs(density - 0.5) < 0.05);
}

TEST_CASE("zero degree parameter isolates the vertex") {
    SbmParams params = small_params(50, 2, 7);
    params.theta_override.assign(50, 1.0);
    params.theta_override[13] = 0.0;
    const SynthGraph g = generate_dcsbm(params);
    for (const Edge& e : g.edges) {
        CHECK(e.source != 13);
        CHECK(e.target != 13);
    }
}

TEST_CASE("beta degree parameters have the right support and mean") {
    const auto theta = sample_degree_params(100000, 1.0, 4.0, 11);
    double sum = 0.0;
    for (double t : theta) {
        CHECK(t >= 0.0);
        CHECK(t <= 1.0);
        sum += t;
    }
    CHECK(std::abs(sum / 100000.0 - 0.2) < 0.01);  // Beta(1,4) mean
    CHECK(sample_degree_params(100000, 1.0, 4.0, 11) == theta);  // same seed
}

TEST_CASE("evolution with zero fraction is the identity") {
    const SynthGraph g = generate_dcsbm(small_params(100, 2, 23));
    EvolutionParams params;
    params.change_fraction = 0.0;
    CHECK(evolve_weights(g.edges, params, 5) == g.edges);
}

TEST_CASE("evolution perturbs exactly half the edges within bounds") {
    SbmParams sbm = small_params(200, 2, 41);
    sbm.weight_min = 10;
    sbm.weight_max = 10;  // all weights exactly 10
    const SynthGraph g = generate_dcsbm(sbm);
    EvolutionParams params;  // defaults: fraction 0.5, [-20, 20], clamp
    const EdgeList next = evolve_weights(g.edges, params, 77);

    REQUIRE(next.size() == g.edges.size());
    std::size_t changed = 0;
    for (std::size_t e = 0; e < next.size(); ++e) {
        CHECK(next[e].source == g.edges[e].source);  // connectivity unchanged
        CHECK(next[e].target == g.edges[e].target);
        CHECK(next[e].weight >= 0.0);
        CHECK(next[e].weight <= 30.0);  // 10 + 20 at most
        if (next[e].weight != g.edges[e].weight) ++changed;
    }
    const auto expected =
        static_cast<std::size_t>(std::llround(0.5 * static_cast<double>(g.edges.size())));
    CHECK(changed == expected);
}

TEST_CASE("evolve_graph chains steps from the base edgelist") {
    const SynthGraph g = generate_dcsbm(small_params(80, 2, 3));
    EvolutionParams params;
    params.t = 4;
    const TemporalGraph series = evolve_graph(g.edges, params, 80, 9);
    REQUIRE(series.time_steps() == 4);
    CHECK(series.steps[0] == g.edges);
    for (std::size_t t = 1; t < 4; ++t) CHECK(series.steps[t].size() == g.edges.size());
    // reproducible
    const TemporalGraph again = evolve_graph(g.edges, params, 80, 9);
    for (std::size_t t = 0; t < 4; ++t) CHECK(series.steps[t] == again.steps[t]);
}

TEST_CASE("outlier injection overwrites incident weights at one step") {
    const SynthGraph g = generate_dcsbm(small_params(150, 3, 13));
    EvolutionParams evolution;
    evolution.t = 5;
    TemporalGraph graph = evolve_graph(g.edges, evolution, 150, 21);
    const TemporalGraph before = graph;

    OutlierSpec spec;
    spec.count = 8;
    spec.weight_min = 500;
    spec.weight_max = 1000;
    spec.seed = 4;
    const auto planted = inject_outliers(graph, spec);

    REQUIRE(planted.size() == 8);
    CHECK(std::is_sorted(planted.begin(), planted.end()));
    CHECK(std::adjacent_find(planted.begin(), planted.end()) == planted.end());

    // earlier steps untouched
    for (std::size_t t = 0; t + 1 < graph.time_steps(); ++t)
        CHECK(graph.steps[t] == before.steps[t]);

    // every planted vertex has at least one incident weight in [500, 1000]
    const EdgeList& last = graph.steps.back();
    for (const VertexIndex v : planted) {
        bool hit = false;
        for (const Edge& e : last)
            if ((e.source == v || e.target == v) && e.weight >= 500.0 && e.weight <= 1000.0)
                hit = true;
        CHECK(hit);
    }
    // connectivity unchanged in overwrite mode
    REQUIRE(last.size() == before.steps.back().size());
    for (std::size_t e = 0; e < last.size(); ++e) {
        CHECK(last[e].source == before.steps.back()[e].source);
        CHECK(last[e].target == before.steps.back()[e].target);
    }
}

TEST_CASE("count zero leaves the graph unchanged") {
    const SynthGraph g = generate_dcsbm(small_params(40, 2, 2));
    TemporalGraph graph;
    graph.n = 40;
    graph.steps = {g.edges};
    const TemporalGraph before = graph;
    OutlierSpec spec;
    spec.count = 0;
    CHECK(inject_outliers(graph, spec).empty());
    CHECK(graph.steps[0] == before.steps[0]);
}

TEST_CASE("injection re-draws vertices without incident edges") {
    TemporalGraph graph;
    graph.n = 6;
    // only vertices 0..2 have edges; 3..5 are isolated
    graph.steps = {{{0, 1, 5.0}, {1, 2, 5.0}, {0, 2, 5.0}}};
    OutlierSpec spec;
    spec.count = 3;
    spec.seed = 8;
    const auto planted = inject_outliers(graph, spec);
    CHECK(planted == std::vector<VertexIndex>{0, 1, 2});
    spec.count = 4;
    CHECK_THROWS_AS(inject_outliers(graph, spec), ValidationError);
}

TEST_CASE("add mode appends new incident edges") {
    TemporalGraph graph;
    graph.n = 10;
    graph.steps = {{{0, 1, 5.0}}};
    OutlierSpec spec;
    spec.count = 2;
    spec.add_new_edges = true;
    spec.seed = 6;
    const auto planted = inject_outliers(graph, spec);
    REQUIRE(planted.size() == 2);
    CHECK(graph.steps[0].size() > 1);
    for (std::size_t e = 1; e < graph.steps[0].size(); ++e) {
        const Edge& edge = graph.steps[0][e];
        CHECK(edge.weight >= 500.0);
        CHECK(edge.weight <= 1000.0);
        CHECK(edge.source != edge.target);
    }
}

TEST_CASE("directed row graphs inject into outgoing rows only") {
    TemporalGraph graph;
    graph.n = 4;
    graph.undirected = false;
    // row form of the undirected pair {0,1} plus {2,3}
    graph.steps = {{{0, 1, 5.0}, {1, 0, 5.0}, {2, 3, 7.0}, {3, 2, 7.0}}};
    OutlierSpec spec;
    spec.count = 4;
    spec.seed = 12;
    const auto planted = inject_outliers(graph, spec);
    CHECK(planted == std::vector<VertexIndex>{0, 1, 2, 3});
    // each vertex has exactly one outgoing row; only weights changed
    REQUIRE(graph.steps[0].size() == 4);
    for (const Edge& e : graph.steps[0]) {
        CHECK(e.weight >= 500.0);
        CHECK(e.weight <= 1000.0);
    }

    // add mode appends one-sided rows from the planted vertices
    TemporalGraph added;
    added.n = 4;
    added.undirected = false;
    added.steps = {{{0, 1, 5.0}, {1, 0, 5.0}}};
    OutlierSpec add_spec;
    add_spec.count = 2;
    add_spec.add_new_edges = true;
    add_spec.seed = 3;
    const auto add_planted = inject_outliers(added, add_spec);
    CHECK(add_planted == std::vector<VertexIndex>{0, 1});  // only rows 0,1 eligible
    for (std::size_t e = 2; e < added.steps[0].size(); ++e) {
        CHECK((added.steps[0][e].source == 0 || added.steps[0][e].source == 1));
        CHECK(added.steps[0][e].weight >= 500.0);
    }
}

TEST_CASE("categorical assignment draws from the prior") {
    SbmParams params = small_params(5000, 3, 19);
    params.assignment = LabelAssignment::kCategorical;
    params.prior = {0.6, 0.3, 0.1};
    const SynthGraph g = generate_dcsbm(params);
    const double f1 = static_cast<double>(g.labels.class_counts[1]) / 5000.0;
    const double f3 = static_cast<double>(g.labels.class_counts[3]) / 5000.0;
    CHECK(std::abs(f1 - 0.6) < 0.05);
    CHECK(std::abs(f3 - 0.1) < 0.05);
}
