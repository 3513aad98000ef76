#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "graphdyn/common.hpp"
#include "graphdyn/graph.hpp"
#include "graphdyn/io.hpp"
#include "graphdyn/rng.hpp"

using namespace graphdyn;
namespace fs = std::filesystem;

namespace {
fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "graphdyn_core_test";
    fs::create_directories(dir);
    return dir;
}
}  // namespace

TEST_CASE("registry deduplicates repeated tokens") {
    VertexRegistry registry;
    const std::vector<std::string> tokens = {"a", "b", "a"};
    registry.register_vertices(tokens);
    CHECK(registry.size() == 2);
    CHECK(registry.index_of("a") == 0);
    CHECK(registry.index_of("b") == 1);
}

TEST_CASE("registry singleton") {
    VertexRegistry registry;
    registry.register_vertex("x");
    CHECK(registry.size() == 1);
    CHECK(registry.index_of("x") == 0);
    CHECK(registry.token_of(0) == "x");
}

TEST_CASE("registry assigns dense indices") {
    VertexRegistry registry;
    std::vector<VertexIndex> assigned;
    for (int i = 0; i < 1000; ++i)
        assigned.push_back(registry.register_vertex("v" + std::to_string(i * 7919)));
    std::sort(assigned.begin(), assigned.end());
    for (std::size_t i = 0; i < assigned.size(); ++i)
        CHECK(assigned[i] == static_cast<VertexIndex>(i));
    CHECK(registry.size() == 1000);
}

TEST_CASE("registry rejects unknown tokens") {
    VertexRegistry registry;
    registry.register_vertex("a");
    CHECK_THROWS_AS(registry.index_of("zz"), ValidationError);
}

TEST_CASE("ingest maps tokens to internal indices") {
    VertexRegistry registry;
    registry.register_vertex("a");
    registry.register_vertex("b");
    const std::vector<std::string> src = {"a"}, dst = {"b"};
    const std::vector<double> w = {3.0};
    const EdgeList edges = ingest_edgelist(src, dst, w, registry);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0] == Edge{0, 1, 3.0});
}

TEST_CASE("ingest accepts empty input") {
    VertexRegistry registry;
    registry.register_vertex("a");
    CHECK(ingest_edgelist({}, {}, {}, registry).empty());
}

TEST_CASE("ingest reports unknown token with row number") {
    VertexRegistry registry;
    registry.register_vertex("a");
    const std::vector<std::string> src = {"a"}, dst = {"zz"};
    const std::vector<double> w = {1.0};
    try {
        ingest_edgelist(src, dst, w, registry);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string message = e.what();
        CHECK(message.find("zz") != std::string::npos);
        CHECK(message.find("row 1") != std::string::npos);
    }
}

TEST_CASE("ingest rejects negative and non-finite weights") {
    VertexRegistry registry;
    registry.register_vertex("a");
    registry.register_vertex("b");
    const std::vector<std::string> src = {"a"}, dst = {"b"};
    CHECK_THROWS_AS(ingest_edgelist(src, dst, std::vector<double>{-1.0}, registry),
                    ValidationError);
    CHECK_THROWS_AS(ingest_edgelist(src, dst,
                                    std::vector<double>{
                                        std::numeric_limits<double>::infinity()},
                                    registry),
                    ValidationError);
    // explicit override accepts negative weights
    const EdgeList edges =
        ingest_edgelist(src, dst, std::vector<double>{-1.0}, registry, true);
    CHECK(edges[0].weight == -1.0);
}

TEST_CASE("load_labels computes class counts") {
    VertexRegistry registry;
    for (const char* t : {"v0", "v1", "v2"}) registry.register_vertex(t);
    const std::vector<LabelRow> rows = {{"v0", 1}, {"v1", 1}, {"v2", 2}};
    const LabelVector labels = load_labels(rows, registry, 2);
    CHECK(labels.labels == std::vector<int>{1, 1, 2});
    CHECK(labels.class_counts[1] == 2);
    CHECK(labels.class_counts[2] == 1);
    CHECK(labels.class_counts[0] == 0);
}

TEST_CASE("vertices absent from label rows get label 0") {
    VertexRegistry registry;
    for (const char* t : {"v0", "v1", "v2"}) registry.register_vertex(t);
    const std::vector<LabelRow> rows = {{"v0", 1}};
    const LabelVector labels = load_labels(rows, registry, 2);
    CHECK(labels.labels == std::vector<int>{1, 0, 0});
    CHECK(labels.class_counts[1] == 1);
    CHECK(labels.class_counts[2] == 0);
    CHECK(labels.class_counts[0] == 2);
}

TEST_CASE("load_labels validates community range and conflicts") {
    VertexRegistry registry;
    registry.register_vertex("v0");
    CHECK_THROWS_AS(load_labels(std::vector<LabelRow>{{"v0", 5}}, registry, 2),
                    ValidationError);
    CHECK_THROWS_AS(load_labels(std::vector<LabelRow>{{"v0", 0}}, registry, 2),
                    ValidationError);
    CHECK_THROWS_AS(
        load_labels(std::vector<LabelRow>{{"v0", 1}, {"v0", 2}}, registry, 2),
        ValidationError);
    // duplicate with the same community is fine
    CHECK_NOTHROW(load_labels(std::vector<LabelRow>{{"v0", 1}, {"v0", 1}}, registry, 1));
}

TEST_CASE("class counts partition n for random label vectors") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.next_below(200);
        const int k = 1 + static_cast<int>(rng.next_below(8));
        std::vector<int> raw(n);
        for (auto& label : raw)
            label = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k) + 1));
        const LabelVector labels = LabelVector::from_labels(raw, k);
        const auto total = std::accumulate(labels.class_counts.begin(),
                                           labels.class_counts.end(), std::int64_t{0});
        CHECK(total == static_cast<std::int64_t>(n));
    }
}

TEST_CASE("temporal graph validation") {
    TemporalGraph graph;
    graph.n = 2;
    CHECK_THROWS_AS(graph.validate(), ValidationError);  // T = 0
    graph.steps.push_back({{0, 5, 1.0}});
    CHECK_THROWS_AS(graph.validate(), ValidationError);  // endpoint out of range
    graph.steps[0] = {{0, 1, 1.0}};
    CHECK_NOTHROW(graph.validate());
}

TEST_CASE("edge file round-trip is bit exact") {
    const fs::path dir = temp_dir();
    const fs::path edges_path = dir / "roundtrip_edges.tsv";

    VertexRegistry registry;
    for (const char* t : {"alpha", "beta", "gamma"}) registry.register_vertex(t);
    TemporalGraph graph;
    graph.n = 3;
    graph.steps = {
        {{0, 1, 0.1}, {1, 2, 1.0 / 3.0}, {0, 2, 12345.6789}},
        {{2, 0, 1e-17}, {1, 1, 7.0}},
    };
    write_edge_file(edges_path, graph, registry);

    const LoadedGraph loaded = load_graph({edges_path}, "", 0, true);
    REQUIRE(loaded.graph.time_steps() == 2);
    for (std::size_t t = 0; t < 2; ++t) {
        REQUIRE(loaded.graph.steps[t].size() == graph.steps[t].size());
        for (std::size_t e = 0; e < graph.steps[t].size(); ++e) {
            const Edge& original = graph.steps[t][e];
            const Edge& reloaded = loaded.graph.steps[t][e];
            CHECK(loaded.registry.token_of(reloaded.source) ==
                  registry.token_of(original.source));
            CHECK(loaded.registry.token_of(reloaded.target) ==
                  registry.token_of(original.target));
            CHECK(reloaded.weight == original.weight);  // bit-for-bit
        }
    }
}

TEST_CASE("edge files auto-detect comma delimiter and skip comments") {
    const fs::path dir = temp_dir();
    const fs::path path = dir / "comma_edges.csv";
    {
        std::FILE* f = std::fopen(path.string().c_str(), "w");
        std::fputs("# comment line\na,b,2.5\nb,c,1\n\n", f);
        std::fclose(f);
    }
    const auto rows = read_edge_file(path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].src == "a");
    CHECK(rows[0].weight == 2.5);
    CHECK(rows[0].t == 0);
}

TEST_CASE("vertex universe includes label-only vertices") {
    const fs::path dir = temp_dir();
    const fs::path edges_path = dir / "universe_edges.tsv";
    const fs::path labels_path = dir / "universe_labels.tsv";
    {
        std::FILE* f = std::fopen(edges_path.string().c_str(), "w");
        std::fputs("a\tb\t1\t1\n", f);
        std::fclose(f);
        f = std::fopen(labels_path.string().c_str(), "w");
        std::fputs("a\t1\nb\t1\nisolated\t2\n", f);
        std::fclose(f);
    }
    const LoadedGraph loaded = load_graph({edges_path}, labels_path, 0, true);
    CHECK(loaded.graph.n == 3);
    CHECK(loaded.labels.labels[loaded.registry.index_of("isolated")] == 2);
}

TEST_CASE("mixed timed and untimed rows are rejected") {
    const fs::path dir = temp_dir();
    const fs::path path = dir / "mixed_edges.tsv";
    {
        std::FILE* f = std::fopen(path.string().c_str(), "w");
        std::fputs("a\tb\t1\t1\na\tb\t1\n", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(load_graph({path}, "", 0, true), ValidationError);
}

TEST_CASE("missing file raises IoError") {
    CHECK_THROWS_AS(read_edge_file("/nonexistent/edges.tsv"), IoError);
}
