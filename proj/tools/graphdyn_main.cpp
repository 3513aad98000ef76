// graphdyn: temporal graph embedding, dynamics, synthesis and benchmarking.
// Every run writes its outputs into a fresh directory together with a
// deterministic manifest.json (config echo) and a timings.json; data files
// are byte-reproducible for a fixed seed and --threads 1.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "graphdyn/bench.hpp"
#include "graphdyn/common.hpp"
#include "graphdyn/dynamics.hpp"
#include "graphdyn/encoder.hpp"
#include "graphdyn/io.hpp"
#include "graphdyn/rng.hpp"
#include "graphdyn/spectral.hpp"
#include "graphdyn/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace graphdyn;

namespace {

struct CommonArgs {
    std::vector<std::string> edges;
    std::string labels;
    std::string out;
    int k = 0;
    std::size_t ref_time = 1;  // 1-based
    bool directed = false;
    bool allow_negative = false;
    int threads = 0;
    std::uint64_t seed = 0;
};

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

fs::path prepare_out_dir(const std::string& out) {
    if (out.empty()) throw ValidationError("--out directory is required");
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out + "': " + ec.message());
    return dir;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const std::vector<std::string>& outputs) {
    json manifest;
    manifest["command"] = command;
    manifest["version"] = version_string();
    manifest["config"] = config;
    manifest["outputs"] = outputs;
    write_json(dir / "manifest.json", manifest);
}

std::vector<fs::path> to_paths(const std::vector<std::string>& names) {
    return {names.begin(), names.end()};
}

LoadedGraph load_from_args(const CommonArgs& args) {
    return load_graph(to_paths(args.edges), args.labels, args.k, !args.directed,
                      args.allow_negative);
}

// ---------------------------------------------------------------------------
// embed

int cmd_embed(const CommonArgs& args, bool binary) {
    if (args.labels.empty())
        throw ValidationError("embed requires --labels (the encoder is label-conditioned)");
    const fs::path dir = prepare_out_dir(args.out);
    const int threads = args.threads > 0 ? args.threads : default_threads();

    StopWatch total;
    StopWatch phase;
    LoadedGraph loaded = load_from_args(args);
    const double ingest_s = phase.seconds();

    phase.reset();
    EmbeddingSeries z = temporal_encoder_embedding(loaded.graph, loaded.labels, threads);
    const double embed_s = phase.seconds();

    phase.reset();
    write_embedding_text(dir / "embeddings.tsv", z, loaded.registry);
    std::vector<std::string> outputs = {"embeddings.tsv"};
    if (binary) {
        write_embedding_binary(dir / "embeddings.bin", z);
        outputs.push_back("embeddings.bin");
    }
    const double write_s = phase.seconds();

    json config = {{"edges", args.edges},      {"labels", args.labels},
                   {"k", loaded.labels.k},     {"undirected", !args.directed},
                   {"threads", threads},       {"binary", binary},
                   {"n", loaded.graph.n},      {"t", loaded.graph.time_steps()},
                   {"total_edges", loaded.graph.total_edges()}};
    write_manifest(dir, "embed", config, outputs);
    write_json(dir / "timings.json", {{"ingest_seconds", ingest_s},
                                      {"embed_seconds", embed_s},
                                      {"write_seconds", write_s},
                                      {"total_seconds", total.seconds()}});
    std::cout << "embedded n=" << loaded.graph.n << " K=" << loaded.labels.k
              << " T=" << loaded.graph.time_steps() << " ("
              << loaded.graph.total_edges() << " edges) in " << embed_s << " s\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// dynamics

void write_threshold_file(const fs::path& path, const DynamicsReport& report,
                          double outlier_threshold, double inlier_threshold) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "# t\tconsidered_all\toutlier_frac_all\tinlier_frac_all"
           "\tconsidered_active\toutlier_frac_active\tinlier_frac_active\n";
    for (std::size_t t = 0; t < report.time_steps(); ++t) {
        const auto all = threshold_summary(report, t, outlier_threshold, inlier_threshold, true);
        const auto active =
            threshold_summary(report, t, outlier_threshold, inlier_threshold, false);
        out << (t + 1) << '\t' << all.considered << '\t' << format_double(all.outlier_fraction)
            << '\t' << format_double(all.inlier_fraction) << '\t' << active.considered << '\t'
            << format_double(active.outlier_fraction) << '\t'
            << format_double(active.inlier_fraction) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_ranking_file(const fs::path& path, const DynamicsReport& report, std::size_t t,
                        const VertexRegistry& registry) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "# rank\tvertex\tdynamic\tinactive\n";
    const auto order = rank_by_dynamic_active(report, t);
    for (std::size_t r = 0; r < order.size(); ++r) {
        const VertexIndex i = order[r];
        out << (r + 1) << '\t' << registry.token_of(i) << '\t'
            << format_double(report.vertex[t][i]) << '\t'
            << static_cast<int>(report.inactive[t][i]) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

int cmd_dynamics(const CommonArgs& args, const std::string& embeddings_file,
                 double outlier_threshold, double inlier_threshold, int bins,
                 std::size_t hist_time) {
    if (embeddings_file.empty() && args.edges.empty())
        throw ValidationError(
            "dynamics needs --embeddings (from a previous `graphdyn embed`) or --edges");
    const fs::path dir = prepare_out_dir(args.out);
    const int threads = args.threads > 0 ? args.threads : default_threads();

    StopWatch total;
    VertexRegistry registry;
    EmbeddingSeries z;
    LabelVector labels;
    bool have_labels = false;

    StopWatch phase;
    if (!embeddings_file.empty()) {
        z = read_embedding_text(embeddings_file, registry);
        if (!args.labels.empty()) {
            auto rows = read_label_file(args.labels);
            for (const auto& row : rows) registry.register_vertex(row.token);
            if (registry.size() != z.n)
                throw ValidationError("label file names vertices absent from the embedding");
            int k = args.k;
            if (k == 0)
                for (const auto& row : rows) k = std::max(k, row.community);
            labels = load_labels(rows, registry, k);
            have_labels = true;
        }
    } else {
        if (args.labels.empty())
            throw ValidationError("dynamics from raw edges requires --labels");
        LoadedGraph loaded = load_from_args(args);
        registry = std::move(loaded.registry);
        labels = std::move(loaded.labels);
        have_labels = true;
        z = temporal_encoder_embedding(loaded.graph, labels, threads);
    }
    const double ingest_s = phase.seconds();

    if (args.ref_time < 1 || args.ref_time > z.time_steps())
        throw ValidationError("--ref-time must lie in [1, T]");
    const std::size_t ref_t = args.ref_time - 1;

    phase.reset();
    DynamicsReport report;
    if (have_labels) {
        report = compute_dynamics(z, ref_t, labels);
    } else {
        report.n = z.n;
        report.k = z.k;
        report.reference_time = ref_t;
        report.row_active = z.normalized;
        report.vertex = vertex_dynamic(z, ref_t, &report.inactive);
        report.graph = graph_dynamic(report.vertex);
    }
    const double dynamics_s = phase.seconds();

    phase.reset();
    write_vertex_dynamics(dir / "vertex_dynamics.tsv", report, registry);
    write_graph_dynamics(dir / "graph_dynamics.tsv", report);
    std::vector<std::string> outputs = {"vertex_dynamics.tsv", "graph_dynamics.tsv"};
    if (have_labels) {
        write_community_dynamics(dir / "community_dynamics.tsv", report);
        outputs.push_back("community_dynamics.tsv");
    }
    write_threshold_file(dir / "threshold_summary.tsv", report, outlier_threshold,
                         inlier_threshold);
    outputs.push_back("threshold_summary.tsv");

    const std::size_t h_t = hist_time == 0 ? z.time_steps() - 1 : hist_time - 1;
    if (h_t >= z.time_steps()) throw ValidationError("--hist-time out of range");
    std::vector<double> edges_vec(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b)
        edges_vec[static_cast<std::size_t>(b)] = static_cast<double>(b) / bins;
    write_histogram(dir / "histogram.tsv", edges_vec,
                    histogram(report.vertex[h_t], edges_vec));
    outputs.push_back("histogram.tsv");

    write_ranking_file(dir / "ranking.tsv", report, z.time_steps() - 1, registry);
    outputs.push_back("ranking.tsv");
    const double write_s = phase.seconds();

    json config = {{"embeddings", embeddings_file},
                   {"edges", args.edges},
                   {"labels", args.labels},
                   {"ref_time", args.ref_time},
                   {"outlier_threshold", outlier_threshold},
                   {"inlier_threshold", inlier_threshold},
                   {"bins", bins},
                   {"n", z.n},
                   {"k", z.k},
                   {"t", z.time_steps()}};
    write_manifest(dir, "dynamics", config, outputs);
    write_json(dir / "timings.json", {{"ingest_seconds", ingest_s},
                                      {"dynamics_seconds", dynamics_s},
                                      {"write_seconds", write_s},
                                      {"total_seconds", total.seconds()}});
    std::cout << "dynamics over T=" << z.time_steps() << " written to " << dir.string()
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

std::map<std::string, std::string> params_map(const fs::path& path) {
    std::map<std::string, std::string> map;
    for (auto& [key, value] : read_params_file(path)) map[key] = value;
    return map;
}

double get_num(const std::map<std::string, std::string>& map, const std::string& key,
               double fallback) {
    auto it = map.find(key);
    if (it == map.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ValidationError("parameter '" + key + "': cannot parse '" + it->second + "'");
    }
}

std::string get_str(const std::map<std::string, std::string>& map, const std::string& key,
                    const std::string& fallback) {
    auto it = map.find(key);
    return it == map.end() ? fallback : it->second;
}

int cmd_simulate(const std::string& params_file, const std::string& out,
                 std::uint64_t seed_override, bool has_seed_override) {
    const fs::path dir = prepare_out_dir(out);
    auto map = params_map(params_file);

    SbmParams sbm;
    sbm.n = static_cast<std::size_t>(get_num(map, "n", 1000));
    sbm.k = static_cast<int>(get_num(map, "k", 20));
    const double diag = get_num(map, "block_diag", 0.5);
    const double off = get_num(map, "block_offdiag", 0.1);
    sbm.block = SbmParams::two_level_block(sbm.k, diag, off);
    const std::string assignment = get_str(map, "labels", "round-robin");
    if (assignment == "round-robin") {
        sbm.assignment = LabelAssignment::kRoundRobin;
    } else if (assignment == "categorical") {
        sbm.assignment = LabelAssignment::kCategorical;
        sbm.prior.assign(static_cast<std::size_t>(sbm.k), 1.0 / sbm.k);
    } else {
        throw ValidationError("labels must be 'round-robin' or 'categorical'");
    }
    const std::string theta = get_str(map, "theta", "beta");
    if (theta == "beta") {
        sbm.degree_corrected = true;
        sbm.theta_alpha = get_num(map, "theta_alpha", 1.0);
        sbm.theta_beta = get_num(map, "theta_beta", 4.0);
    } else if (theta == "none") {
        sbm.degree_corrected = false;
    } else {
        throw ValidationError("theta must be 'beta' or 'none'");
    }
    sbm.weight_min = get_num(map, "weight_min", 1.0);
    sbm.weight_max = get_num(map, "weight_max", 100.0);
    sbm.seed = static_cast<std::uint64_t>(get_num(map, "seed", 0));
    if (has_seed_override) sbm.seed = seed_override;

    EvolutionParams evolution;
    evolution.t = static_cast<std::size_t>(get_num(map, "t", 1));
    evolution.change_fraction = get_num(map, "change_fraction", 0.5);
    evolution.perturb_min = get_num(map, "perturb_min", -20.0);
    evolution.perturb_max = get_num(map, "perturb_max", 20.0);

    StopWatch total;
    SynthGraph base = generate_dcsbm(sbm);
    TemporalGraph graph =
        evolve_graph(base.edges, evolution, sbm.n, Rng::derive_seed(sbm.seed, 0xe01));
    // row form: each edge stored once per direction; consumers read the
    // output with --directed, embeddings are unchanged
    const bool directed_rows = get_str(map, "directed_rows", "false") == "true";
    if (directed_rows) graph = expand_to_directed(graph);
    const double generate_s = total.seconds();

    std::vector<VertexIndex> planted;
    const auto outlier_count = static_cast<std::size_t>(get_num(map, "outlier_count", 0));
    if (outlier_count > 0) {
        OutlierSpec spec;
        spec.count = outlier_count;
        const std::string when = get_str(map, "outlier_time", "last");
        if (when == "last") {
            spec.at_last_step = true;
        } else {
            spec.at_last_step = false;
            spec.injection_time = static_cast<std::size_t>(std::stod(when)) - 1;
        }
        spec.weight_min = get_num(map, "outlier_weight_min", 500.0);
        spec.weight_max = get_num(map, "outlier_weight_max", 1000.0);
        spec.edges_min = static_cast<int>(get_num(map, "outlier_edges_min", 1));
        spec.edges_max = static_cast<int>(get_num(map, "outlier_edges_max", 2));
        spec.add_new_edges = get_str(map, "outlier_mode", "overwrite") == "add";
        spec.seed = Rng::derive_seed(sbm.seed, 0xa11);
        planted = inject_outliers(graph, spec);
    }

    VertexRegistry registry;
    for (std::size_t i = 0; i < sbm.n; ++i) registry.register_vertex(std::to_string(i));

    StopWatch write_watch;
    write_edge_file(dir / "edges.tsv", graph, registry);
    write_label_file(dir / "labels.tsv", base.labels, registry);
    std::vector<std::string> outputs = {"edges.tsv", "labels.tsv"};
    if (!planted.empty()) {
        std::ofstream manifest(dir / "outliers.tsv");
        manifest << "# planted outlier vertices\n";
        for (const VertexIndex v : planted) manifest << registry.token_of(v) << '\n';
        outputs.push_back("outliers.tsv");
    }

    json config;
    for (const auto& [key, value] : map) config[key] = value;
    config["seed"] = sbm.seed;
    config["planted"] = planted.size();
    write_manifest(dir, "simulate", config, outputs);
    write_json(dir / "timings.json", {{"generate_seconds", generate_s},
                                      {"write_seconds", write_watch.seconds()},
                                      {"total_seconds", total.seconds()}});
    std::cout << "simulated n=" << sbm.n << " T=" << graph.time_steps() << " ("
              << graph.total_edges() << " edges), seed " << sbm.seed << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// inject-outliers

int cmd_inject(const CommonArgs& args, std::size_t count, long time_1based, double w_lo,
               double w_hi, int e_lo, int e_hi, const std::string& mode) {
    const fs::path dir = prepare_out_dir(args.out);
    LoadedGraph loaded = load_from_args(args);

    OutlierSpec spec;
    spec.count = count;
    if (time_1based <= 0) {
        spec.at_last_step = true;
    } else {
        spec.at_last_step = false;
        spec.injection_time = static_cast<std::size_t>(time_1based) - 1;
    }
    spec.weight_min = w_lo;
    spec.weight_max = w_hi;
    spec.edges_min = e_lo;
    spec.edges_max = e_hi;
    if (mode != "overwrite" && mode != "add")
        throw ValidationError("--mode must be 'overwrite' or 'add'");
    spec.add_new_edges = mode == "add";
    spec.seed = args.seed;

    const auto planted = inject_outliers(loaded.graph, spec);
    write_edge_file(dir / "edges.tsv", loaded.graph, loaded.registry);
    std::ofstream manifest(dir / "outliers.tsv");
    manifest << "# planted outlier vertices\n";
    for (const VertexIndex v : planted) manifest << loaded.registry.token_of(v) << '\n';

    json config = {{"edges", args.edges}, {"count", count},   {"time", time_1based},
                   {"weight_min", w_lo},  {"weight_max", w_hi}, {"mode", mode},
                   {"seed", args.seed}};
    write_manifest(dir, "inject-outliers", config, {"edges.tsv", "outliers.tsv"});
    std::cout << "planted " << planted.size() << " outliers\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// spectral

int cmd_spectral(const CommonArgs& args, int d, double tolerance, int max_iterations) {
    const fs::path dir = prepare_out_dir(args.out);
    StopWatch total;
    LoadedGraph loaded = load_from_args(args);
    const double ingest_s = total.seconds();

    SpectralOptions options;
    options.d = d;
    options.tolerance = tolerance;
    options.max_iterations = max_iterations;
    options.seed = args.seed == 0 ? 7 : args.seed;

    if (args.ref_time < 1 || args.ref_time > loaded.graph.time_steps())
        throw ValidationError("--ref-time must lie in [1, T]");

    StopWatch phase;
    UnfoldedEmbedding embedding = unfolded_spectral_embed(loaded.graph, options);
    const double embed_s = phase.seconds();

    phase.reset();
    write_spectral_embedding_text(dir / "spectral_embeddings.tsv", embedding,
                                  loaded.registry);
    {
        std::ofstream sv(dir / "singular_values.tsv");
        sv << "# rank\tsigma\n";
        for (std::size_t j = 0; j < embedding.singular_values.size(); ++j)
            sv << (j + 1) << '\t' << format_double(embedding.singular_values[j]) << '\n';
    }
    {
        std::ofstream dist(dir / "spectral_distance.tsv");
        dist << "# t\tvertex\tdistance\n";
        for (std::size_t t = 0; t < loaded.graph.time_steps(); ++t) {
            const auto measure = spectral_outlier_measure(embedding, args.ref_time - 1, t);
            for (std::size_t i = 0; i < embedding.n; ++i)
                dist << (t + 1) << '\t'
                     << loaded.registry.token_of(static_cast<VertexIndex>(i)) << '\t'
                     << format_double(measure[i]) << '\n';
        }
    }
    const double write_s = phase.seconds();

    json config = {{"edges", args.edges},     {"d", d},
                   {"tolerance", tolerance},  {"max_iterations", max_iterations},
                   {"ref_time", args.ref_time}, {"seed", options.seed},
                   {"n", loaded.graph.n},     {"t", loaded.graph.time_steps()}};
    write_manifest(dir, "spectral", config,
                   {"spectral_embeddings.tsv", "singular_values.tsv",
                    "spectral_distance.tsv"});
    write_json(dir / "timings.json", {{"ingest_seconds", ingest_s},
                                      {"embed_seconds", embed_s},
                                      {"write_seconds", write_s},
                                      {"total_seconds", total.seconds()}});
    std::cout << "spectral d=" << d << " top singular value "
              << (embedding.singular_values.empty() ? 0.0 : embedding.singular_values[0])
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// benchmark

int cmd_benchmark(const std::string& out, const std::string& n_grid_csv,
                  const std::string& t_grid_csv, int k, int replicates, double degree,
                  bool with_spectral, int d, std::uint64_t seed) {
    const fs::path dir = prepare_out_dir(out);
    auto parse_grid = [](const std::string& csv) {
        std::vector<std::size_t> grid;
        std::size_t begin = 0;
        while (begin <= csv.size()) {
            const auto comma = csv.find(',', begin);
            const std::string item =
                csv.substr(begin, comma == std::string::npos ? csv.size() - begin
                                                             : comma - begin);
            if (!item.empty()) grid.push_back(static_cast<std::size_t>(std::stoull(item)));
            if (comma == std::string::npos) break;
            begin = comma + 1;
        }
        return grid;
    };

    BenchmarkOptions options;
    options.n_grid = parse_grid(n_grid_csv);
    options.t_grid = parse_grid(t_grid_csv);
    options.k = k;
    options.replicates = replicates;
    options.mean_degree = degree;
    options.with_spectral = with_spectral;
    options.spectral_d = d;
    options.seed = seed;

    StopWatch total;
    const auto cells = run_benchmark(options);

    std::ofstream table(dir / "benchmark.tsv");
    table << "# n\tt\ttotal_edges\tencoder_mean_s\tencoder_std_s\tencoder_min_s"
             "\tspectral_mean_s\tspectral_std_s\tspectral_min_s\n";
    for (const auto& cell : cells) {
        table << cell.n << '\t' << cell.t << '\t' << cell.total_edges << '\t'
              << format_double(cell.encoder_mean) << '\t' << format_double(cell.encoder_stddev)
              << '\t' << format_double(cell.encoder_min);
        if (cell.spectral_mean >= 0.0)
            table << '\t' << format_double(cell.spectral_mean) << '\t'
                  << format_double(cell.spectral_stddev) << '\t'
                  << format_double(cell.spectral_min) << '\n';
        else
            table << "\tnan\tnan\tnan\n";
    }
    table.close();

    json config = {{"n_grid", options.n_grid}, {"t_grid", options.t_grid},
                   {"k", k},                   {"replicates", replicates},
                   {"mean_degree", degree},    {"with_spectral", with_spectral},
                   {"d", d},                   {"seed", seed}};
    write_manifest(dir, "benchmark", config, {"benchmark.tsv"});
    write_json(dir / "timings.json", {{"total_seconds", total.seconds()}});
    for (const auto& cell : cells) {
        std::cout << "n=" << cell.n << " t=" << cell.t << " edges=" << cell.total_edges
                  << " encoder=" << cell.encoder_mean << "s";
        if (cell.spectral_mean >= 0.0) std::cout << " spectral=" << cell.spectral_mean << "s";
        std::cout << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

std::vector<VertexIndex> rank_descending(const std::vector<double>& score,
                                         const std::vector<std::uint8_t>& eligible) {
    std::vector<VertexIndex> order;
    for (std::size_t i = 0; i < score.size(); ++i)
        if (eligible[i]) order.push_back(static_cast<VertexIndex>(i));
    std::stable_sort(order.begin(), order.end(),
                     [&](VertexIndex a, VertexIndex b) { return score[a] > score[b]; });
    return order;
}

int cmd_compare(const CommonArgs& args, int d, long time_1based,
                const std::string& planted_file) {
    if (args.labels.empty()) throw ValidationError("compare requires --labels");
    const fs::path dir = prepare_out_dir(args.out);
    LoadedGraph loaded = load_from_args(args);
    const std::size_t t_count = loaded.graph.time_steps();
    const std::size_t t =
        time_1based <= 0 ? t_count - 1 : static_cast<std::size_t>(time_1based) - 1;
    if (t >= t_count || args.ref_time < 1 || args.ref_time > t_count)
        throw ValidationError("time indices out of range");
    const std::size_t ref_t = args.ref_time - 1;

    EmbeddingSeries z = temporal_encoder_embedding(loaded.graph, loaded.labels,
                                                   args.threads > 0 ? args.threads
                                                                    : default_threads());
    DynamicsReport report = compute_dynamics(z, ref_t, loaded.labels);

    SpectralOptions options;
    options.d = d;
    options.seed = args.seed == 0 ? 7 : args.seed;
    UnfoldedEmbedding use = unfolded_spectral_embed(loaded.graph, options);
    const auto distance = spectral_outlier_measure(use, ref_t, t);

    // rank both methods over the same universe: vertices active at both the
    // reference time and t, where the change measures are informative
    std::vector<std::uint8_t> eligible(loaded.graph.n, 0);
    for (std::size_t i = 0; i < loaded.graph.n; ++i)
        eligible[i] = report.row_active[ref_t][i] && report.row_active[t][i];
    const auto encoder_order = rank_descending(report.vertex[t], eligible);
    const auto spectral_order = rank_descending(distance, eligible);

    std::vector<std::size_t> encoder_rank(loaded.graph.n, 0), spectral_rank(loaded.graph.n, 0);
    for (std::size_t r = 0; r < encoder_order.size(); ++r)
        encoder_rank[encoder_order[r]] = r + 1;
    for (std::size_t r = 0; r < spectral_order.size(); ++r)
        spectral_rank[spectral_order[r]] = r + 1;

    std::ofstream joint(dir / "joint_rankings.tsv");
    joint << "# vertex\tencoder_dynamic\tencoder_rank\tspectral_distance\tspectral_rank\n";
    for (std::size_t i = 0; i < loaded.graph.n; ++i) {
        if (!eligible[i]) continue;
        joint << loaded.registry.token_of(static_cast<VertexIndex>(i)) << '\t'
              << format_double(report.vertex[t][i]) << '\t' << encoder_rank[i] << '\t'
              << format_double(distance[i]) << '\t' << spectral_rank[i] << '\n';
    }
    joint.close();
    std::vector<std::string> outputs = {"joint_rankings.tsv"};

    if (!planted_file.empty()) {
        std::vector<VertexIndex> planted;
        for (const auto& token : read_token_file(planted_file))
            planted.push_back(loaded.registry.index_of(token));
        auto recall_at = [&](const std::vector<std::size_t>& rank, std::size_t cutoff) {
            std::size_t hits = 0;
            for (const VertexIndex v : planted)
                if (rank[v] >= 1 && rank[v] <= cutoff) ++hits;
            return planted.empty() ? 0.0
                                   : static_cast<double>(hits) /
                                         static_cast<double>(planted.size());
        };
        std::ofstream recall(dir / "recall.tsv");
        recall << "# cutoff\tencoder_recall\tspectral_recall\n";
        for (const std::size_t cutoff : {std::size_t{10}, std::size_t{50}})
            recall << cutoff << '\t' << format_double(recall_at(encoder_rank, cutoff)) << '\t'
                   << format_double(recall_at(spectral_rank, cutoff)) << '\n';
        outputs.push_back("recall.tsv");
    }

    json config = {{"edges", args.edges},   {"labels", args.labels}, {"d", d},
                   {"ref_time", args.ref_time}, {"time", t + 1},     {"seed", args.seed},
                   {"planted", planted_file}};
    write_manifest(dir, "compare", config, outputs);
    std::cout << "compared encoder vs spectral at t=" << (t + 1) << " over "
              << encoder_order.size() << " active vertices\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"temporal graph encoder embedding, dynamics and baselines"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common_io = [&](CLI::App* cmd, bool needs_labels) {
        cmd->add_option("--edges", args.edges,
                        "edge file(s): one per time step, or one file with a t column")
            ->required();
        auto* labels = cmd->add_option("--labels", args.labels, "vertex,community file");
        if (needs_labels) labels->required();
        cmd->add_option("--out", args.out, "output directory")->required();
        cmd->add_option("--k", args.k, "number of communities (0 = infer from labels)");
        cmd->add_flag("--directed", args.directed, "treat edges as directed");
        cmd->add_flag("--allow-negative", args.allow_negative, "accept negative weights");
        cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
        cmd->add_option("--seed", args.seed, "random seed");
    };

    // embed
    auto* embed = app.add_subcommand("embed", "temporal encoder embedding");
    bool binary = false;
    add_common_io(embed, true);
    embed->add_flag("--binary", binary, "also write the flat binary embedding");

    // dynamics
    auto* dynamics = app.add_subcommand("dynamics", "vertex/community/graph dynamics");
    std::string embeddings_file;
    double outlier_threshold = 0.5, inlier_threshold = 0.1;
    int bins = 20;
    std::size_t hist_time = 0;
    dynamics->add_option("--embeddings", embeddings_file, "embeddings.tsv from `embed`");
    dynamics->add_option("--edges", args.edges, "edge file(s) (alternative to --embeddings)");
    dynamics->add_option("--labels", args.labels, "vertex,community file");
    dynamics->add_option("--out", args.out, "output directory")->required();
    dynamics->add_option("--k", args.k, "number of communities (0 = infer)");
    dynamics->add_option("--ref-time", args.ref_time, "reference time step (1-based)");
    dynamics->add_flag("--directed", args.directed, "treat edges as directed");
    dynamics->add_flag("--allow-negative", args.allow_negative, "accept negative weights");
    dynamics->add_option("--threads", args.threads, "worker threads (0 = hardware)");
    dynamics->add_option("--threshold-outlier", outlier_threshold, "outlier threshold");
    dynamics->add_option("--threshold-inlier", inlier_threshold, "inlier threshold");
    dynamics->add_option("--bins", bins, "histogram bin count over [0,1]");
    dynamics->add_option("--hist-time", hist_time, "histogram time step (default last)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic time series");
    std::string params_file, sim_out;
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    simulate->add_option("--params", params_file, "key = value parameter file")->required();
    simulate->add_option("--out", sim_out, "output directory")->required();
    simulate->add_option("--seed", sim_seed, "override the seed in the parameter file")
        ->each([&](const std::string&) { sim_seed_set = true; });

    // inject-outliers
    auto* inject = app.add_subcommand("inject-outliers", "plant outlier edge weights");
    std::size_t inj_count = 10;
    long inj_time = 0;
    double inj_wlo = 500.0, inj_whi = 1000.0;
    int inj_elo = 1, inj_ehi = 2;
    std::string inj_mode = "overwrite";
    add_common_io(inject, false);
    inject->add_option("--count", inj_count, "number of outlier vertices");
    inject->add_option("--time", inj_time, "injection time step (default: last)");
    inject->add_option("--wmin", inj_wlo, "outlier weight lower bound");
    inject->add_option("--wmax", inj_whi, "outlier weight upper bound");
    inject->add_option("--emin", inj_elo, "min edges per outlier");
    inject->add_option("--emax", inj_ehi, "max edges per outlier");
    inject->add_option("--mode", inj_mode, "overwrite existing edges or add new ones");

    // spectral
    auto* spectral = app.add_subcommand("spectral", "unfolded spectral embedding baseline");
    int spec_d = 10, spec_iters = 200;
    double spec_tol = 1e-8;
    add_common_io(spectral, false);
    spectral->add_option("--dim", spec_d, "embedding dimension");
    spectral->add_option("--tol", spec_tol, "singular value tolerance");
    spectral->add_option("--max-iter", spec_iters, "iteration cap");
    spectral->add_option("--ref-time", args.ref_time, "reference time step (1-based)");

    // benchmark
    auto* benchmark = app.add_subcommand("benchmark", "timing grid over (n, T)");
    std::string bench_out, n_grid = "5000,10000,20000,40000", t_grid = "3";
    int bench_k = 20, bench_reps = 10, bench_d = 3;
    double bench_degree = 40.0;
    bool bench_spectral = false;
    std::uint64_t bench_seed = 0;
    benchmark->add_option("--out", bench_out, "output directory")->required();
    benchmark->add_option("--n-grid", n_grid, "comma-separated vertex counts");
    benchmark->add_option("--t-grid", t_grid, "comma-separated time step counts");
    benchmark->add_option("--k", bench_k, "number of communities");
    benchmark->add_option("--replicates", bench_reps, "replicates per cell");
    benchmark->add_option("--degree", bench_degree, "target mean degree");
    benchmark->add_flag("--with-spectral", bench_spectral, "also time the spectral baseline");
    benchmark->add_option("--dim", bench_d, "spectral dimension");
    benchmark->add_option("--seed", bench_seed, "random seed");

    // compare
    auto* compare = app.add_subcommand("compare", "encoder vs spectral joint rankings");
    int cmp_d = 10;
    long cmp_time = 0;
    std::string planted_file;
    add_common_io(compare, true);
    compare->add_option("--dim", cmp_d, "spectral dimension");
    compare->add_option("--time", cmp_time, "comparison time step (default: last)");
    compare->add_option("--ref-time", args.ref_time, "reference time step (1-based)");
    compare->add_option("--planted", planted_file, "planted outlier manifest for recall");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (embed->parsed()) return cmd_embed(args, binary);
        if (dynamics->parsed())
            return cmd_dynamics(args, embeddings_file, outlier_threshold, inlier_threshold,
                                bins, hist_time);
        if (simulate->parsed()) return cmd_simulate(params_file, sim_out, sim_seed, sim_seed_set);
        if (inject->parsed())
            return cmd_inject(args, inj_count, inj_time, inj_wlo, inj_whi, inj_elo, inj_ehi,
                              inj_mode);
        if (spectral->parsed()) return cmd_spectral(args, spec_d, spec_tol, spec_iters);
        if (benchmark->parsed())
            return cmd_benchmark(bench_out, n_grid, t_grid, bench_k, bench_reps, bench_degree,
                                 bench_spectral, bench_d, bench_seed);
        if (compare->parsed()) return cmd_compare(args, cmp_d, cmp_time, planted_file);
        std::cerr << "no subcommand given\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
