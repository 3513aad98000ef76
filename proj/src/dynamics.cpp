#include "graphdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "graphdyn/common.hpp"

namespace graphdyn {

namespace {
constexpr double kClampTolerance = 1e-12;

double clamp_dust(double v) {
    if (v < 0.0 && v >= -kClampTolerance) return 0.0;
    if (v > 1.0 && v <= 1.0 + kClampTolerance) return 1.0;
    return v;
}
}  // namespace

std::vector<std::vector<double>> vertex_dynamic(
    const EmbeddingSeries& z, std::size_t ref_t,
    std::vector<std::vector<std::uint8_t>>* inactive_out) {
    const std::size_t t_count = z.time_steps();
    if (ref_t >= t_count) throw ValidationError("reference time out of range");
    const std::size_t n = z.n;
    const std::size_t k = static_cast<std::size_t>(z.k);

    std::vector<std::vector<double>> dyn(t_count, std::vector<double>(n, 0.0));
    if (inactive_out) inactive_out->assign(t_count, std::vector<std::uint8_t>(n, 0));

    const std::vector<double>& zref = z.z[ref_t];
    const std::vector<std::uint8_t>& ref_active = z.normalized[ref_t];
    for (std::size_t t = 0; t < t_count; ++t) {
        const std::vector<double>& zt = z.z[t];
        const std::vector<std::uint8_t>& t_active = z.normalized[t];
        for (std::size_t i = 0; i < n; ++i) {
            const bool active = ref_active[i] && t_active[i];
            if (inactive_out && !active) (*inactive_out)[t][i] = 1;
            if (t == ref_t && active) {
                // <z, z> = 1 by construction for a normalized row
                dyn[t][i] = 0.0;
                continue;
            }
            double ip = 0.0;
            const std::size_t base = i * k;
            for (std::size_t d = 0; d < k; ++d) ip += zt[base + d] * zref[base + d];
            dyn[t][i] = clamp_dust(1.0 - ip);
        }
    }
    return dyn;
}

std::vector<std::vector<double>> community_dynamic(
    const std::vector<std::vector<double>>& vertex_dyn, const LabelVector& labels) {
    const std::size_t n = labels.size();
    const std::size_t k = static_cast<std::size_t>(labels.k);
    std::vector<std::vector<double>> result(vertex_dyn.size(), std::vector<double>(k, 0.0));
    for (std::size_t t = 0; t < vertex_dyn.size(); ++t) {
        if (vertex_dyn[t].size() != n)
            throw ValidationError("label vector does not match vertex dynamic size");
        std::vector<double> sums(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const int label = labels.labels[i];
            if (label > 0) sums[static_cast<std::size_t>(label - 1)] += vertex_dyn[t][i];
        }
        for (std::size_t c = 0; c < k; ++c) {
            const std::int64_t count = labels.class_counts[c + 1];
            result[t][c] = count > 0 ? sums[c] / static_cast<double>(count)
                                     : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return result;
}

std::vector<double> graph_dynamic(const std::vector<std::vector<double>>& vertex_dyn) {
    std::vector<double> result(vertex_dyn.size(), 0.0);
    for (std::size_t t = 0; t < vertex_dyn.size(); ++t) {
        const auto& row = vertex_dyn[t];
        result[t] = row.empty() ? 0.0
                                : std::accumulate(row.begin(), row.end(), 0.0) /
                                      static_cast<double>(row.size());
    }
    return result;
}

DynamicsReport compute_dynamics(const EmbeddingSeries& z, std::size_t ref_t,
                                const LabelVector& labels) {
    DynamicsReport report;
    report.n = z.n;
    report.k = z.k;
    report.reference_time = ref_t;
    report.row_active = z.normalized;
    report.vertex = vertex_dynamic(z, ref_t, &report.inactive);
    report.community = community_dynamic(report.vertex, labels);
    report.graph = graph_dynamic(report.vertex);
    report.graph_active.assign(report.time_steps(), 0.0);
    for (std::size_t t = 0; t < report.time_steps(); ++t) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < report.n; ++i) {
            if (!z.normalized[ref_t][i] || !z.normalized[t][i]) continue;
            sum += report.vertex[t][i];
            ++count;
        }
        report.graph_active[t] = count > 0 ? sum / static_cast<double>(count)
                                           : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

std::vector<double> max_window_dynamic(const std::vector<std::vector<double>>& vertex_dyn,
                                       std::size_t t_lo, std::size_t t_hi) {
    if (t_lo > t_hi || t_hi >= vertex_dyn.size())
        throw ValidationError("invalid dynamics window");
    std::vector<double> result = vertex_dyn[t_lo];
    for (std::size_t t = t_lo + 1; t <= t_hi; ++t)
        for (std::size_t i = 0; i < result.size(); ++i)
            result[i] = std::max(result[i], vertex_dyn[t][i]);
    return result;
}

ThresholdSummary threshold_summary(const DynamicsReport& report, std::size_t t,
                                   double outlier_threshold, double inlier_threshold,
                                   bool include_inactive) {
    if (t >= report.time_steps()) throw ValidationError("time index out of range");
    ThresholdSummary summary;
    const auto& ref_active = report.row_active[report.reference_time];
    const auto& t_active = report.row_active[t];
    for (std::size_t i = 0; i < report.n; ++i) {
        if (!include_inactive && !ref_active[i] && !t_active[i]) continue;
        ++summary.considered;
        const double v = report.vertex[t][i];
        if (v > outlier_threshold) summary.outliers.push_back(static_cast<VertexIndex>(i));
        if (v < inlier_threshold) summary.inliers.push_back(static_cast<VertexIndex>(i));
    }
    if (summary.considered > 0) {
        summary.outlier_fraction =
            static_cast<double>(summary.outliers.size()) / static_cast<double>(summary.considered);
        summary.inlier_fraction =
            static_cast<double>(summary.inliers.size()) / static_cast<double>(summary.considered);
    }
    return summary;
}

std::vector<std::int64_t> histogram(const std::vector<double>& values,
                                    const std::vector<double>& bin_edges) {
    if (bin_edges.size() < 2) throw ValidationError("histogram needs at least two bin edges");
    for (std::size_t b = 1; b < bin_edges.size(); ++b)
        if (bin_edges[b] <= bin_edges[b - 1])
            throw ValidationError("histogram bin edges must be strictly increasing");
    std::vector<std::int64_t> counts(bin_edges.size() - 1, 0);
    for (double v : values) {
        if (v < bin_edges.front() || v > bin_edges.back()) continue;
        auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), v);
        std::size_t bin = static_cast<std::size_t>(it - bin_edges.begin());
        bin = bin == 0 ? 0 : bin - 1;
        if (bin >= counts.size()) bin = counts.size() - 1;  // right edge closed
        ++counts[bin];
    }
    return counts;
}

std::vector<VertexIndex> rank_by_dynamic(const std::vector<double>& dyn) {
    std::vector<VertexIndex> order(dyn.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](VertexIndex a, VertexIndex b) { return dyn[a] > dyn[b]; });
    return order;
}

std::vector<VertexIndex> rank_by_dynamic_active(const DynamicsReport& report,
                                                std::size_t t) {
    if (t >= report.time_steps()) throw ValidationError("time index out of range");
    const auto& dyn = report.vertex[t];
    const auto& ref_active = report.row_active[report.reference_time];
    const auto& t_active = report.row_active[t];
    std::vector<VertexIndex> ranked, flagged;
    for (std::size_t i = 0; i < dyn.size(); ++i) {
        if (ref_active[i] && t_active[i])
            ranked.push_back(static_cast<VertexIndex>(i));
        else
            flagged.push_back(static_cast<VertexIndex>(i));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](VertexIndex a, VertexIndex b) { return dyn[a] > dyn[b]; });
    ranked.insert(ranked.end(), flagged.begin(), flagged.end());
    return ranked;
}

}  // namespace graphdyn
