#include "graphdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "graphdyn/common.hpp"
#include "graphdyn/rng.hpp"

namespace graphdyn {

namespace {

// Row-major dense block, rows x cols.
struct Block {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Block() = default;
    Block(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    void zero() { std::fill(data.begin(), data.end(), 0.0); }
};

// Modified Gram-Schmidt with one re-orthogonalization pass. Columns with
// vanishing norm are zeroed (rank-deficient input).
void orthonormalize(Block& m) {
    for (std::size_t j = 0; j < m.cols; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < j; ++p) {
                double dot = 0.0;
                for (std::size_t i = 0; i < m.rows; ++i) dot += m.at(i, p) * m.at(i, j);
                if (dot != 0.0)
                    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, j) -= dot * m.at(i, p);
            }
        }
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < m.rows; ++i) norm_sq += m.at(i, j) * m.at(i, j);
        const double norm = std::sqrt(norm_sq);
        if (norm > 1e-300) {
            const double inv = 1.0 / norm;
            for (std::size_t i = 0; i < m.rows; ++i) m.at(i, j) *= inv;
        } else {
            for (std::size_t i = 0; i < m.rows; ++i) m.at(i, j) = 0.0;
        }
    }
}

// Cyclic Jacobi on a symmetric matrix; returns eigenvalues/-vectors sorted
// descending. Sizes here are tiny (d + oversample).
void sym_eigen_desc(Block a, std::vector<double>& eigenvalues, Block& eigenvectors) {
    const std::size_t l = a.rows;
    eigenvectors = Block(l, l);
    for (std::size_t i = 0; i < l; ++i) eigenvectors.at(i, i) = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < l; ++p)
            for (std::size_t q = p + 1; q < l; ++q) off += a.at(p, q) * a.at(p, q);
        double diag = 0.0;
        for (std::size_t p = 0; p < l; ++p) diag += a.at(p, p) * a.at(p, p);
        if (off <= 1e-30 * (diag + 1e-300)) break;

        for (std::size_t p = 0; p < l; ++p) {
            for (std::size_t q = p + 1; q < l; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double app = a.at(p, p);
                const double aqq = a.at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < l; ++i) {
                    const double aip = a.at(i, p);
                    const double aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < l; ++i) {
                    const double api = a.at(p, i);
                    const double aqi = a.at(q, i);
                    a.at(p, i) = c * api - s * aqi;
                    a.at(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < l; ++i) {
                    const double vip = eigenvectors.at(i, p);
                    const double viq = eigenvectors.at(i, q);
                    eigenvectors.at(i, p) = c * vip - s * viq;
                    eigenvectors.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a.at(x, x) > a.at(y, y); });
    eigenvalues.resize(l);
    Block sorted(l, l);
    for (std::size_t j = 0; j < l; ++j) {
        eigenvalues[j] = a.at(order[j], order[j]);
        for (std::size_t i = 0; i < l; ++i) sorted.at(i, j) = eigenvectors.at(i, order[j]);
    }
    eigenvectors = std::move(sorted);
}

// y = [A_1 | .. | A_T] x, streaming over edgelists. x has nT rows, y has n.
void apply_unfolding(const TemporalGraph& g, const Block& x, Block& y) {
    y.zero();
    const std::size_t l = x.cols;
    for (std::size_t t = 0; t < g.time_steps(); ++t) {
        const std::size_t base = t * g.n;
        for (const Edge& e : g.steps[t]) {
            const double w = e.weight;
            const double* xv = &x.data[(base + e.target) * l];
            double* yu = &y.data[e.source * l];
            for (std::size_t c = 0; c < l; ++c) yu[c] += w * xv[c];
            if (g.undirected) {
                const double* xu = &x.data[(base + e.source) * l];
                double* yv = &y.data[e.target * l];
                for (std::size_t c = 0; c < l; ++c) yv[c] += w * xu[c];
            }
        }
    }
}

// y = [A_1 | .. | A_T]' x; x has n rows, y has nT.
void apply_unfolding_transpose(const TemporalGraph& g, const Block& x, Block& y) {
    y.zero();
    const std::size_t l = x.cols;
    for (std::size_t t = 0; t < g.time_steps(); ++t) {
        const std::size_t base = t * g.n;
        for (const Edge& e : g.steps[t]) {
            const double w = e.weight;
            const double* xu = &x.data[e.source * l];
            double* yv = &y.data[(base + e.target) * l];
            for (std::size_t c = 0; c < l; ++c) yv[c] += w * xu[c];
            if (g.undirected) {
                const double* xv = &x.data[e.target * l];
                double* yu = &y.data[(base + e.source) * l];
                for (std::size_t c = 0; c < l; ++c) yu[c] += w * xv[c];
            }
        }
    }
}

// G = m' m over columns (l x l Gram matrix).
Block gram(const Block& m) {
    Block g(m.cols, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = &m.data[i * m.cols];
        for (std::size_t p = 0; p < m.cols; ++p) {
            const double rp = row[p];
            if (rp == 0.0) continue;
            for (std::size_t q = p; q < m.cols; ++q) g.at(p, q) += rp * row[q];
        }
    }
    for (std::size_t p = 0; p < m.cols; ++p)
        for (std::size_t q = 0; q < p; ++q) g.at(p, q) = g.at(q, p);
    return g;
}

}  // namespace

UnfoldedEmbedding unfolded_spectral_embed(const TemporalGraph& graph,
                                          const SpectralOptions& options) {
    graph.validate();
    const std::size_t n = graph.n;
    const std::size_t t_count = graph.time_steps();
    const std::size_t m = n * t_count;
    if (options.d < 1 || static_cast<std::size_t>(options.d) > n)
        throw ValidationError("spectral: d must lie in [1, n]");
    if (n > options.max_vertices)
        throw ValidationError(
            "spectral: graph exceeds the desk-scale vertex cap (" +
            std::to_string(options.max_vertices) +
            "); use the encoder embedding for graphs this large");

    const std::size_t d = static_cast<std::size_t>(options.d);
    const std::size_t l = std::min(n, d + static_cast<std::size_t>(options.oversample));

    Rng rng(options.seed);
    Block q(n, l);
    for (double& value : q.data) value = rng.normal();
    orthonormalize(q);

    Block y(m, l);
    std::vector<double> sigma(d, 0.0), prev_sigma(d, 0.0);
    Block small_vectors;
    std::vector<double> eigenvalues;
    bool converged = false;
    double residual = 0.0;
    int used_iterations = 0;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        used_iterations = iter + 1;
        apply_unfolding_transpose(graph, q, y);
        sym_eigen_desc(gram(y), eigenvalues, small_vectors);
        for (std::size_t j = 0; j < d; ++j)
            sigma[j] = eigenvalues[j] > 0.0 ? std::sqrt(eigenvalues[j]) : 0.0;

        if (sigma[0] <= 1e-300) {
            converged = true;  // zero operator: nothing to iterate on
            break;
        }
        residual = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            residual = std::max(residual, std::abs(sigma[j] - prev_sigma[j]));
        residual /= sigma[0];
        if (iter > 0 && residual < options.tolerance) {
            converged = true;
            break;
        }
        prev_sigma = sigma;

        orthonormalize(y);
        apply_unfolding(graph, y, q);
        orthonormalize(q);
    }
    if (!converged)
        throw ConvergenceError("spectral: no convergence after " +
                               std::to_string(used_iterations) +
                               " iterations (relative residual " +
                               std::to_string(residual) + ", tolerance " +
                               std::to_string(options.tolerance) + ")");

    // Rayleigh-Ritz extraction from the converged subspace: left factor
    // U = Q S, right-times-sigma factor V Sigma = Y S. At the break point y
    // still holds M' Q and the small factorization belongs to it.
    UnfoldedEmbedding result;
    result.n = n;
    result.d = options.d;
    result.singular_values.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j)
        result.singular_values[j] =
            eigenvalues[j] > 0.0 ? std::sqrt(eigenvalues[j]) : 0.0;

    result.anchor.assign(n * d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double sum = 0.0;
            for (std::size_t c = 0; c < l; ++c) sum += q.at(i, c) * small_vectors.at(c, j);
            result.anchor[i * d + j] = sum;
        }

    result.per_time.assign(t_count, std::vector<double>(n * d, 0.0));
    for (std::size_t t = 0; t < t_count; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = t * n + i;
            for (std::size_t j = 0; j < d; ++j) {
                double sum = 0.0;
                for (std::size_t c = 0; c < l; ++c) sum += y.at(row, c) * small_vectors.at(c, j);
                result.per_time[t][i * d + j] = sum;
            }
        }
    }
    return result;
}

std::vector<double> spectral_outlier_measure(const UnfoldedEmbedding& embedding,
                                             std::size_t ref_t, std::size_t t) {
    if (ref_t >= embedding.per_time.size() || t >= embedding.per_time.size())
        throw ValidationError("spectral: time index out of range");
    const std::size_t d = static_cast<std::size_t>(embedding.d);
    std::vector<double> distance(embedding.n, 0.0);
    const auto& a = embedding.per_time[t];
    const auto& b = embedding.per_time[ref_t];
    for (std::size_t i = 0; i < embedding.n; ++i) {
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = a[i * d + j] - b[i * d + j];
            sq += diff * diff;
        }
        distance[i] = std::sqrt(sq);
    }
    return distance;
}

}  // namespace graphdyn
