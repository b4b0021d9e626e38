#include "farmlink/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "farmlink/error.hpp"
#include "farmlink/rng.hpp"

namespace farmlink {

namespace {

std::vector<std::size_t> assign_labels(const Matrix& data, const Matrix& centroids) {
    std::vector<std::size_t> labels(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t c = 0; c < centroids.rows(); ++c) {
            double d = squared_distance(data.row(i), centroids.row(c));
            if (d < best) {
                best = d;
                arg = c;
            }
        }
        labels[i] = arg;
    }
    return labels;
}

Matrix seed_plus_plus(const Matrix& data, std::size_t k, Rng& rng) {
    Matrix centroids(k, data.cols());
    std::size_t first = rng.next_below(data.rows());
    for (std::size_t j = 0; j < data.cols(); ++j) centroids(0, j) = data(first, j);

    std::vector<double> dist2(data.rows());
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < data.rows(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t p = 0; p < c; ++p) {
                best = std::min(best, squared_distance(data.row(i), centroids.row(p)));
            }
            dist2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total > 0.0) {
            double target = rng.next_unit() * total;
            double acc = 0.0;
            pick = data.rows() - 1;
            for (std::size_t i = 0; i < data.rows(); ++i) {
                acc += dist2[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            // All mass sits on existing centroids; any point works.
            pick = rng.next_below(data.rows());
        }
        for (std::size_t j = 0; j < data.cols(); ++j) centroids(c, j) = data(pick, j);
    }
    return centroids;
}

} // namespace

double wcss(const Matrix& centroids, const Matrix& data, const std::vector<std::size_t>& labels) {
    require(labels.size() == data.rows(), ErrorCode::dimension_mismatch,
            "label count does not match data rows");
    require(centroids.cols() == data.cols(), ErrorCode::dimension_mismatch,
            "centroid width does not match data width");
    double total = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        require(labels[i] < centroids.rows(), ErrorCode::invalid_argument,
                "label out of range");
        total += squared_distance(data.row(i), centroids.row(labels[i]));
    }
    return total;
}

namespace detail {

LloydRun lloyd(const Matrix& data, std::size_t k, std::uint64_t seed, std::size_t max_iter,
               double tol) {
    Rng rng(seed);
    Matrix centroids = seed_plus_plus(data, k, rng);
    std::vector<std::size_t> labels = assign_labels(data, centroids);

    LloydRun run;
    run.wcss_trace.push_back(wcss(centroids, data, labels));

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        Matrix next(k, data.cols());
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < data.rows(); ++i) {
            counts[labels[i]] += 1;
            for (std::size_t j = 0; j < data.cols(); ++j) {
                next(labels[i], j) += data(i, j);
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Repair an emptied cluster with the point farthest from its
                // current centroid, so every centroid stays a data location.
                double worst = -1.0;
                std::size_t far = 0;
                for (std::size_t i = 0; i < data.rows(); ++i) {
                    double d = squared_distance(data.row(i), centroids.row(labels[i]));
                    if (d > worst) {
                        worst = d;
                        far = i;
                    }
                }
                for (std::size_t j = 0; j < data.cols(); ++j) next(c, j) = data(far, j);
            } else {
                for (std::size_t j = 0; j < data.cols(); ++j) next(c, j) /= double(counts[c]);
            }
        }

        std::vector<std::size_t> next_labels = assign_labels(data, next);
        double next_wcss = wcss(next, data, next_labels);
        double prev_wcss = run.wcss_trace.back();
        if (next_wcss > prev_wcss) {
            // Descent guard: an update may not worsen the objective (can only
            // trigger through empty-cluster repair); keep the previous state.
            break;
        }
        centroids = std::move(next);
        labels = std::move(next_labels);
        run.wcss_trace.push_back(next_wcss);
        if (prev_wcss - next_wcss < tol) break;
    }

    run.centroids = std::move(centroids);
    run.labels = std::move(labels);
    return run;
}

} // namespace detail

KMeansModel kmeans(const Matrix& data, std::size_t k, std::uint64_t seed, std::size_t restarts,
                   std::size_t max_iter, double tol) {
    require(data.rows() > 0, ErrorCode::invalid_argument, "empty data");
    require(k >= 1, ErrorCode::invalid_argument, "k must be at least 1");
    require(k <= data.rows(), ErrorCode::invalid_argument,
            "k exceeds the number of data points");
    require(restarts >= 1, ErrorCode::invalid_argument, "restarts must be at least 1");

    Rng base(seed);
    KMeansModel best;
    best.wcss = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        detail::LloydRun run = detail::lloyd(data, k, base.derive(r).seed(), max_iter, tol);
        double value = run.wcss_trace.back();
        if (value < best.wcss) {
            best.centroids = std::move(run.centroids);
            best.labels = std::move(run.labels);
            best.wcss = value;
            best.iterations = run.wcss_trace.size() - 1;
        }
    }
    return best;
}

ElbowCurve select_k_elbow(const Matrix& data, std::size_t k_min, std::size_t k_max,
                          std::uint64_t seed, std::size_t restarts) {
    require(k_min >= 2, ErrorCode::invalid_argument, "k_min must be at least 2");
    require(k_max >= k_min, ErrorCode::invalid_argument, "k_max must be at least k_min");
    require(data.rows() >= 2, ErrorCode::invalid_argument, "need at least two data points");
    require(k_max <= data.rows() - 1, ErrorCode::invalid_argument,
            "k_max must leave at least one point per extra cluster");

    ElbowCurve curve;
    Rng base(seed);
    for (std::size_t k = k_min; k <= k_max; ++k) {
        KMeansModel model = kmeans(data, k, base.derive(k).seed(), restarts);
        curve.ks.push_back(k);
        curve.wcss_values.push_back(model.wcss);
    }

    if (curve.ks.size() < 3) {
        // No interior point to measure curvature at; fall back to the
        // smallest k and mark the choice as unsupported by the curve.
        curve.chosen_k = k_min;
        curve.weak_elbow = true;
        return curve;
    }

    double best_curvature = -std::numeric_limits<double>::infinity();
    std::size_t best_index = 1;
    for (std::size_t i = 1; i + 1 < curve.ks.size(); ++i) {
        double curvature = curve.wcss_values[i - 1] - 2.0 * curve.wcss_values[i] +
                           curve.wcss_values[i + 1];
        if (curvature > best_curvature) {
            best_curvature = curvature;
            best_index = i;
        }
    }
    curve.chosen_k = curve.ks[best_index];
    curve.weak_elbow = best_curvature < 0.05 * curve.wcss_values.front();
    return curve;
}

} // namespace farmlink
