#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "farmlink/matrix.hpp"

namespace farmlink {

struct KMeansModel {
    Matrix centroids;                // k x d
    std::vector<std::size_t> labels; // one per data row
    double wcss = 0.0;
    std::size_t iterations = 0; // of the winning restart
};

/// Best of `restarts` seeded Lloyd runs; each restart draws its own stream
/// from `seed` so the result does not depend on evaluation order.
KMeansModel kmeans(const Matrix& data, std::size_t k, std::uint64_t seed,
                   std::size_t restarts = 10, std::size_t max_iter = 300, double tol = 1e-6);

/// Sum over points of squared distance to their assigned centroid.
double wcss(const Matrix& centroids, const Matrix& data, const std::vector<std::size_t>& labels);

struct ElbowCurve {
    std::vector<std::size_t> ks;
    std::vector<double> wcss_values;
    std::size_t chosen_k = 0;
    bool weak_elbow = false;
};

/// Runs kmeans for each k in [k_min, k_max] (k_min >= 2) and picks the
/// interior k with the largest discrete second difference of the curve,
/// ties to the smaller k.
/// The elbow is flagged weak when the best curvature is under 5% of the
/// curve's starting level, or when the range has no interior point.
ElbowCurve select_k_elbow(const Matrix& data, std::size_t k_min, std::size_t k_max,
                          std::uint64_t seed, std::size_t restarts = 10);

namespace detail {

struct LloydRun {
    Matrix centroids;
    std::vector<std::size_t> labels;
    std::vector<double> wcss_trace; // value after each update, non-increasing
};

/// Single restart: k-means++ seeding then Lloyd iterations until the
/// improvement falls below tol or max_iter is hit.
LloydRun lloyd(const Matrix& data, std::size_t k, std::uint64_t seed, std::size_t max_iter,
               double tol);

} // namespace detail

} // namespace farmlink
