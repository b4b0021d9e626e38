#pragma once

// Helpers shared by the test binaries: filesystem scratch space, statistics
// over per-seed results, and independent oracles the suites compare against.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <farmlink/error.hpp>
#include <farmlink/matrix.hpp>

namespace testsupport {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() : TempDir("farmlink-test") {}

    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / (tag + "-" + std::to_string(rd()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create scratch directory under " + base.string());
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out.good()) throw std::runtime_error("cannot write " + path.string());
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Ranks 1..n with ties sharing their average rank.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double shared = 0.5 * (double(i) + double(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

/// Spearman rank correlation with average ranks, so exact ties in either
/// sequence are handled instead of inflating or deflating the score.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Closed-form eigenvalues of a symmetric 3x3 matrix via its characteristic
/// polynomial (trigonometric solution of the cubic), descending. Shares no
/// code with the iterative eigensolver under test.
inline std::array<double, 3> characteristic_eigenvalues_3x3(const farmlink::Matrix& a) {
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    std::array<double, 3> eig{};
    if (p1 == 0.0) {
        eig = {a(0, 0), a(1, 1), a(2, 2)};
        std::sort(eig.begin(), eig.end(), std::greater<>());
        return eig;
    }
    const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
    const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                      (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    farmlink::Matrix b(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) b(i, j) = (a(i, j) - (i == j ? q : 0.0)) / p;
    const double detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                        b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                        b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double two_pi_3 = 2.0943951023931953;
    eig[0] = q + 2.0 * p * std::cos(phi);
    eig[2] = q + 2.0 * p * std::cos(phi + two_pi_3);
    eig[1] = 3.0 * q - eig[0] - eig[2];
    return eig;
}

/// Unit eigenvector of a symmetric 3x3 for a given eigenvalue, from the cross
/// product of two rows of (a - lambda I); the most independent pair wins.
inline std::array<double, 3> characteristic_eigenvector_3x3(const farmlink::Matrix& a,
                                                            double lambda) {
    std::array<std::array<double, 3>, 3> rows{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) rows[i][j] = a(i, j) - (i == j ? lambda : 0.0);
    auto cross = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
        return std::array<double, 3>{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                     u[0] * v[1] - u[1] * v[0]};
    };
    std::array<double, 3> best{};
    double best_norm = -1.0;
    for (std::size_t i = 0; i < 3; ++i) {
        auto c = cross(rows[i], rows[(i + 1) % 3]);
        const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        if (norm > best_norm) {
            best_norm = norm;
            best = c;
        }
    }
    for (double& v : best) v /= best_norm;
    return best;
}

/// Optimal 2-cluster objective by scanning every bipartition. Exponential in
/// rows; callers keep n small.
inline double exhaustive_two_cluster_wcss(const farmlink::Matrix& data) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t(1) << n); ++mask) {
        std::array<std::vector<double>, 2> centroid{std::vector<double>(d, 0.0),
                                                    std::vector<double>(d, 0.0)};
        std::array<std::size_t, 2> count{0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t side = (mask >> i) & 1;
            ++count[side];
            for (std::size_t j = 0; j < d; ++j) centroid[side][j] += data(i, j);
        }
        for (int side = 0; side < 2; ++side)
            for (std::size_t j = 0; j < d; ++j) centroid[side][j] /= double(count[side]);
        double wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t side = (mask >> i) & 1;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = data(i, j) - centroid[side][j];
                wcss += diff * diff;
            }
        }
        best = std::min(best, wcss);
    }
    return best;
}

/// Central finite-difference gradient of a scalar function of (w, b).
struct NumericGradient {
    std::vector<double> grad_w;
    double grad_b = 0.0;
};

inline NumericGradient finite_difference(
    const std::function<double(const std::vector<double>&, double)>& f,
    const std::vector<double>& w, double b, double h) {
    NumericGradient g;
    g.grad_w.resize(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        std::vector<double> hi = w, lo = w;
        hi[j] += h;
        lo[j] -= h;
        g.grad_w[j] = (f(hi, b) - f(lo, b)) / (2.0 * h);
    }
    g.grad_b = (f(w, b + h) - f(w, b - h)) / (2.0 * h);
    return g;
}

} // namespace testsupport
