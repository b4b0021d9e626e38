#include "farmlink/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace farmlink {

namespace detail {

EigenResult symmetric_eigen(Matrix a) {
    const std::size_t d = a.rows();
    require(d == a.cols() && d > 0, ErrorCode::dimension_mismatch,
            "eigendecomposition needs a square matrix");

    Matrix v(d, d);
    for (std::size_t i = 0; i < d; ++i) v(i, i) = 1.0;

    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) norm += a(i, j) * a(i, j);
    norm = std::sqrt(norm);
    const double stop = 1e-14 * std::max(1.0, norm);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= stop) break;

        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= stop / static_cast<double>(d * d)) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenResult res;
    res.values.resize(d);
    for (std::size_t i = 0; i < d; ++i) res.values[i] = a(i, i);
    res.vectors = std::move(v);
    return res;
}

} // namespace detail

namespace {

void sign_fix_column(Matrix& m, std::size_t col) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double mag = std::abs(m(i, col));
        if (mag > best) {
            best = mag;
            arg = i;
        }
    }
    if (m(arg, col) < 0.0)
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, col) = -m(i, col);
}

bool lex_less(const Matrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (m(i, a) < m(i, b)) return true;
        if (m(i, a) > m(i, b)) return false;
    }
    return false;
}

} // namespace

PcaModel fit_pca(const FeatureTable& table, std::size_t r) {
    const std::size_t n = table.rows();
    const std::size_t d = table.feature_count();
    require(n >= 2, ErrorCode::invalid_argument, "covariance needs at least 2 rows");
    require(r >= 1 && r <= std::min(n - 1, d), ErrorCode::invalid_argument,
            "component count " + std::to_string(r) + " out of range [1, " +
                std::to_string(std::min(n - 1, d)) + "]");

    PcaModel model;
    model.means = column_means(table.values());

    Matrix centered = table.values();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) centered(i, j) -= model.means[j];

    Matrix cov(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += centered(i, a) * centered(i, b);
            cov(a, b) = cov(b, a) = s / static_cast<double>(n - 1);
        }

    detail::EigenResult eig = detail::symmetric_eigen(std::move(cov));
    for (std::size_t c = 0; c < d; ++c) sign_fix_column(eig.vectors, c);

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (eig.values[a] != eig.values[b]) return eig.values[a] > eig.values[b];
        return lex_less(eig.vectors, a, b);
    });

    model.components = Matrix(d, r);
    model.variances.resize(r);
    for (std::size_t c = 0; c < r; ++c) {
        const std::size_t src = order[c];
        model.variances[c] = std::max(0.0, eig.values[src]);
        for (std::size_t i = 0; i < d; ++i) model.components(i, c) = eig.vectors(i, src);
    }
    return model;
}

ProjectedMatrix project(const PcaModel& model, const FeatureTable& table) {
    require(table.feature_count() == model.input_dim(), ErrorCode::dimension_mismatch,
            "table has " + std::to_string(table.feature_count()) +
                " features, model expects " + std::to_string(model.input_dim()));
    const std::size_t n = table.rows();
    const std::size_t d = model.input_dim();
    const std::size_t r = model.rank();
    Matrix scores(n, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < r; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                s += (table.values()(i, j) - model.means[j]) * model.components(j, c);
            scores(i, c) = s;
        }
    return {table.pseudonyms(), std::move(scores)};
}

namespace {

void validate_model(const PcaModel& model) {
    const std::size_t d = model.input_dim();
    const std::size_t r = model.rank();
    require(d >= 1 && r >= 1 && r <= d, ErrorCode::parse, "malformed model shape");
    require(model.means.size() == d, ErrorCode::parse, "means length mismatch");
    require(model.variances.size() == r, ErrorCode::parse, "variances length mismatch");
    for (std::size_t c = 0; c < r; ++c) {
        require(model.variances[c] >= 0.0, ErrorCode::parse, "negative explained variance");
        if (c) require(model.variances[c - 1] >= model.variances[c], ErrorCode::parse,
                       "variances not sorted non-increasing");
    }
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a; b < r; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                dot += model.components(i, a) * model.components(i, b);
            const double want = a == b ? 1.0 : 0.0;
            require(std::abs(dot - want) < 1e-8, ErrorCode::parse,
                    "model components are not orthonormal");
        }
}

} // namespace

std::string pca_model_to_json(const PcaModel& model) {
    nlohmann::json j;
    j["means"] = model.means;
    std::vector<std::vector<double>> rows(model.input_dim());
    for (std::size_t i = 0; i < model.input_dim(); ++i) {
        rows[i].resize(model.rank());
        for (std::size_t c = 0; c < model.rank(); ++c) rows[i][c] = model.components(i, c);
    }
    j["components"] = rows;
    j["variances"] = model.variances;
    return j.dump();
}

PcaModel pca_model_from_json(const std::string& payload) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(payload);
        PcaModel model;
        model.means = j.at("means").get<std::vector<double>>();
        const auto rows = j.at("components").get<std::vector<std::vector<double>>>();
        model.components = Matrix::from_rows(rows);
        model.variances = j.at("variances").get<std::vector<double>>();
        validate_model(model);
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse, std::string("malformed model payload: ") + e.what());
    }
}

} // namespace farmlink
