#include "farmlink/classify.hpp"

#include <cmath>
#include <numbers>

#include "farmlink/error.hpp"

namespace farmlink {

namespace {

double dot_row(const Matrix& x, std::size_t i, const std::vector<double>& w) {
    double z = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) z += x(i, j) * w[j];
    return z;
}

double gradient_norm(const Objective& obj) {
    double sq = obj.grad_b * obj.grad_b;
    for (double g : obj.grad_w) sq += g * g;
    return std::sqrt(sq);
}

LinearParams train_linear(const LabeledDataset& data, const Hyperparams& hp, bool hinge) {
    LinearParams p;
    p.weights.assign(data.features.cols(), 0.0);
    for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
        Objective obj = hinge
            ? hinge_objective(data.features, data.labels, p.weights, p.bias, hp.l2)
            : logistic_objective(data.features, data.labels, p.weights, p.bias, hp.l2);
        if (gradient_norm(obj) < hp.grad_tol) break;
        double lr = hp.learning_rate / std::sqrt(double(epoch));
        for (std::size_t j = 0; j < p.weights.size(); ++j) p.weights[j] -= lr * obj.grad_w[j];
        p.bias -= lr * obj.grad_b;
    }
    return p;
}

NaiveBayesParams train_bayes(const LabeledDataset& data, const Hyperparams& hp) {
    NaiveBayesParams p;
    const std::size_t d = data.features.cols();
    std::array<std::size_t, 2> counts{0, 0};
    for (int label : data.labels) counts[std::size_t(label)] += 1;

    for (int c : {0, 1}) {
        p.means[c].assign(d, 0.0);
        p.variances[c].assign(d, 0.0);
        p.priors[c] = double(counts[c]) / double(data.labels.size());
    }
    for (std::size_t i = 0; i < data.features.rows(); ++i) {
        const int c = data.labels[i];
        for (std::size_t j = 0; j < d; ++j) p.means[c][j] += data.features(i, j);
    }
    for (int c : {0, 1}) {
        for (std::size_t j = 0; j < d; ++j) p.means[c][j] /= double(counts[c]);
    }
    for (std::size_t i = 0; i < data.features.rows(); ++i) {
        const int c = data.labels[i];
        for (std::size_t j = 0; j < d; ++j) {
            double dev = data.features(i, j) - p.means[c][j];
            p.variances[c][j] += dev * dev;
        }
    }
    for (int c : {0, 1}) {
        for (std::size_t j = 0; j < d; ++j) {
            p.variances[c][j] = std::max(p.variances[c][j] / double(counts[c]),
                                         hp.variance_floor);
        }
    }
    return p;
}

} // namespace

const char* classifier_kind_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::logistic: return "logistic";
        case ClassifierKind::naive_bayes: return "naive-bayes";
        case ClassifierKind::svm: return "svm";
    }
    throw Error(ErrorCode::invalid_argument, "unknown classifier kind");
}

LabeledDataset::LabeledDataset(Matrix f, std::vector<int> l)
    : features(std::move(f)), labels(std::move(l)) {
    require(features.rows() == labels.size(), ErrorCode::dimension_mismatch,
            "label count does not match feature rows");
    require(features.rows() > 0, ErrorCode::invalid_argument, "empty dataset");
    bool has0 = false;
    bool has1 = false;
    for (int y : labels) {
        require(y == 0 || y == 1, ErrorCode::invalid_argument, "labels must be 0 or 1");
        (y == 0 ? has0 : has1) = true;
    }
    require(has0 && has1, ErrorCode::invalid_argument,
            "dataset must contain both classes");
}

Objective logistic_objective(const Matrix& x, const std::vector<int>& y,
                             const std::vector<double>& w, double b, double l2) {
    require(w.size() == x.cols(), ErrorCode::dimension_mismatch,
            "weight dimension does not match features");
    require(y.size() == x.rows(), ErrorCode::dimension_mismatch,
            "label count does not match feature rows");
    const double n = double(x.rows());
    Objective obj;
    obj.grad_w.assign(w.size(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double z = dot_row(x, i, w) + b;
        // max(z,0) - z*y + log(1+exp(-|z|)) is the overflow-safe cross entropy.
        obj.loss += std::max(z, 0.0) - z * double(y[i]) + std::log1p(std::exp(-std::abs(z)));
        double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                            : std::exp(z) / (1.0 + std::exp(z));
        double residual = p - double(y[i]);
        for (std::size_t j = 0; j < w.size(); ++j) obj.grad_w[j] += residual * x(i, j);
        obj.grad_b += residual;
    }
    obj.loss /= n;
    obj.grad_b /= n;
    for (std::size_t j = 0; j < w.size(); ++j) {
        obj.grad_w[j] = obj.grad_w[j] / n + l2 * w[j];
        obj.loss += 0.5 * l2 * w[j] * w[j];
    }
    return obj;
}

Objective hinge_objective(const Matrix& x, const std::vector<int>& y,
                          const std::vector<double>& w, double b, double l2) {
    require(w.size() == x.cols(), ErrorCode::dimension_mismatch,
            "weight dimension does not match features");
    require(y.size() == x.rows(), ErrorCode::dimension_mismatch,
            "label count does not match feature rows");
    const double n = double(x.rows());
    Objective obj;
    obj.grad_w.assign(w.size(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double t = 2.0 * double(y[i]) - 1.0;
        double margin = t * (dot_row(x, i, w) + b);
        if (margin < 1.0) {
            obj.loss += 1.0 - margin;
            for (std::size_t j = 0; j < w.size(); ++j) obj.grad_w[j] -= t * x(i, j);
            obj.grad_b -= t;
        }
    }
    obj.loss /= n;
    obj.grad_b /= n;
    for (std::size_t j = 0; j < w.size(); ++j) {
        obj.grad_w[j] = obj.grad_w[j] / n + l2 * w[j];
        obj.loss += 0.5 * l2 * w[j] * w[j];
    }
    return obj;
}

ClassifierModel train(ClassifierKind kind, const LabeledDataset& data, const Hyperparams& hp) {
    require(hp.l2 >= 0.0 && hp.learning_rate > 0.0 && hp.epochs >= 1,
            ErrorCode::invalid_argument, "invalid hyperparameters");
    ClassifierModel model;
    model.kind = kind;
    switch (kind) {
        case ClassifierKind::logistic:
            model.params = train_linear(data, hp, false);
            break;
        case ClassifierKind::svm:
            model.params = train_linear(data, hp, true);
            break;
        case ClassifierKind::naive_bayes:
            model.params = train_bayes(data, hp);
            break;
    }
    return model;
}

std::array<double, 2> nb_posterior(const NaiveBayesParams& params, std::span<const double> x) {
    require(params.means[0].size() == x.size(), ErrorCode::dimension_mismatch,
            "feature dimension does not match model");
    std::array<double, 2> log_post{};
    for (int c : {0, 1}) {
        double lp = std::log(params.priors[c]);
        for (std::size_t j = 0; j < x.size(); ++j) {
            double var = params.variances[c][j];
            double dev = x[j] - params.means[c][j];
            lp += -0.5 * std::log(2.0 * std::numbers::pi * var) - dev * dev / (2.0 * var);
        }
        log_post[c] = lp;
    }
    double hi = std::max(log_post[0], log_post[1]);
    double e0 = std::exp(log_post[0] - hi);
    double e1 = std::exp(log_post[1] - hi);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

std::vector<int> predict(const ClassifierModel& model, const Matrix& features) {
    std::vector<int> out(features.rows());
    if (model.kind == ClassifierKind::naive_bayes) {
        const auto& p = std::get<NaiveBayesParams>(model.params);
        for (std::size_t i = 0; i < features.rows(); ++i) {
            auto post = nb_posterior(p, features.row(i));
            out[i] = post[1] >= post[0] ? 1 : 0;
        }
        return out;
    }
    const auto& p = std::get<LinearParams>(model.params);
    require(p.weights.size() == features.cols(), ErrorCode::dimension_mismatch,
            "feature dimension does not match model");
    for (std::size_t i = 0; i < features.rows(); ++i) {
        double z = dot_row(features, i, p.weights) + p.bias;
        out[i] = z >= 0.0 ? 1 : 0;
    }
    return out;
}

double accuracy(const ClassifierModel& model, const LabeledDataset& data) {
    std::vector<int> predicted = predict(model, data.features);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == data.labels[i]) hits += 1;
    }
    return double(hits) / double(predicted.size());
}

} // namespace farmlink
