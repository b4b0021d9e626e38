#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include "farmlink/matrix.hpp"

namespace farmlink {

enum class ClassifierKind { logistic, naive_bayes, svm };

const char* classifier_kind_name(ClassifierKind kind);

/// Binary dataset; both classes must be present so priors and per-class
/// statistics are defined.
struct LabeledDataset {
    Matrix features;
    std::vector<int> labels; // 0 or 1, one per row

    LabeledDataset(Matrix features, std::vector<int> labels);
};

struct Hyperparams {
    double l2 = 1e-3;
    double learning_rate = 0.1; // decayed as lr / sqrt(epoch)
    std::size_t epochs = 500;
    double grad_tol = 1e-6;       // stop when the full gradient norm drops below
    double variance_floor = 1e-9; // naive Bayes only
};

struct LinearParams {
    std::vector<double> weights;
    double bias = 0.0;
};

struct NaiveBayesParams {
    // Index 0 holds class-0 statistics, index 1 class-1.
    std::array<std::vector<double>, 2> means;
    std::array<std::vector<double>, 2> variances;
    std::array<double, 2> priors{};
};

struct ClassifierModel {
    ClassifierKind kind = ClassifierKind::logistic;
    std::variant<LinearParams, NaiveBayesParams> params;
};

/// Loss and full-batch gradient of a training objective at (w, b).
struct Objective {
    double loss = 0.0;
    std::vector<double> grad_w;
    double grad_b = 0.0;
};

/// Mean cross entropy of sigmoid(w.x + b) against labels, plus (l2/2)|w|^2.
Objective logistic_objective(const Matrix& x, const std::vector<int>& y,
                             const std::vector<double>& w, double b, double l2);

/// Mean hinge loss max(0, 1 - t(w.x + b)) with t = 2y - 1, plus (l2/2)|w|^2.
/// Points sitting exactly on the margin contribute zero subgradient.
Objective hinge_objective(const Matrix& x, const std::vector<int>& y,
                          const std::vector<double>& w, double b, double l2);

ClassifierModel train(ClassifierKind kind, const LabeledDataset& data,
                      const Hyperparams& hp = {});

/// Class posteriors P(class | x) for a naive Bayes model; sums to 1.
std::array<double, 2> nb_posterior(const NaiveBayesParams& params, std::span<const double> x);

/// Predicted label per row; ties at the decision threshold resolve to 1.
std::vector<int> predict(const ClassifierModel& model, const Matrix& features);

/// Fraction of rows where prediction matches the label.
double accuracy(const ClassifierModel& model, const LabeledDataset& data);

} // namespace farmlink
