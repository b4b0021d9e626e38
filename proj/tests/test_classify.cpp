#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <farmlink/classify.hpp>
#include <farmlink/rng.hpp>

#include "support.hpp"

using namespace farmlink;

namespace {

LabeledDataset gaussian_pair(double mean0, double mean1, std::size_t per_class,
                             std::uint64_t seed) {
    Rng rng(seed);
    Matrix features(2 * per_class, 1);
    std::vector<int> labels(2 * per_class);
    for (std::size_t i = 0; i < per_class; ++i) {
        features(i, 0) = mean0 + rng.next_gaussian();
        labels[i] = 0;
        features(per_class + i, 0) = mean1 + rng.next_gaussian();
        labels[per_class + i] = 1;
    }
    return LabeledDataset(std::move(features), std::move(labels));
}

} // namespace

TEST_CASE("objective gradients agree with finite differences") {
    Rng rng(31);
    Matrix x(8, 3);
    std::vector<int> y(8);
    for (std::size_t i = 0; i < 8; ++i) {
        y[i] = static_cast<int>(i % 2);
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = 2.0 * rng.next_gaussian();
    }
    const std::vector<double> w = {0.3, -0.7, 0.2};
    const double b = 0.1;
    const double l2 = 0.05;

    SUBCASE("logistic") {
        Objective obj = logistic_objective(x, y, w, b, l2);
        auto loss = [&](const std::vector<double>& wv, double bv) {
            return logistic_objective(x, y, wv, bv, l2).loss;
        };
        testsupport::NumericGradient numeric = testsupport::finite_difference(loss, w, b, 1e-6);
        for (std::size_t j = 0; j < w.size(); ++j)
            CHECK(obj.grad_w[j] == doctest::Approx(numeric.grad_w[j]).epsilon(1e-5));
        CHECK(obj.grad_b == doctest::Approx(numeric.grad_b).epsilon(1e-5));
    }

    SUBCASE("hinge") {
        // Generic position: no point lands exactly on the margin, so the
        // subgradient is an honest gradient and central differences apply.
        Objective obj = hinge_objective(x, y, w, b, l2);
        auto loss = [&](const std::vector<double>& wv, double bv) {
            return hinge_objective(x, y, wv, bv, l2).loss;
        };
        testsupport::NumericGradient numeric = testsupport::finite_difference(loss, w, b, 1e-7);
        for (std::size_t j = 0; j < w.size(); ++j)
            CHECK(obj.grad_w[j] == doctest::Approx(numeric.grad_w[j]).epsilon(1e-4));
        CHECK(obj.grad_b == doctest::Approx(numeric.grad_b).epsilon(1e-4));
    }
}

TEST_CASE("points exactly on the hinge margin contribute only the l2 term") {
    Matrix x = Matrix::from_rows({{1.0}, {-1.0}});
    std::vector<int> y = {1, 0};
    // w = 1, b = 0 puts both points at functional margin exactly 1.
    Objective obj = hinge_objective(x, y, {1.0}, 0.0, 0.25);
    CHECK(obj.loss == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(obj.grad_w[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(obj.grad_b == 0.0);
}

TEST_CASE("linear models separate a wide margin perfectly") {
    LabeledDataset data = gaussian_pair(-6.0, 6.0, 40, 41);
    for (ClassifierKind kind : {ClassifierKind::logistic, ClassifierKind::svm}) {
        CAPTURE(classifier_kind_name(kind));
        ClassifierModel model = train(kind, data);
        CHECK(accuracy(model, data) == 1.0);
    }
}

TEST_CASE("a zero score ties toward class 1") {
    ClassifierModel model;
    model.kind = ClassifierKind::logistic;
    model.params = LinearParams{{0.0}, 0.0};
    std::vector<int> predictions = predict(model, Matrix::from_rows({{3.5}}));
    CHECK(predictions == std::vector<int>{1});
}

TEST_CASE("naive bayes breaks likelihood ties by prior") {
    // Every row carries the same value, so both classes learn identical
    // statistics and the posterior follows the priors alone: nine class-0
    // rows against one class-1 row.
    Matrix features(10, 1, 2.0);
    std::vector<int> labels(10, 0);
    labels[9] = 1;

    ClassifierModel model = train(ClassifierKind::naive_bayes, LabeledDataset(features, labels));
    const auto& params = std::get<NaiveBayesParams>(model.params);
    CHECK(params.priors[0] == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(params.priors[1] == doctest::Approx(0.1).epsilon(1e-14));

    const std::vector<double> probe = {2.0};
    std::array<double, 2> posterior = nb_posterior(params, probe);
    CHECK(posterior[0] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(posterior[1] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(posterior[0] + posterior[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(predict(model, Matrix::from_rows({{2.0}}))[0] == 0);
}

TEST_CASE("naive bayes posteriors always sum to one") {
    LabeledDataset data = gaussian_pair(-1.0, 1.5, 30, 44);
    ClassifierModel model = train(ClassifierKind::naive_bayes, data);
    const auto& params = std::get<NaiveBayesParams>(model.params);
    Rng rng(45);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> probe = {10.0 * rng.next_gaussian()};
        std::array<double, 2> posterior = nb_posterior(params, probe);
        CHECK(posterior[0] + posterior[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(posterior[0] >= 0.0);
        CHECK(posterior[1] >= 0.0);
    }
}

TEST_CASE("equal-prior gaussian classes meet at the midpoint") {
    // Classes at 0 and 4 with unit spread put the decision boundary near 2.
    LabeledDataset data = gaussian_pair(0.0, 4.0, 5000, 46);
    ClassifierModel model = train(ClassifierKind::naive_bayes, data);

    double low = 0.0, high = 4.0;
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (low + high);
        if (predict(model, Matrix::from_rows({{mid}}))[0] == 0)
            low = mid;
        else
            high = mid;
    }
    CHECK(0.5 * (low + high) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("constant features fall back to the variance floor") {
    Matrix features = Matrix::from_rows({{1.0, 0.0}, {1.0, 1.0}, {1.0, 4.0}, {1.0, 5.0}});
    std::vector<int> labels = {0, 0, 1, 1};
    Hyperparams hp;
    hp.variance_floor = 1e-9;
    ClassifierModel model = train(ClassifierKind::naive_bayes, LabeledDataset(features, labels), hp);
    const auto& params = std::get<NaiveBayesParams>(model.params);
    CHECK(params.variances[0][0] == 1e-9);
    CHECK(params.variances[1][0] == 1e-9);
    // The informative second feature still drives prediction.
    CHECK(predict(model, Matrix::from_rows({{1.0, 0.5}}))[0] == 0);
    CHECK(predict(model, Matrix::from_rows({{1.0, 4.5}}))[0] == 1);
}

TEST_CASE("datasets must contain both classes") {
    Matrix features = Matrix::from_rows({{0.0}, {1.0}});
    CHECK_THROWS_AS(LabeledDataset(features, {0, 0}), Error);
    CHECK_THROWS_AS(LabeledDataset(features, {1, 1}), Error);
    CHECK_THROWS_AS(LabeledDataset(features, {0, 2}), Error);
    CHECK_THROWS_AS(LabeledDataset(features, {0}), Error);
}
