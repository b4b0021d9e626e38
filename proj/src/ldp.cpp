#include "farmlink/ldp.hpp"

#include <algorithm>
#include <cmath>

#include "farmlink/error.hpp"

namespace farmlink {

ComponentSensitivity::ComponentSensitivity(std::vector<double> values) : s(std::move(values)) {
    for (double v : s) {
        require(std::isfinite(v) && v >= 0.0, ErrorCode::invalid_argument,
                "sensitivity entries must be finite and non-negative");
    }
}

PrivacyBudget::PrivacyBudget(double total, std::vector<double> per_component)
    : epsilon_total(total), epsilon_per_component(std::move(per_component)) {
    require(std::isfinite(epsilon_total) && epsilon_total > 0.0, ErrorCode::invalid_argument,
            "epsilon_total must be positive");
    for (double e : epsilon_per_component) {
        require(std::isfinite(e) && e >= 0.0, ErrorCode::invalid_argument,
                "per-component epsilon must be finite and non-negative");
    }
}

ComponentSensitivity compute_sensitivity(const ProjectedMatrix& reference) {
    const Matrix& scores = reference.scores;
    require(scores.rows() > 0, ErrorCode::invalid_argument,
            "empty reference projection");
    std::vector<double> s(scores.cols());
    for (std::size_t j = 0; j < scores.cols(); ++j) {
        double lo = scores(0, j);
        double hi = scores(0, j);
        for (std::size_t i = 1; i < scores.rows(); ++i) {
            lo = std::min(lo, scores(i, j));
            hi = std::max(hi, scores(i, j));
        }
        s[j] = hi - lo;
    }
    return ComponentSensitivity(std::move(s));
}

PrivacyBudget allocate_budget(double epsilon_total, const ComponentSensitivity& s) {
    require(std::isfinite(epsilon_total) && epsilon_total > 0.0, ErrorCode::invalid_argument,
            "epsilon_total must be positive");
    double total_s = 0.0;
    for (double v : s.s) total_s += v;
    require(total_s > 0.0, ErrorCode::invalid_argument,
            "all component sensitivities are zero");
    std::vector<double> eps(s.s.size());
    for (std::size_t j = 0; j < s.s.size(); ++j) {
        eps[j] = epsilon_total * s.s[j] / total_s;
    }
    return PrivacyBudget(epsilon_total, std::move(eps));
}

double laplace_inverse_cdf(double scale, double u) {
    require(std::isfinite(scale) && scale > 0.0, ErrorCode::invalid_argument,
            "Laplace scale must be positive");
    require(u > 0.0 && u < 1.0, ErrorCode::invalid_argument,
            "Laplace quantile argument must lie in (0, 1)");
    double centered = u - 0.5;
    if (centered == 0.0) return 0.0;
    double sign = centered > 0.0 ? 1.0 : -1.0;
    // log1p keeps precision when |centered| is tiny.
    return -scale * sign * std::log1p(-2.0 * std::abs(centered));
}

double sample_laplace(double scale, Rng& rng) {
    return laplace_inverse_cdf(scale, rng.next_open_unit());
}

NoisyProjection perturb(const ProjectedMatrix& projected, const ComponentSensitivity& s,
                        const PrivacyBudget& budget, Rng& rng) {
    const Matrix& scores = projected.scores;
    require(s.s.size() == scores.cols(), ErrorCode::dimension_mismatch,
            "sensitivity dimension does not match projection width");
    require(budget.epsilon_per_component.size() == scores.cols(), ErrorCode::dimension_mismatch,
            "budget dimension does not match projection width");
    for (std::size_t j = 0; j < scores.cols(); ++j) {
        // A positive-sensitivity component must carry budget, otherwise the
        // release there would be unbounded.
        require(s.s[j] == 0.0 || budget.epsilon_per_component[j] > 0.0,
                ErrorCode::invalid_argument,
                "positive-sensitivity component has zero epsilon");
    }

    Matrix noisy(scores.rows(), scores.cols());
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        for (std::size_t j = 0; j < scores.cols(); ++j) {
            if (s.s[j] == 0.0) {
                noisy(i, j) = scores(i, j);
            } else {
                double scale = s.s[j] / budget.epsilon_per_component[j];
                noisy(i, j) = scores(i, j) + sample_laplace(scale, rng);
            }
        }
    }
    return NoisyProjection{projected.pseudonyms, std::move(noisy)};
}

} // namespace farmlink
