#pragma once

#include <string>
#include <vector>

#include "farmlink/pca.hpp"
#include "farmlink/rng.hpp"

namespace farmlink {

/// Per-component sensitivity in score units: the empirical worst-case change
/// a single record can make to a per-component release, measured over the
/// public reference projection.
struct ComponentSensitivity {
    std::vector<double> s;

    explicit ComponentSensitivity(std::vector<double> values);
    ComponentSensitivity() = default;
};

/// Total privacy budget plus its per-component allocation. Components with
/// positive sensitivity carry positive epsilon and the positive allocations
/// sum back to the total.
struct PrivacyBudget {
    double epsilon_total = 0.0;
    std::vector<double> epsilon_per_component;

    PrivacyBudget(double total, std::vector<double> per_component);
    PrivacyBudget() = default;
};

/// s_i = max - min of component i over the reference rows.
ComponentSensitivity compute_sensitivity(const ProjectedMatrix& reference);

/// Proportional rule: epsilon_i = epsilon_total * s_i / sum(s). This is the
/// unique split that gives every perturbed component the same Laplace scale
/// s_i / epsilon_i. Zero-sensitivity components get zero budget and are
/// released unperturbed.
PrivacyBudget allocate_budget(double epsilon_total, const ComponentSensitivity& s);

/// Laplace(0, scale) quantile at u in (0, 1); u = 0.5 maps to 0.
double laplace_inverse_cdf(double scale, double u);

/// One Laplace(0, scale) draw via the inverse CDF of a single uniform.
double sample_laplace(double scale, Rng& rng);

/// A market's projected rows after per-component Laplace perturbation; the
/// only row-level object that ever leaves a market.
struct NoisyProjection {
    std::vector<std::string> pseudonyms;
    Matrix scores; // n x r
};

/// Adds Laplace(0, s_i/epsilon_i) to every cell of each positive-sensitivity
/// component, row by row; zero-sensitivity components pass through bit-exact.
NoisyProjection perturb(const ProjectedMatrix& projected, const ComponentSensitivity& s,
                        const PrivacyBudget& budget, Rng& rng);

} // namespace farmlink
