#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "farmlink/classify.hpp"
#include "farmlink/ldp.hpp"
#include "farmlink/pca.hpp"
#include "farmlink/synth.hpp"

namespace farmlink {

/// Distance-attack outcome at a fixed false-positive budget.
struct PowerResult {
    double threshold = 0.0;
    double fpr_target = 0.0;
    double power = 0.0;        // fraction of case distances strictly below threshold
    double realized_fpr = 0.0; // fraction of control distances strictly below; <= fpr_target
    std::vector<double> control_distances; // ascending
    std::vector<double> case_distances;    // ascending
};

/// Distance attack: a probe's score is its minimum Euclidean distance to any
/// shared noisy row. The threshold is the largest value with at most
/// floor(fpr * |control|) control distances strictly below it, so the
/// realized FPR never exceeds the target.
PowerResult membership_power(const NoisyProjection& shared, const ProjectedMatrix& case_group,
                             const ProjectedMatrix& control_group, double fpr);

/// Labels the noise-free projection with kmeans (k must be 2), trains the
/// given classifier on those labels, and scores its predictions on the noisy
/// rows against the same labels. noise_free and noisy must carry identical
/// pseudonyms in identical order.
double utility_accuracy(ClassifierKind kind, const ProjectedMatrix& noise_free,
                        const NoisyProjection& noisy, std::size_t k, std::uint64_t seed);

/// Synthetic population for the sweep: one public reference table plus
/// per-market private tables, all drawn from the same labeled mixture.
struct SweepDataSpec {
    Schema schema;
    std::vector<ClusterSpec> clusters;
    std::size_t public_rows = 0;
    std::size_t markets = 0;
    std::size_t market_rows = 0;
    std::size_t rank = 2;
};

/// The checked-in default: three markets drawing from a two-component
/// vendor-profile mixture, sized so the whole sweep stays fast.
SweepDataSpec standard_sweep_data();

struct SweepConfig {
    std::vector<double> epsilons; // ascending, positive, at least 2
    double fpr = 0.05;
    std::vector<ClassifierKind> kinds = {ClassifierKind::logistic, ClassifierKind::naive_bayes,
                                         ClassifierKind::svm};
    std::size_t seed_count = 20;
    std::uint64_t master_seed = 0;
    double power_max = 0.3;
    double accuracy_min = 0.8;
};

struct OptimalEpsilon {
    bool feasible = false;
    double epsilon = 0.0; // meaningful only when feasible
    /// Non-dominated (power, accuracy) grid points when infeasible: no other
    /// grid epsilon is at least as good on both axes and better on one.
    std::vector<double> frontier_epsilons;
};

struct SweepResult {
    std::vector<double> epsilons;
    std::vector<double> power_values; // mean over seeds, aligned with epsilons
    std::map<ClassifierKind, std::vector<double>> accuracy_by_kind; // mean over seeds
    std::vector<std::vector<double>> power_by_seed; // [seed][epsilon index]
    std::map<ClassifierKind, std::vector<std::vector<double>>> accuracy_by_kind_by_seed;
    std::map<ClassifierKind, OptimalEpsilon> optimal_epsilon_by_kind;
};

/// Per seed: draw the population, fit the share bundle, project; per epsilon:
/// allocate a fresh budget, perturb, and score the attack and the
/// classifiers. Fully deterministic in the master seed.
SweepResult epsilon_sweep(const SweepConfig& config, const SweepDataSpec& data);

/// Per classifier kind, the smallest epsilon whose mean power is at most
/// power_max and mean accuracy at least accuracy_min; otherwise infeasible
/// with the Pareto frontier attached.
std::map<ClassifierKind, OptimalEpsilon> select_optimal_epsilon(const SweepResult& sweep,
                                                                double power_max,
                                                                double accuracy_min);

/// Plot-ready export: epsilon,power,accuracy_logistic,accuracy_nb,accuracy_svm.
void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path);

} // namespace farmlink
