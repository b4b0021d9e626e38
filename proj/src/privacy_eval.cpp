#include "farmlink/privacy_eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "farmlink/error.hpp"
#include "farmlink/kmeans.hpp"
#include "farmlink/num_format.hpp"
#include "farmlink/researcher.hpp"
#include "farmlink/rng.hpp"

namespace farmlink {

namespace {

std::vector<double> min_distances(const Matrix& probes, const Matrix& shared) {
    std::vector<double> out(probes.rows());
    for (std::size_t i = 0; i < probes.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < shared.rows(); ++s) {
            best = std::min(best, squared_distance(probes.row(i), shared.row(s)));
        }
        out[i] = std::sqrt(best);
    }
    return out;
}

double fraction_below(const std::vector<double>& sorted, double threshold) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), threshold);
    return double(it - sorted.begin()) / double(sorted.size());
}

} // namespace

PowerResult membership_power(const NoisyProjection& shared, const ProjectedMatrix& case_group,
                             const ProjectedMatrix& control_group, double fpr) {
    require(shared.scores.rows() > 0, ErrorCode::invalid_argument, "empty shared projection");
    require(case_group.scores.rows() > 0 && control_group.scores.rows() > 0,
            ErrorCode::invalid_argument, "empty case or control group");
    require(case_group.scores.cols() == shared.scores.cols() &&
                control_group.scores.cols() == shared.scores.cols(),
            ErrorCode::dimension_mismatch, "case/control width does not match shared rows");
    require(fpr > 0.0 && fpr < 1.0, ErrorCode::invalid_argument, "fpr must lie in (0, 1)");

    PowerResult result;
    result.fpr_target = fpr;
    result.control_distances = min_distances(control_group.scores, shared.scores);
    result.case_distances = min_distances(case_group.scores, shared.scores);
    std::sort(result.control_distances.begin(), result.control_distances.end());
    std::sort(result.case_distances.begin(), result.case_distances.end());

    // The order statistic at floor(fpr*m) bounds the count of strictly
    // smaller control distances by floor(fpr*m), so realized fpr <= target.
    std::size_t cut = std::size_t(fpr * double(result.control_distances.size()));
    result.threshold = result.control_distances[cut];
    result.realized_fpr = fraction_below(result.control_distances, result.threshold);
    result.power = fraction_below(result.case_distances, result.threshold);
    return result;
}

double utility_accuracy(ClassifierKind kind, const ProjectedMatrix& noise_free,
                        const NoisyProjection& noisy, std::size_t k, std::uint64_t seed) {
    require(k == 2, ErrorCode::invalid_argument,
            "utility evaluation is binary; k must be 2");
    require(noise_free.pseudonyms == noisy.pseudonyms, ErrorCode::invalid_argument,
            "noise-free and noisy pseudonyms must match in order");
    require(noise_free.scores.cols() == noisy.scores.cols(), ErrorCode::dimension_mismatch,
            "noise-free and noisy widths must match");

    KMeansModel clustering = kmeans(noise_free.scores, k, seed);
    std::vector<int> labels(clustering.labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = int(clustering.labels[i]);

    LabeledDataset train_set(noise_free.scores, labels);
    ClassifierModel model = train(kind, train_set);
    std::vector<int> predicted = predict(model, noisy.scores);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (predicted[i] == labels[i]) hits += 1;
    }
    return double(hits) / double(labels.size());
}

SweepDataSpec standard_sweep_data() {
    SweepDataSpec spec{Schema::farmers_market(), {}, 102, 3, 34, 2};
    // Two vendor profiles: a small roadside stand and a large full-service
    // market. Continuous columns are Miles from Market, Sales, #Visitors;
    // the nine columns between them are product indicators. The profiles
    // overlap by design: a release that still carries usable cluster signal
    // without being trivially separable is the regime where the privacy and
    // utility curves both move across the epsilon grid. public_rows equals
    // markets * market_rows so the attack's case and control groups match
    // in size.
    ClusterSpec small;
    small.centroid = {8.0, 0.42, 0.42, 0.42, 0.42, 0.42, 0.42, 0.42, 0.42, 0.42, 240.0, 110.0};
    small.spread = {2.5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 90.0, 55.0};
    small.weight = 1.0;
    ClusterSpec large;
    large.centroid = {11.0, 0.58, 0.58, 0.58, 0.58, 0.58, 0.58, 0.58, 0.58, 0.58, 330.0, 160.0};
    large.spread = {2.5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 90.0, 55.0};
    large.weight = 1.0;
    spec.clusters = {std::move(small), std::move(large)};
    return spec;
}

SweepResult epsilon_sweep(const SweepConfig& config, const SweepDataSpec& data) {
    require(config.epsilons.size() >= 2, ErrorCode::invalid_argument,
            "need at least two epsilon values");
    for (std::size_t i = 0; i < config.epsilons.size(); ++i) {
        require(config.epsilons[i] > 0.0, ErrorCode::invalid_argument,
                "epsilon values must be positive");
        require(i == 0 || config.epsilons[i - 1] < config.epsilons[i],
                ErrorCode::invalid_argument, "epsilon values must be strictly ascending");
    }
    require(!config.kinds.empty(), ErrorCode::invalid_argument, "no classifier kinds");
    require(config.seed_count >= 1, ErrorCode::invalid_argument, "seed_count must be >= 1");
    require(config.fpr > 0.0 && config.fpr < 1.0, ErrorCode::invalid_argument,
            "fpr must lie in (0, 1)");
    require(data.public_rows >= 2 && data.markets >= 1 && data.market_rows >= 1,
            ErrorCode::invalid_argument, "sweep data spec is too small");

    SweepResult result;
    result.epsilons = config.epsilons;
    const std::size_t ne = config.epsilons.size();
    result.power_by_seed.assign(config.seed_count, std::vector<double>(ne, 0.0));
    for (ClassifierKind kind : config.kinds) {
        result.accuracy_by_kind_by_seed[kind].assign(config.seed_count,
                                                     std::vector<double>(ne, 0.0));
    }

    Rng master(config.master_seed);
    for (std::size_t s = 0; s < config.seed_count; ++s) {
        Rng seed_base = master.derive(s);

        FeatureTable public_table = generate_synthetic_market(
            data.schema, data.public_rows, data.clusters, seed_base.derive("public").seed());
        ShareBundle bundle = fit_share_bundle(public_table, data.rank);
        ProjectedMatrix control = project_with_bundle(bundle, public_table);

        ProjectedMatrix pooled;
        {
            std::vector<Matrix> parts;
            std::size_t total = 0;
            Rng market_seeds = seed_base.derive("markets");
            for (std::size_t m = 0; m < data.markets; ++m) {
                FeatureTable market = generate_synthetic_market(
                    data.schema, data.market_rows, data.clusters,
                    market_seeds.derive(m).seed());
                ProjectedMatrix proj = project_with_bundle(bundle, market);
                total += proj.scores.rows();
                for (auto& p : proj.pseudonyms) pooled.pseudonyms.push_back(std::move(p));
                parts.push_back(std::move(proj.scores));
            }
            pooled.scores = Matrix(total, data.rank);
            std::size_t at = 0;
            for (const Matrix& part : parts) {
                for (std::size_t i = 0; i < part.rows(); ++i, ++at) {
                    for (std::size_t j = 0; j < part.cols(); ++j) {
                        pooled.scores(at, j) = part(i, j);
                    }
                }
            }
        }

        const std::uint64_t utility_seed = seed_base.derive("utility").seed();
        Rng noise_streams = seed_base.derive("noise");
        for (std::size_t e = 0; e < ne; ++e) {
            PrivacyBudget budget = allocate_budget(config.epsilons[e], bundle.sensitivity);
            Rng noise = noise_streams.derive(e);
            NoisyProjection noisy = perturb(pooled, bundle.sensitivity, budget, noise);

            result.power_by_seed[s][e] =
                membership_power(noisy, pooled, control, config.fpr).power;
            for (ClassifierKind kind : config.kinds) {
                result.accuracy_by_kind_by_seed[kind][s][e] =
                    utility_accuracy(kind, pooled, noisy, 2, utility_seed);
            }
        }
    }

    result.power_values.assign(ne, 0.0);
    for (const auto& row : result.power_by_seed) {
        for (std::size_t e = 0; e < ne; ++e) result.power_values[e] += row[e];
    }
    for (double& v : result.power_values) v /= double(config.seed_count);
    for (ClassifierKind kind : config.kinds) {
        auto& mean = result.accuracy_by_kind[kind];
        mean.assign(ne, 0.0);
        for (const auto& row : result.accuracy_by_kind_by_seed[kind]) {
            for (std::size_t e = 0; e < ne; ++e) mean[e] += row[e];
        }
        for (double& v : mean) v /= double(config.seed_count);
    }

    result.optimal_epsilon_by_kind =
        select_optimal_epsilon(result, config.power_max, config.accuracy_min);
    return result;
}

std::map<ClassifierKind, OptimalEpsilon> select_optimal_epsilon(const SweepResult& sweep,
                                                                double power_max,
                                                                double accuracy_min) {
    require(!sweep.epsilons.empty(), ErrorCode::invalid_argument, "empty sweep");
    require(power_max > 0.0 && power_max < 1.0 && accuracy_min > 0.0 && accuracy_min < 1.0,
            ErrorCode::invalid_argument, "thresholds must lie in (0, 1)");
    require(sweep.power_values.size() == sweep.epsilons.size(), ErrorCode::invalid_argument,
            "power curve length does not match epsilons");

    std::map<ClassifierKind, OptimalEpsilon> out;
    for (const auto& [kind, accuracy] : sweep.accuracy_by_kind) {
        require(accuracy.size() == sweep.epsilons.size(), ErrorCode::invalid_argument,
                "accuracy curve length does not match epsilons");
        OptimalEpsilon pick;
        for (std::size_t e = 0; e < sweep.epsilons.size(); ++e) {
            if (sweep.power_values[e] <= power_max && accuracy[e] >= accuracy_min) {
                pick.feasible = true;
                pick.epsilon = sweep.epsilons[e];
                break;
            }
        }
        if (!pick.feasible) {
            // Keep the grid points no other point beats on both axes.
            for (std::size_t e = 0; e < sweep.epsilons.size(); ++e) {
                bool dominated = false;
                for (std::size_t o = 0; o < sweep.epsilons.size() && !dominated; ++o) {
                    if (o == e) continue;
                    bool no_worse = sweep.power_values[o] <= sweep.power_values[e] &&
                                    accuracy[o] >= accuracy[e];
                    bool better = sweep.power_values[o] < sweep.power_values[e] ||
                                  accuracy[o] > accuracy[e];
                    dominated = no_worse && better;
                }
                if (!dominated) pick.frontier_epsilons.push_back(sweep.epsilons[e]);
            }
        }
        out[kind] = std::move(pick);
    }
    return out;
}

void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path) {
    auto logistic = sweep.accuracy_by_kind.find(ClassifierKind::logistic);
    auto nb = sweep.accuracy_by_kind.find(ClassifierKind::naive_bayes);
    auto svm = sweep.accuracy_by_kind.find(ClassifierKind::svm);
    require(logistic != sweep.accuracy_by_kind.end() && nb != sweep.accuracy_by_kind.end() &&
                svm != sweep.accuracy_by_kind.end(),
            ErrorCode::invalid_argument, "sweep export needs all three classifier kinds");

    std::ofstream out(path);
    require(out.good(), ErrorCode::io, "cannot open '" + path.string() + "'");
    out << "epsilon,power,accuracy_logistic,accuracy_nb,accuracy_svm\n";
    for (std::size_t e = 0; e < sweep.epsilons.size(); ++e) {
        out << format_double(sweep.epsilons[e]) << ',' << format_double(sweep.power_values[e])
            << ',' << format_double(logistic->second[e]) << ',' << format_double(nb->second[e])
            << ',' << format_double(svm->second[e]) << '\n';
    }
    require(out.good(), ErrorCode::io, "write failed for '" + path.string() + "'");
}

} // namespace farmlink
