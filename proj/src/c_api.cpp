#include "farmlink.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "farmlink/error.hpp"
#include "farmlink/kmeans.hpp"
#include "farmlink/ldp.hpp"
#include "farmlink/pipeline.hpp"
#include "farmlink/privacy_eval.hpp"
#include "farmlink/researcher.hpp"
#include "farmlink/rng.hpp"
#include "farmlink/synth.hpp"
#include "farmlink/table.hpp"

struct farmlink_table {
    farmlink::FeatureTable value;
};
struct farmlink_model {
    farmlink::ShareBundle value;
};
struct farmlink_projection {
    farmlink::ProjectedMatrix value;
};
struct farmlink_kmeans {
    farmlink::KMeansModel value;
};

namespace {

thread_local std::string g_last_error;

farmlink_status status_of(farmlink::ErrorCode code) {
    using farmlink::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return FARMLINK_ERR_INVALID_ARGUMENT;
        case ErrorCode::parse: return FARMLINK_ERR_PARSE;
        case ErrorCode::io: return FARMLINK_ERR_IO;
        case ErrorCode::dimension_mismatch: return FARMLINK_ERR_DIMENSION_MISMATCH;
        case ErrorCode::protocol: return FARMLINK_ERR_PROTOCOL;
        case ErrorCode::runtime: return FARMLINK_ERR_RUNTIME;
    }
    return FARMLINK_ERR_RUNTIME;
}

farmlink_status fail(farmlink_status status, const char* message) {
    g_last_error = message;
    return status;
}

/// Runs `body`, translating exceptions into status codes.
template <typename Body>
farmlink_status guarded(Body&& body) {
    try {
        body();
        return FARMLINK_OK;
    } catch (const farmlink::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FARMLINK_ERR_RUNTIME;
    }
}

char* copy_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* farmlink_version(void) { return farmlink::kVersion; }

const char* farmlink_last_error(void) { return g_last_error.c_str(); }

void farmlink_string_free(char* text) { delete[] text; }

farmlink_status farmlink_table_load_csv(const char* path, farmlink_table** out) {
    if (path == nullptr || out == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *out = new farmlink_table{
            farmlink::load_csv(path, farmlink::Schema::farmers_market())};
    });
}

farmlink_status farmlink_table_generate(uint64_t seed, size_t rows, farmlink_table** out) {
    if (out == nullptr) return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        farmlink::SweepDataSpec data = farmlink::standard_sweep_data();
        *out = new farmlink_table{
            farmlink::generate_synthetic_market(data.schema, rows, data.clusters, seed)};
    });
}

farmlink_status farmlink_table_write_csv(const farmlink_table* table, const char* path) {
    if (table == nullptr || path == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { farmlink::write_csv(table->value, path); });
}

size_t farmlink_table_rows(const farmlink_table* table) {
    return table == nullptr ? 0 : table->value.rows();
}

size_t farmlink_table_features(const farmlink_table* table) {
    return table == nullptr ? 0 : table->value.feature_count();
}

const char* farmlink_table_pseudonym(const farmlink_table* table, size_t row) {
    if (table == nullptr || row >= table->value.rows()) {
        g_last_error = "row out of range";
        return nullptr;
    }
    return table->value.pseudonyms()[row].c_str();
}

void farmlink_table_free(farmlink_table* table) { delete table; }

farmlink_status farmlink_model_fit(const farmlink_table* public_table, size_t rank,
                                   farmlink_model** out) {
    if (public_table == nullptr || out == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *out = new farmlink_model{farmlink::fit_share_bundle(public_table->value, rank)};
    });
}

farmlink_status farmlink_model_to_json(const farmlink_model* model, char** out_json) {
    if (model == nullptr || out_json == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        nlohmann::json j{
            {"model", nlohmann::json::parse(farmlink::pca_model_to_json(model->value.model))},
            {"standardization",
             {{"means", model->value.standardization.means},
              {"scales", model->value.standardization.scales}}},
            {"sensitivity", model->value.sensitivity.s}};
        *out_json = copy_string(j.dump());
    });
}

farmlink_status farmlink_model_from_json(const char* json_text, farmlink_model** out) {
    if (json_text == nullptr || out == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::exception& e) {
            throw farmlink::Error(farmlink::ErrorCode::parse,
                                  std::string("malformed bundle: ") + e.what());
        }
        farmlink::require(j.is_object() && j.contains("model") &&
                              j.contains("standardization") && j.contains("sensitivity"),
                          farmlink::ErrorCode::parse,
                          "bundle needs model, standardization, and sensitivity");
        farmlink::ShareBundle bundle;
        bundle.model = farmlink::pca_model_from_json(j["model"].dump());
        try {
            bundle.standardization.means =
                j["standardization"]["means"].get<std::vector<double>>();
            bundle.standardization.scales =
                j["standardization"]["scales"].get<std::vector<double>>();
            bundle.sensitivity =
                farmlink::ComponentSensitivity(j["sensitivity"].get<std::vector<double>>());
        } catch (const nlohmann::json::exception& e) {
            throw farmlink::Error(farmlink::ErrorCode::parse,
                                  std::string("malformed bundle: ") + e.what());
        }
        farmlink::require(bundle.standardization.means.size() == bundle.model.input_dim() &&
                              bundle.standardization.scales.size() == bundle.model.input_dim(),
                          farmlink::ErrorCode::parse,
                          "standardization dimension does not match model");
        farmlink::require(bundle.sensitivity.s.size() == bundle.model.rank(),
                          farmlink::ErrorCode::parse,
                          "sensitivity dimension does not match model rank");
        *out = new farmlink_model{std::move(bundle)};
    });
}

size_t farmlink_model_rank(const farmlink_model* model) {
    return model == nullptr ? 0 : model->value.model.rank();
}

size_t farmlink_model_input_dim(const farmlink_model* model) {
    return model == nullptr ? 0 : model->value.model.input_dim();
}

farmlink_status farmlink_model_project(const farmlink_model* model, const farmlink_table* table,
                                       farmlink_projection** out) {
    if (model == nullptr || table == nullptr || out == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *out = new farmlink_projection{
            farmlink::project_with_bundle(model->value, table->value)};
    });
}

void farmlink_model_free(farmlink_model* model) { delete model; }

farmlink_status farmlink_projection_perturb(const farmlink_projection* projection,
                                            const farmlink_model* model, double epsilon_total,
                                            uint64_t seed, farmlink_projection** out) {
    if (projection == nullptr || model == nullptr || out == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        farmlink::PrivacyBudget budget =
            farmlink::allocate_budget(epsilon_total, model->value.sensitivity);
        farmlink::Rng rng(seed);
        farmlink::NoisyProjection noisy = farmlink::perturb(
            projection->value, model->value.sensitivity, budget, rng);
        *out = new farmlink_projection{
            farmlink::ProjectedMatrix{std::move(noisy.pseudonyms), std::move(noisy.scores)}};
    });
}

size_t farmlink_projection_rows(const farmlink_projection* projection) {
    return projection == nullptr ? 0 : projection->value.scores.rows();
}

size_t farmlink_projection_cols(const farmlink_projection* projection) {
    return projection == nullptr ? 0 : projection->value.scores.cols();
}

double farmlink_projection_score(const farmlink_projection* projection, size_t row, size_t col) {
    if (projection == nullptr || row >= projection->value.scores.rows() ||
        col >= projection->value.scores.cols()) {
        g_last_error = "index out of range";
        return 0.0;
    }
    return projection->value.scores(row, col);
}

const char* farmlink_projection_pseudonym(const farmlink_projection* projection, size_t row) {
    if (projection == nullptr || row >= projection->value.pseudonyms.size()) {
        g_last_error = "row out of range";
        return nullptr;
    }
    return projection->value.pseudonyms[row].c_str();
}

void farmlink_projection_free(farmlink_projection* projection) { delete projection; }

farmlink_status farmlink_kmeans_run(const farmlink_projection* projection, size_t k,
                                    uint64_t seed, farmlink_kmeans** out) {
    if (projection == nullptr || out == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *out = new farmlink_kmeans{farmlink::kmeans(projection->value.scores, k, seed)};
    });
}

size_t farmlink_kmeans_k(const farmlink_kmeans* model) {
    return model == nullptr ? 0 : model->value.centroids.rows();
}

size_t farmlink_kmeans_label(const farmlink_kmeans* model, size_t row) {
    if (model == nullptr || row >= model->value.labels.size()) {
        g_last_error = "row out of range";
        return static_cast<size_t>(-1);
    }
    return model->value.labels[row];
}

double farmlink_kmeans_wcss(const farmlink_kmeans* model) {
    return model == nullptr ? 0.0 : model->value.wcss;
}

void farmlink_kmeans_free(farmlink_kmeans* model) { delete model; }

farmlink_status farmlink_select_k(const farmlink_projection* projection, size_t k_min,
                                  size_t k_max, uint64_t seed, size_t* out_k, int* out_weak) {
    if (projection == nullptr || out_k == nullptr || out_weak == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        farmlink::ElbowCurve curve =
            farmlink::select_k_elbow(projection->value.scores, k_min, k_max, seed);
        *out_k = curve.chosen_k;
        *out_weak = curve.weak_elbow ? 1 : 0;
    });
}

farmlink_status farmlink_membership_power(const farmlink_projection* shared_noisy,
                                          const farmlink_projection* case_group,
                                          const farmlink_projection* control_group, double fpr,
                                          double* out_power, double* out_threshold,
                                          double* out_realized_fpr) {
    if (shared_noisy == nullptr || case_group == nullptr || control_group == nullptr ||
        out_power == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        farmlink::NoisyProjection shared{shared_noisy->value.pseudonyms,
                                         shared_noisy->value.scores};
        farmlink::PowerResult result = farmlink::membership_power(
            shared, case_group->value, control_group->value, fpr);
        *out_power = result.power;
        if (out_threshold != nullptr) *out_threshold = result.threshold;
        if (out_realized_fpr != nullptr) *out_realized_fpr = result.realized_fpr;
    });
}

farmlink_status farmlink_run_command(const char* command, const char* config_json,
                                     const char* out_dir, char** out_summary) {
    if (command == nullptr || config_json == nullptr || out_dir == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        std::string summary = farmlink::run_command(command, config_json, out_dir);
        if (out_summary != nullptr) *out_summary = copy_string(summary);
    });
}

farmlink_status farmlink_replay(const char* manifest_path, const char* out_dir,
                                char** out_summary) {
    if (manifest_path == nullptr || out_dir == nullptr) {
        return fail(FARMLINK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        std::string summary = farmlink::replay(manifest_path, out_dir);
        if (out_summary != nullptr) *out_summary = copy_string(summary);
    });
}

} // extern "C"
