/* Public C interface to the federated privacy-preserving linkage toolkit.
 *
 * Conventions:
 *  - Every fallible call returns farmlink_status; FARMLINK_OK is 0.
 *  - On failure, farmlink_last_error() returns a thread-local message that
 *    stays valid until the next failing call on the same thread.
 *  - Objects come back through out-parameters as opaque handles; release
 *    them with the matching *_free. Strings returned through char** out
 *    parameters are owned by the caller; release with farmlink_string_free.
 *  - All operations are deterministic in their explicit seeds.
 */
#ifndef FARMLINK_H
#define FARMLINK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum farmlink_status {
    FARMLINK_OK = 0,
    FARMLINK_ERR_INVALID_ARGUMENT = 1,
    FARMLINK_ERR_PARSE = 2,
    FARMLINK_ERR_IO = 3,
    FARMLINK_ERR_DIMENSION_MISMATCH = 4,
    FARMLINK_ERR_PROTOCOL = 5,
    FARMLINK_ERR_RUNTIME = 6
} farmlink_status;

/* A pseudonymized feature table (vendor roster schema). */
typedef struct farmlink_table farmlink_table;
/* A share bundle: standardization constants, projection model, and
 * per-component sensitivities fitted on a public reference table. */
typedef struct farmlink_model farmlink_model;
/* Projected rows: pseudonyms plus score matrix (noise-free or perturbed). */
typedef struct farmlink_projection farmlink_projection;
/* A fitted clustering. */
typedef struct farmlink_kmeans farmlink_kmeans;

const char* farmlink_version(void);
const char* farmlink_last_error(void);
void farmlink_string_free(char* text);

/* ---- tables ---- */

/* Loads a vendor-roster CSV (ID column plus the standard feature columns). */
farmlink_status farmlink_table_load_csv(const char* path, farmlink_table** out);
/* Draws `rows` synthetic records from the standard two-profile mixture. */
farmlink_status farmlink_table_generate(uint64_t seed, size_t rows, farmlink_table** out);
farmlink_status farmlink_table_write_csv(const farmlink_table* table, const char* path);
size_t farmlink_table_rows(const farmlink_table* table);
size_t farmlink_table_features(const farmlink_table* table);
/* Borrowed pointer, valid while the table lives; NULL if row out of range. */
const char* farmlink_table_pseudonym(const farmlink_table* table, size_t row);
void farmlink_table_free(farmlink_table* table);

/* ---- share bundles ---- */

farmlink_status farmlink_model_fit(const farmlink_table* public_table, size_t rank,
                                   farmlink_model** out);
farmlink_status farmlink_model_to_json(const farmlink_model* model, char** out_json);
farmlink_status farmlink_model_from_json(const char* json_text, farmlink_model** out);
size_t farmlink_model_rank(const farmlink_model* model);
size_t farmlink_model_input_dim(const farmlink_model* model);
/* Standardizes with the bundle's constants, then projects. */
farmlink_status farmlink_model_project(const farmlink_model* model, const farmlink_table* table,
                                       farmlink_projection** out);
void farmlink_model_free(farmlink_model* model);

/* ---- projections ---- */

/* Splits epsilon_total across components in proportion to the bundle's
 * sensitivities and adds per-cell Laplace noise. */
farmlink_status farmlink_projection_perturb(const farmlink_projection* projection,
                                            const farmlink_model* model, double epsilon_total,
                                            uint64_t seed, farmlink_projection** out);
size_t farmlink_projection_rows(const farmlink_projection* projection);
size_t farmlink_projection_cols(const farmlink_projection* projection);
/* 0.0 if out of range (and last_error is set). */
double farmlink_projection_score(const farmlink_projection* projection, size_t row, size_t col);
const char* farmlink_projection_pseudonym(const farmlink_projection* projection, size_t row);
void farmlink_projection_free(farmlink_projection* projection);

/* ---- clustering ---- */

farmlink_status farmlink_kmeans_run(const farmlink_projection* projection, size_t k,
                                    uint64_t seed, farmlink_kmeans** out);
size_t farmlink_kmeans_k(const farmlink_kmeans* model);
/* (size_t)-1 if row out of range. */
size_t farmlink_kmeans_label(const farmlink_kmeans* model, size_t row);
double farmlink_kmeans_wcss(const farmlink_kmeans* model);
void farmlink_kmeans_free(farmlink_kmeans* model);

/* Elbow scan over [k_min, k_max] with k_min >= 2; out_weak is 1 when the
 * curve has no clear bend and the choice fell back to k_min's side. */
farmlink_status farmlink_select_k(const farmlink_projection* projection, size_t k_min,
                                  size_t k_max, uint64_t seed, size_t* out_k, int* out_weak);

/* ---- membership-inference power ---- */

farmlink_status farmlink_membership_power(const farmlink_projection* shared_noisy,
                                          const farmlink_projection* case_group,
                                          const farmlink_projection* control_group, double fpr,
                                          double* out_power, double* out_threshold,
                                          double* out_realized_fpr);

/* ---- whole-pipeline commands ---- */

/* command: "gen" | "simulate" | "sweep" | "link" | "eval-power".
 * Writes output files plus manifest.json into out_dir; out_summary (optional)
 * receives the summary JSON. */
farmlink_status farmlink_run_command(const char* command, const char* config_json,
                                     const char* out_dir, char** out_summary);
/* Re-runs the command recorded in a manifest for byte-identical outputs. */
farmlink_status farmlink_replay(const char* manifest_path, const char* out_dir,
                                char** out_summary);

#ifdef __cplusplus
}
#endif

#endif /* FARMLINK_H */
