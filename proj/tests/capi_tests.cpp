// Exercises the shared-library C interface the way an external consumer
// would: only farmlink.h, opaque handles, status codes, and owned strings.
// Behavioral depth lives in the unit suite; this binary proves the C surface
// exposes it faithfully and never crashes on bad input.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <farmlink.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

/// Unique scratch directory, removed on destruction. Local copy so this
/// binary depends on nothing but the public header.
class ScratchDir {
public:
    ScratchDir() {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("farmlink-capi-" + std::to_string(rd()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create scratch directory");
    }

    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TableDel {
    void operator()(farmlink_table* p) const { farmlink_table_free(p); }
};
struct ModelDel {
    void operator()(farmlink_model* p) const { farmlink_model_free(p); }
};
struct ProjectionDel {
    void operator()(farmlink_projection* p) const { farmlink_projection_free(p); }
};
struct KMeansDel {
    void operator()(farmlink_kmeans* p) const { farmlink_kmeans_free(p); }
};
struct StringDel {
    void operator()(char* p) const { farmlink_string_free(p); }
};

using TablePtr = std::unique_ptr<farmlink_table, TableDel>;
using ModelPtr = std::unique_ptr<farmlink_model, ModelDel>;
using ProjectionPtr = std::unique_ptr<farmlink_projection, ProjectionDel>;
using KMeansPtr = std::unique_ptr<farmlink_kmeans, KMeansDel>;
using StringPtr = std::unique_ptr<char, StringDel>;

TablePtr generate_table(uint64_t seed, size_t rows) {
    farmlink_table* raw = nullptr;
    REQUIRE(farmlink_table_generate(seed, rows, &raw) == FARMLINK_OK);
    REQUIRE(raw != nullptr);
    return TablePtr(raw);
}

ModelPtr fit_model(const farmlink_table* table, size_t rank) {
    farmlink_model* raw = nullptr;
    REQUIRE(farmlink_model_fit(table, rank, &raw) == FARMLINK_OK);
    REQUIRE(raw != nullptr);
    return ModelPtr(raw);
}

ProjectionPtr project(const farmlink_model* model, const farmlink_table* table) {
    farmlink_projection* raw = nullptr;
    REQUIRE(farmlink_model_project(model, table, &raw) == FARMLINK_OK);
    REQUIRE(raw != nullptr);
    return ProjectionPtr(raw);
}

ProjectionPtr perturb(const farmlink_projection* projection, const farmlink_model* model,
                      double epsilon, uint64_t seed) {
    farmlink_projection* raw = nullptr;
    REQUIRE(farmlink_projection_perturb(projection, model, epsilon, seed, &raw) == FARMLINK_OK);
    REQUIRE(raw != nullptr);
    return ProjectionPtr(raw);
}

std::vector<double> scores_of(const farmlink_projection* projection) {
    const size_t rows = farmlink_projection_rows(projection);
    const size_t cols = farmlink_projection_cols(projection);
    std::vector<double> out;
    out.reserve(rows * cols);
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) out.push_back(farmlink_projection_score(projection, r, c));
    return out;
}

} // namespace

TEST_CASE("version string and error buffer are always addressable") {
    REQUIRE(farmlink_version() != nullptr);
    CHECK(std::strcmp(farmlink_version(), "1.0.0") == 0);
    CHECK(farmlink_last_error() != nullptr);
}

TEST_CASE("null arguments fail cleanly with a status and message") {
    farmlink_table* table = nullptr;
    farmlink_model* model = nullptr;
    farmlink_projection* projection = nullptr;
    farmlink_kmeans* clustering = nullptr;
    char* text = nullptr;
    size_t k = 0;
    int weak = 0;
    double power = 0.0;

    CHECK(farmlink_table_load_csv(nullptr, &table) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(std::strcmp(farmlink_last_error(), "null argument") == 0);
    CHECK(farmlink_table_load_csv("x.csv", nullptr) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_table_generate(1, 4, nullptr) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_table_write_csv(nullptr, "x.csv") == FARMLINK_ERR_INVALID_ARGUMENT);

    CHECK(farmlink_model_fit(nullptr, 2, &model) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_model_to_json(nullptr, &text) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_model_from_json(nullptr, &model) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_model_from_json("{}", nullptr) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_model_project(nullptr, nullptr, &projection) == FARMLINK_ERR_INVALID_ARGUMENT);

    CHECK(farmlink_projection_perturb(nullptr, nullptr, 1.0, 1, &projection) ==
          FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_kmeans_run(nullptr, 2, 1, &clustering) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_select_k(nullptr, 1, 2, 1, &k, &weak) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_membership_power(nullptr, nullptr, nullptr, 0.1, &power, nullptr, nullptr) ==
          FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_run_command(nullptr, "{}", "out", nullptr) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_replay(nullptr, "out", nullptr) == FARMLINK_ERR_INVALID_ARGUMENT);

    // Accessors degrade to sentinel values instead of crashing.
    CHECK(farmlink_table_rows(nullptr) == 0);
    CHECK(farmlink_table_features(nullptr) == 0);
    CHECK(farmlink_table_pseudonym(nullptr, 0) == nullptr);
    CHECK(farmlink_model_rank(nullptr) == 0);
    CHECK(farmlink_model_input_dim(nullptr) == 0);
    CHECK(farmlink_projection_rows(nullptr) == 0);
    CHECK(farmlink_projection_cols(nullptr) == 0);
    CHECK(farmlink_projection_score(nullptr, 0, 0) == 0.0);
    CHECK(farmlink_projection_pseudonym(nullptr, 0) == nullptr);
    CHECK(farmlink_kmeans_k(nullptr) == 0);
    CHECK(farmlink_kmeans_label(nullptr, 0) == static_cast<size_t>(-1));
    CHECK(farmlink_kmeans_wcss(nullptr) == 0.0);

    // Free functions accept null handles.
    farmlink_table_free(nullptr);
    farmlink_model_free(nullptr);
    farmlink_projection_free(nullptr);
    farmlink_kmeans_free(nullptr);
    farmlink_string_free(nullptr);
}

TEST_CASE("generated tables expose rows, features, and pseudonyms") {
    TablePtr table = generate_table(7, 40);
    CHECK(farmlink_table_rows(table.get()) == 40);
    CHECK(farmlink_table_features(table.get()) == 12);

    const char* first = farmlink_table_pseudonym(table.get(), 0);
    const char* second = farmlink_table_pseudonym(table.get(), 1);
    REQUIRE(first != nullptr);
    REQUIRE(second != nullptr);
    CHECK(std::strlen(first) == 16);
    CHECK(std::strlen(second) == 16);
    CHECK(std::strcmp(first, second) != 0);

    CHECK(farmlink_table_pseudonym(table.get(), 40) == nullptr);
    CHECK(std::strcmp(farmlink_last_error(), "row out of range") == 0);

    // Same seed, same table; different seed, different identities.
    TablePtr again = generate_table(7, 40);
    CHECK(std::strcmp(farmlink_table_pseudonym(again.get(), 0), first) == 0);
    TablePtr other = generate_table(8, 40);
    CHECK(std::strcmp(farmlink_table_pseudonym(other.get(), 0), first) != 0);
}

TEST_CASE("CSV write and load round trip preserves every value") {
    ScratchDir dir;
    const std::string path = (dir / "roster.csv").string();

    TablePtr table = generate_table(11, 25);
    REQUIRE(farmlink_table_write_csv(table.get(), path.c_str()) == FARMLINK_OK);

    farmlink_table* raw = nullptr;
    REQUIRE(farmlink_table_load_csv(path.c_str(), &raw) == FARMLINK_OK);
    TablePtr loaded(raw);

    REQUIRE(farmlink_table_rows(loaded.get()) == 25);
    CHECK(farmlink_table_features(loaded.get()) == 12);
    for (size_t r = 0; r < 25; ++r) {
        CHECK(std::strcmp(farmlink_table_pseudonym(loaded.get(), r),
                          farmlink_table_pseudonym(table.get(), r)) == 0);
    }

    // Cells have no direct accessor; identical projections prove the feature
    // values survived the text round trip bit for bit.
    TablePtr public_table = generate_table(3, 60);
    ModelPtr model = fit_model(public_table.get(), 2);
    ProjectionPtr from_original = project(model.get(), table.get());
    ProjectionPtr from_loaded = project(model.get(), loaded.get());
    CHECK(scores_of(from_original.get()) == scores_of(from_loaded.get()));
}

TEST_CASE("CSV loading reports missing files and malformed rosters") {
    ScratchDir dir;
    farmlink_table* raw = nullptr;

    CHECK(farmlink_table_load_csv((dir / "absent.csv").string().c_str(), &raw) ==
          FARMLINK_ERR_IO);
    CHECK(std::strlen(farmlink_last_error()) > 0);

    const std::string bad = (dir / "bad.csv").string();
    {
        std::ofstream out(bad);
        out << "not,a,roster\n1,2,3\n";
    }
    CHECK(farmlink_table_load_csv(bad.c_str(), &raw) == FARMLINK_ERR_PARSE);
}

TEST_CASE("bundled fixture loads through the C surface") {
    const std::string path = std::string(FARMLINK_FIXTURES_DIR) + "/vendors_small.csv";
    farmlink_table* raw = nullptr;
    REQUIRE(farmlink_table_load_csv(path.c_str(), &raw) == FARMLINK_OK);
    TablePtr table(raw);
    CHECK(farmlink_table_rows(table.get()) == 5);
    CHECK(farmlink_table_features(table.get()) == 12);
    CHECK(std::strcmp(farmlink_table_pseudonym(table.get(), 0), "6815") == 0);
}

TEST_CASE("model fitting validates rank and reports dimensions") {
    TablePtr public_table = generate_table(3, 60);
    ModelPtr model = fit_model(public_table.get(), 2);
    CHECK(farmlink_model_rank(model.get()) == 2);
    CHECK(farmlink_model_input_dim(model.get()) == 12);

    farmlink_model* raw = nullptr;
    CHECK(farmlink_model_fit(public_table.get(), 0, &raw) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_model_fit(public_table.get(), 13, &raw) == FARMLINK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("model JSON round trip reproduces projections exactly") {
    TablePtr public_table = generate_table(3, 60);
    ModelPtr model = fit_model(public_table.get(), 2);

    char* raw_json = nullptr;
    REQUIRE(farmlink_model_to_json(model.get(), &raw_json) == FARMLINK_OK);
    StringPtr json_text(raw_json);
    const std::string bundle(json_text.get());
    CHECK(bundle.find("\"model\"") != std::string::npos);
    CHECK(bundle.find("\"standardization\"") != std::string::npos);
    CHECK(bundle.find("\"sensitivity\"") != std::string::npos);

    farmlink_model* raw_model = nullptr;
    REQUIRE(farmlink_model_from_json(bundle.c_str(), &raw_model) == FARMLINK_OK);
    ModelPtr reloaded(raw_model);
    CHECK(farmlink_model_rank(reloaded.get()) == 2);
    CHECK(farmlink_model_input_dim(reloaded.get()) == 12);

    TablePtr probe = generate_table(4, 20);
    ProjectionPtr a = project(model.get(), probe.get());
    ProjectionPtr b = project(reloaded.get(), probe.get());
    CHECK(scores_of(a.get()) == scores_of(b.get()));
}

TEST_CASE("model JSON parsing rejects malformed and inconsistent bundles") {
    farmlink_model* raw = nullptr;

    CHECK(farmlink_model_from_json("not json", &raw) == FARMLINK_ERR_PARSE);
    CHECK(std::string(farmlink_last_error()).find("malformed bundle") != std::string::npos);

    CHECK(farmlink_model_from_json("{}", &raw) == FARMLINK_ERR_PARSE);
    CHECK(std::string(farmlink_last_error()).find("bundle needs") != std::string::npos);

    // Splice structurally valid but dimensionally wrong arrays into a real
    // bundle; keys are serialized alphabetically so the anchors are stable.
    TablePtr public_table = generate_table(3, 60);
    ModelPtr model = fit_model(public_table.get(), 2);
    char* raw_json = nullptr;
    REQUIRE(farmlink_model_to_json(model.get(), &raw_json) == FARMLINK_OK);
    StringPtr json_text(raw_json);
    const std::string bundle(json_text.get());

    {
        const auto begin = bundle.find("\"sensitivity\":");
        const auto end = bundle.find(",\"standardization\"");
        REQUIRE(begin != std::string::npos);
        REQUIRE(end != std::string::npos);
        std::string short_sensitivity = bundle;
        short_sensitivity.replace(begin, end - begin, "\"sensitivity\":[1.0]");
        CHECK(farmlink_model_from_json(short_sensitivity.c_str(), &raw) == FARMLINK_ERR_PARSE);
        CHECK(std::string(farmlink_last_error()).find("sensitivity dimension") !=
              std::string::npos);
    }
    {
        const auto begin = bundle.rfind("\"means\":[");
        REQUIRE(begin != std::string::npos);
        const auto end = bundle.find(']', begin);
        REQUIRE(end != std::string::npos);
        std::string short_means = bundle;
        short_means.replace(begin, end - begin + 1, "\"means\":[0.0]");
        CHECK(farmlink_model_from_json(short_means.c_str(), &raw) == FARMLINK_ERR_PARSE);
        CHECK(std::string(farmlink_last_error()).find("standardization dimension") !=
              std::string::npos);
    }
}

TEST_CASE("projections expose scores and pseudonyms with range checks") {
    TablePtr public_table = generate_table(3, 60);
    TablePtr market = generate_table(4, 20);
    ModelPtr model = fit_model(public_table.get(), 2);
    ProjectionPtr projection = project(model.get(), market.get());

    CHECK(farmlink_projection_rows(projection.get()) == 20);
    CHECK(farmlink_projection_cols(projection.get()) == 2);
    for (size_t r = 0; r < 20; ++r) {
        CHECK(std::strcmp(farmlink_projection_pseudonym(projection.get(), r),
                          farmlink_table_pseudonym(market.get(), r)) == 0);
        CHECK(std::isfinite(farmlink_projection_score(projection.get(), r, 0)));
        CHECK(std::isfinite(farmlink_projection_score(projection.get(), r, 1)));
    }

    CHECK(farmlink_projection_score(projection.get(), 20, 0) == 0.0);
    CHECK(std::strcmp(farmlink_last_error(), "index out of range") == 0);
    CHECK(farmlink_projection_score(projection.get(), 0, 2) == 0.0);
    CHECK(farmlink_projection_pseudonym(projection.get(), 20) == nullptr);
}

TEST_CASE("perturbation is deterministic in the seed and validates its inputs") {
    TablePtr public_table = generate_table(3, 60);
    TablePtr market = generate_table(4, 20);
    ModelPtr model = fit_model(public_table.get(), 2);
    ProjectionPtr clean = project(model.get(), market.get());

    ProjectionPtr noisy = perturb(clean.get(), model.get(), 5.0, 11);
    CHECK(farmlink_projection_rows(noisy.get()) == 20);
    CHECK(farmlink_projection_cols(noisy.get()) == 2);
    for (size_t r = 0; r < 20; ++r) {
        CHECK(std::strcmp(farmlink_projection_pseudonym(noisy.get(), r),
                          farmlink_projection_pseudonym(clean.get(), r)) == 0);
    }
    CHECK(scores_of(noisy.get()) != scores_of(clean.get()));

    ProjectionPtr replayed = perturb(clean.get(), model.get(), 5.0, 11);
    CHECK(scores_of(replayed.get()) == scores_of(noisy.get()));
    ProjectionPtr reseeded = perturb(clean.get(), model.get(), 5.0, 12);
    CHECK(scores_of(reseeded.get()) != scores_of(noisy.get()));

    farmlink_projection* raw = nullptr;
    CHECK(farmlink_projection_perturb(clean.get(), model.get(), 0.0, 11, &raw) ==
          FARMLINK_ERR_INVALID_ARGUMENT);

    // A bundle of the wrong rank cannot price this projection's noise.
    ModelPtr narrow = fit_model(public_table.get(), 1);
    CHECK(farmlink_projection_perturb(clean.get(), narrow.get(), 5.0, 11, &raw) != FARMLINK_OK);
}

TEST_CASE("clustering runs, labels rows, and validates k") {
    TablePtr public_table = generate_table(3, 60);
    ModelPtr model = fit_model(public_table.get(), 2);
    ProjectionPtr projection = project(model.get(), public_table.get());

    farmlink_kmeans* raw = nullptr;
    REQUIRE(farmlink_kmeans_run(projection.get(), 2, 9, &raw) == FARMLINK_OK);
    KMeansPtr clustering(raw);
    CHECK(farmlink_kmeans_k(clustering.get()) == 2);
    CHECK(farmlink_kmeans_wcss(clustering.get()) > 0.0);
    for (size_t r = 0; r < 60; ++r) CHECK(farmlink_kmeans_label(clustering.get(), r) < 2);
    CHECK(farmlink_kmeans_label(clustering.get(), 60) == static_cast<size_t>(-1));

    farmlink_kmeans* again = nullptr;
    REQUIRE(farmlink_kmeans_run(projection.get(), 2, 9, &again) == FARMLINK_OK);
    KMeansPtr repeat(again);
    CHECK(farmlink_kmeans_wcss(repeat.get()) == farmlink_kmeans_wcss(clustering.get()));
    for (size_t r = 0; r < 60; ++r) {
        CHECK(farmlink_kmeans_label(repeat.get(), r) == farmlink_kmeans_label(clustering.get(), r));
    }

    farmlink_kmeans* invalid = nullptr;
    CHECK(farmlink_kmeans_run(projection.get(), 0, 9, &invalid) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_kmeans_run(projection.get(), 61, 9, &invalid) ==
          FARMLINK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("cluster-count selection scans the requested range") {
    TablePtr public_table = generate_table(3, 80);
    ModelPtr model = fit_model(public_table.get(), 2);
    ProjectionPtr projection = project(model.get(), public_table.get());

    size_t chosen = 0;
    int weak = -1;
    REQUIRE(farmlink_select_k(projection.get(), 2, 5, 13, &chosen, &weak) == FARMLINK_OK);
    CHECK(chosen >= 2);
    CHECK(chosen <= 5);
    CHECK((weak == 0 || weak == 1));

    // A single-point range has no elbow to detect.
    REQUIRE(farmlink_select_k(projection.get(), 3, 3, 13, &chosen, &weak) == FARMLINK_OK);
    CHECK(chosen == 3);
    CHECK(weak == 1);

    // The scan starts at two clusters; below that there is no curve to bend.
    CHECK(farmlink_select_k(projection.get(), 1, 5, 13, &chosen, &weak) != FARMLINK_OK);
    CHECK(farmlink_select_k(projection.get(), 0, 5, 13, &chosen, &weak) != FARMLINK_OK);
    CHECK(farmlink_select_k(projection.get(), 4, 2, 13, &chosen, &weak) != FARMLINK_OK);
}

TEST_CASE("membership power runs end to end over the C surface") {
    TablePtr public_table = generate_table(3, 60);
    TablePtr market = generate_table(4, 30);
    ModelPtr model = fit_model(public_table.get(), 2);
    ProjectionPtr member_scores = project(model.get(), market.get());
    ProjectionPtr control_scores = project(model.get(), public_table.get());
    ProjectionPtr shared = perturb(member_scores.get(), model.get(), 80.0, 21);

    double power = -1.0, threshold = -1.0, realized = -1.0;
    REQUIRE(farmlink_membership_power(shared.get(), member_scores.get(), control_scores.get(),
                                      0.1, &power, &threshold, &realized) == FARMLINK_OK);
    CHECK(power >= 0.0);
    CHECK(power <= 1.0);
    CHECK(threshold >= 0.0);
    CHECK(realized >= 0.0);
    CHECK(realized <= 0.1);

    // The diagnostic out-parameters are optional.
    double power_again = -1.0;
    REQUIRE(farmlink_membership_power(shared.get(), member_scores.get(), control_scores.get(),
                                      0.1, &power_again, nullptr, nullptr) == FARMLINK_OK);
    CHECK(power_again == power);

    CHECK(farmlink_membership_power(shared.get(), member_scores.get(), control_scores.get(), 0.0,
                                    &power, nullptr, nullptr) == FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(farmlink_membership_power(shared.get(), member_scores.get(), control_scores.get(), 1.0,
                                    &power, nullptr, nullptr) == FARMLINK_ERR_INVALID_ARGUMENT);

    // Mismatched score widths cannot be compared.
    ModelPtr narrow = fit_model(public_table.get(), 1);
    ProjectionPtr narrow_cases = project(narrow.get(), market.get());
    CHECK(farmlink_membership_power(shared.get(), narrow_cases.get(), control_scores.get(), 0.1,
                                    &power, nullptr, nullptr) != FARMLINK_OK);
}

TEST_CASE("pipeline commands run and replay byte-identically") {
    ScratchDir first;
    ScratchDir second;
    const std::string config = R"({"seed":5,"markets":2,"market_rows":6,"public_rows":12,)"
                               R"("weeks":4,"start_week":"2018-W01"})";

    char* raw_summary = nullptr;
    REQUIRE(farmlink_run_command("gen", config.c_str(), (first / "").string().c_str(),
                                 &raw_summary) == FARMLINK_OK);
    StringPtr summary(raw_summary);
    CHECK(std::string(summary.get()).find("\"public_rows\": 12") != std::string::npos);
    CHECK(std::filesystem::exists(first / "public.csv"));
    CHECK(std::filesystem::exists(first / "manifest.json"));

    char* raw_replayed = nullptr;
    REQUIRE(farmlink_replay((first / "manifest.json").string().c_str(),
                            (second / "").string().c_str(), &raw_replayed) == FARMLINK_OK);
    StringPtr replayed(raw_replayed);
    CHECK(std::string(replayed.get()) == std::string(summary.get()));
    CHECK(slurp(second / "public.csv") == slurp(first / "public.csv"));
    CHECK(slurp(second / "market_1.csv") == slurp(first / "market_1.csv"));
    CHECK(slurp(second / "manifest.json") == slurp(first / "manifest.json"));

    // The summary out-parameter is optional.
    ScratchDir third;
    REQUIRE(farmlink_run_command("gen", config.c_str(), (third / "").string().c_str(),
                                 nullptr) == FARMLINK_OK);
    CHECK(slurp(third / "public.csv") == slurp(first / "public.csv"));
}

TEST_CASE("pipeline commands reject bad requests with specific statuses") {
    ScratchDir dir;

    CHECK(farmlink_run_command("bogus", "{}", (dir / "a").string().c_str(), nullptr) ==
          FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(std::string(farmlink_last_error()).find("unknown command") != std::string::npos);

    CHECK(farmlink_run_command("gen", "not json", (dir / "b").string().c_str(), nullptr) ==
          FARMLINK_ERR_PARSE);
    CHECK(std::string(farmlink_last_error()).find("malformed config") != std::string::npos);

    CHECK(farmlink_run_command("gen", R"({"sede":1})", (dir / "c").string().c_str(), nullptr) ==
          FARMLINK_ERR_INVALID_ARGUMENT);
    CHECK(std::string(farmlink_last_error()).find("unknown config key") != std::string::npos);

    CHECK(farmlink_replay((dir / "absent.json").string().c_str(), (dir / "d").string().c_str(),
                          nullptr) == FARMLINK_ERR_IO);

    const std::string mangled = (dir / "mangled.json").string();
    {
        std::ofstream out(mangled);
        out << "not json";
    }
    CHECK(farmlink_replay(mangled.c_str(), (dir / "e").string().c_str(), nullptr) ==
          FARMLINK_ERR_PARSE);
    CHECK(std::string(farmlink_last_error()).find("malformed manifest") != std::string::npos);
}
