// Command-line front end. Builds a JSON config from flags and drives the
// toolkit exclusively through the public C interface.
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <farmlink.h>

namespace {

using nlohmann::json;

int run(const char* command, const json& config, const std::string& out_dir) {
    char* summary = nullptr;
    farmlink_status status =
        farmlink_run_command(command, config.dump().c_str(), out_dir.c_str(), &summary);
    if (status != FARMLINK_OK) {
        std::fprintf(stderr, "error: %s\n", farmlink_last_error());
        return (status == FARMLINK_ERR_INVALID_ARGUMENT || status == FARMLINK_ERR_PARSE) ? 1
                                                                                         : 2;
    }
    std::fputs(summary, stdout);
    farmlink_string_free(summary);
    return 0;
}

struct SizingFlags {
    // Demo-scale defaults; the sweep subcommand swaps in the standard
    // evaluation sizes instead.
    std::size_t markets = 3;
    std::size_t market_rows = 240;
    std::size_t public_rows = 600;
    std::size_t rank = 2;

    void attach(CLI::App* app) {
        app->add_option("--markets", markets, "Number of market nodes");
        app->add_option("--market-rows", market_rows, "Records per market");
        app->add_option("--public-rows", public_rows, "Rows in the public reference table");
        app->add_option("--rank", rank, "Number of projection components");
    }

    void fill(json& config) const {
        config["markets"] = markets;
        config["market_rows"] = market_rows;
        config["public_rows"] = public_rows;
        config["rank"] = rank;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated privacy-preserving data-linkage toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(farmlink_version()));

    std::uint64_t seed = 1;
    std::string out_dir;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate synthetic market and public datasets");
    SizingFlags gen_sizing;
    std::size_t gen_weeks = 36;
    std::string gen_start = "2013-W01";
    std::size_t gen_min_group = 3;
    gen->add_option("--seed", seed, "Master seed");
    gen->add_option("--weeks", gen_weeks, "Weeks of per-record sales history");
    gen->add_option("--start-week", gen_start, "First ISO week, e.g. 2013-W01");
    gen->add_option("--min-group-size", gen_min_group, "Aggregate suppression threshold");
    gen_sizing.attach(gen);
    gen->add_option("--out", out_dir, "Output directory")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a full researcher/market session");
    SizingFlags sim_sizing;
    double sim_epsilon = 100.0;
    std::size_t sim_k_min = 2;
    std::size_t sim_k_max = 2;
    std::size_t sim_min_group = 3;
    std::string sim_transport = "inproc";
    simulate->add_option("--seed", seed, "Master seed");
    simulate->add_option("--epsilon", sim_epsilon, "Total privacy budget");
    simulate->add_option("--k-min", sim_k_min, "Smallest k to consider");
    simulate->add_option("--k-max", sim_k_max, "Largest k to consider");
    simulate->add_option("--min-group-size", sim_min_group, "Aggregate suppression threshold");
    simulate->add_option("--transport", sim_transport, "inproc or socket")
        ->check(CLI::IsMember({"inproc", "socket"}));
    sim_sizing.attach(simulate);
    simulate->add_option("--out", out_dir, "Output directory")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Sweep epsilon; export power/accuracy curves");
    SizingFlags sweep_sizing;
    sweep_sizing.markets = 3;
    sweep_sizing.market_rows = 34;
    sweep_sizing.public_rows = 102;
    std::vector<double> sweep_epsilons = {10, 25, 50, 100, 500, 1000};
    double sweep_fpr = 0.05;
    std::size_t sweep_seeds = 20;
    double sweep_power_max = 0.3;
    double sweep_accuracy_min = 0.8;
    sweep->add_option("--seed", seed, "Master seed");
    sweep->add_option("--epsilon-list", sweep_epsilons, "Comma-separated epsilon grid")
        ->delimiter(',');
    sweep->add_option("--fpr", sweep_fpr, "False-positive budget for the attack");
    sweep->add_option("--seed-count", sweep_seeds, "Repetitions per epsilon");
    sweep->add_option("--power-max", sweep_power_max, "Feasibility cap on attack power");
    sweep->add_option("--accuracy-min", sweep_accuracy_min, "Feasibility floor on accuracy");
    sweep_sizing.attach(sweep);
    sweep->add_option("--out", out_dir, "Output directory")->required();

    // link
    auto* link = app.add_subcommand("link", "Query an aggregate series and join a public one");
    SizingFlags link_sizing;
    double link_epsilon = 100.0;
    std::size_t link_k_min = 2;
    std::size_t link_k_max = 2;
    std::size_t link_min_group = 3;
    std::size_t link_weeks = 36;
    std::string link_start = "2013-W01";
    std::string link_transport = "inproc";
    std::string link_attribute = "sales";
    std::string link_aggregate = "sum";
    long long link_cluster = -1;
    std::string link_public_csv;
    std::string link_bucket_col = "week";
    std::string link_value_col = "price_per_unit";
    link->add_option("--seed", seed, "Master seed");
    link->add_option("--epsilon", link_epsilon, "Total privacy budget");
    link->add_option("--k-min", link_k_min, "Smallest k to consider");
    link->add_option("--k-max", link_k_max, "Largest k to consider");
    link->add_option("--min-group-size", link_min_group, "Aggregate suppression threshold");
    link->add_option("--weeks", link_weeks, "Weeks of per-record sales history");
    link->add_option("--start-week", link_start, "First ISO week");
    link->add_option("--transport", link_transport, "inproc or socket")
        ->check(CLI::IsMember({"inproc", "socket"}));
    link->add_option("--attribute", link_attribute, "Per-record attribute to aggregate");
    link->add_option("--aggregate", link_aggregate, "sum, mean, or count")
        ->check(CLI::IsMember({"sum", "mean", "count"}));
    link->add_option("--cluster-index", link_cluster,
                     "Cluster to query (-1 picks the largest)");
    link->add_option("--public-csv", link_public_csv, "Public series CSV to join against")
        ->required();
    link->add_option("--bucket-column", link_bucket_col, "Bucket column in the public CSV");
    link->add_option("--value-column", link_value_col, "Value column in the public CSV");
    link_sizing.attach(link);
    link->add_option("--out", out_dir, "Output directory")->required();

    // eval-power
    auto* eval_power = app.add_subcommand("eval-power", "Score the distance attack once");
    SizingFlags power_sizing;
    double power_epsilon = 100.0;
    double power_fpr = 0.05;
    eval_power->add_option("--seed", seed, "Master seed");
    eval_power->add_option("--epsilon", power_epsilon, "Total privacy budget");
    eval_power->add_option("--fpr", power_fpr, "False-positive budget for the attack");
    power_sizing.attach(eval_power);
    eval_power->add_option("--out", out_dir, "Output directory")->required();

    // replay
    auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
    std::string replay_manifest;
    replay->add_option("--manifest", replay_manifest, "Path to manifest.json")->required();
    replay->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (gen->parsed()) {
        json config{{"seed", seed},
                    {"weeks", gen_weeks},
                    {"start_week", gen_start},
                    {"min_group_size", gen_min_group}};
        gen_sizing.fill(config);
        return run("gen", config, out_dir);
    }
    if (simulate->parsed()) {
        json config{{"seed", seed},
                    {"epsilon", sim_epsilon},
                    {"k_min", sim_k_min},
                    {"k_max", sim_k_max},
                    {"min_group_size", sim_min_group},
                    {"transport", sim_transport}};
        sim_sizing.fill(config);
        return run("simulate", config, out_dir);
    }
    if (sweep->parsed()) {
        json config{{"seed", seed},
                    {"epsilons", sweep_epsilons},
                    {"fpr", sweep_fpr},
                    {"seed_count", sweep_seeds},
                    {"power_max", sweep_power_max},
                    {"accuracy_min", sweep_accuracy_min}};
        sweep_sizing.fill(config);
        return run("sweep", config, out_dir);
    }
    if (link->parsed()) {
        json config{{"seed", seed},
                    {"epsilon", link_epsilon},
                    {"k_min", link_k_min},
                    {"k_max", link_k_max},
                    {"min_group_size", link_min_group},
                    {"weeks", link_weeks},
                    {"start_week", link_start},
                    {"transport", link_transport},
                    {"attribute", link_attribute},
                    {"aggregate", link_aggregate},
                    {"cluster_index", link_cluster},
                    {"public_csv", link_public_csv},
                    {"bucket_column", link_bucket_col},
                    {"value_column", link_value_col}};
        link_sizing.fill(config);
        return run("link", config, out_dir);
    }
    if (eval_power->parsed()) {
        json config{{"seed", seed}, {"epsilon", power_epsilon}, {"fpr", power_fpr}};
        power_sizing.fill(config);
        return run("eval-power", config, out_dir);
    }
    if (replay->parsed()) {
        char* summary = nullptr;
        farmlink_status status =
            farmlink_replay(replay_manifest.c_str(), out_dir.c_str(), &summary);
        if (status != FARMLINK_OK) {
            std::fprintf(stderr, "error: %s\n", farmlink_last_error());
            return (status == FARMLINK_ERR_INVALID_ARGUMENT || status == FARMLINK_ERR_PARSE)
                       ? 1
                       : 2;
        }
        std::fputs(summary, stdout);
        farmlink_string_free(summary);
        return 0;
    }
    std::fprintf(stderr, "error: no subcommand\n");
    return 1;
}
