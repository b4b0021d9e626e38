#include "farmlink/pipeline.hpp"

#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "farmlink/error.hpp"
#include "farmlink/market_node.hpp"
#include "farmlink/num_format.hpp"
#include "farmlink/privacy_eval.hpp"
#include "farmlink/researcher.hpp"
#include "farmlink/rng.hpp"
#include "farmlink/synth.hpp"

namespace farmlink {

namespace {

using nlohmann::json;

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorCode::io, "cannot open '" + path.string() + "'");
    out << content;
    require(out.good(), ErrorCode::io, "write failed for '" + path.string() + "'");
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

/// Strict config reader: typed lookups with defaults, and a final check that
/// every supplied key was consumed, so typos fail loudly.
class ConfigReader {
public:
    explicit ConfigReader(const std::string& config_json) {
        try {
            config_ = json::parse(config_json);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::parse, std::string("malformed config: ") + e.what());
        }
        require(config_.is_object(), ErrorCode::parse, "config must be a JSON object");
    }

    std::uint64_t seed(const char* key, std::uint64_t fallback) {
        const json* v = take(key);
        if (v == nullptr) return fallback;
        require(v->is_number_unsigned() || v->is_number_integer(), ErrorCode::parse,
                std::string("config key '") + key + "' must be an integer");
        return v->get<std::uint64_t>();
    }

    std::size_t count(const char* key, std::size_t fallback) {
        const json* v = take(key);
        if (v == nullptr) return fallback;
        require(v->is_number_unsigned() || (v->is_number_integer() && v->get<long long>() >= 0),
                ErrorCode::parse,
                std::string("config key '") + key + "' must be a non-negative integer");
        return v->get<std::size_t>();
    }

    long long integer(const char* key, long long fallback) {
        const json* v = take(key);
        if (v == nullptr) return fallback;
        require(v->is_number_integer() || v->is_number_unsigned(), ErrorCode::parse,
                std::string("config key '") + key + "' must be an integer");
        return v->get<long long>();
    }

    double real(const char* key, double fallback) {
        const json* v = take(key);
        if (v == nullptr) return fallback;
        require(v->is_number(), ErrorCode::parse,
                std::string("config key '") + key + "' must be a number");
        return v->get<double>();
    }

    std::string text(const char* key, const std::string& fallback) {
        const json* v = take(key);
        if (v == nullptr) return fallback;
        require(v->is_string(), ErrorCode::parse,
                std::string("config key '") + key + "' must be a string");
        return v->get<std::string>();
    }

    std::vector<double> reals(const char* key, std::vector<double> fallback) {
        const json* v = take(key);
        if (v == nullptr) return fallback;
        require(v->is_array() && !v->empty(), ErrorCode::parse,
                std::string("config key '") + key + "' must be a non-empty array");
        std::vector<double> out;
        for (const auto& e : *v) {
            require(e.is_number(), ErrorCode::parse,
                    std::string("config key '") + key + "' must hold numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = config_.begin(); it != config_.end(); ++it) {
            require(consumed_.count(it.key()) > 0, ErrorCode::invalid_argument,
                    "unknown config key '" + it.key() + "'");
        }
    }

private:
    const json* take(const char* key) {
        consumed_.insert(key);
        auto it = config_.find(key);
        return it == config_.end() ? nullptr : &*it;
    }

    json config_;
    std::set<std::string> consumed_;
};

json schema_to_json(const Schema& schema) {
    json cols = json::array();
    for (const Column& c : schema.columns()) {
        const char* kind = "continuous";
        if (c.kind == ColumnKind::identifier) kind = "identifier";
        if (c.kind == ColumnKind::binary_indicator) kind = "binary-indicator";
        cols.push_back({{"name", c.name}, {"kind", kind}});
    }
    return json{{"columns", cols}};
}

std::string market_id_of(std::size_t index) { return "market-" + std::to_string(index + 1); }

/// Shared synthetic population: one public table plus per-market tables (and
/// optional per-record weekly sales series), all from the standard mixture.
struct World {
    SweepDataSpec data;
    FeatureTable public_table;
    std::vector<FeatureTable> market_tables;
    std::vector<std::map<std::string, TimeSeries>> sales; // by original pseudonym
};

World generate_world(const SweepDataSpec& data, std::uint64_t seed, std::size_t weeks,
                     const IsoWeek& start) {
    Rng base(seed);
    World world{data,
                generate_synthetic_market(data.schema, data.public_rows, data.clusters,
                                          base.derive("public").seed()),
                {},
                {}};
    Rng market_seeds = base.derive("markets");
    Rng series_seeds = base.derive("series");
    for (std::size_t m = 0; m < data.markets; ++m) {
        world.market_tables.push_back(generate_synthetic_market(
            data.schema, data.market_rows, data.clusters, market_seeds.derive(m).seed()));
        if (weeks > 0) {
            world.sales.push_back(generate_weekly_sales(world.market_tables.back(), start,
                                                        weeks, series_seeds.derive(m).seed()));
        }
    }
    return world;
}

SweepDataSpec sized_data(ConfigReader& config) {
    SweepDataSpec data = standard_sweep_data();
    data.markets = config.count("markets", data.markets);
    data.market_rows = config.count("market_rows", data.market_rows);
    data.public_rows = config.count("public_rows", data.public_rows);
    data.rank = config.count("rank", data.rank);
    require(data.markets >= 1, ErrorCode::invalid_argument, "markets must be >= 1");
    require(data.market_rows >= 1, ErrorCode::invalid_argument, "market_rows must be >= 1");
    require(data.public_rows >= 2, ErrorCode::invalid_argument, "public_rows must be >= 2");
    return data;
}

json resolved_data_config(const SweepDataSpec& data) {
    return json{{"markets", data.markets},
                {"market_rows", data.market_rows},
                {"public_rows", data.public_rows},
                {"rank", data.rank}};
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const json& resolved_config) {
    json manifest{{"command", command}, {"config", resolved_config}, {"version", kVersion}};
    write_text(out_dir / "manifest.json", pretty(manifest));
}

/// Hosts the market side of a session on live transports. Construction picks
/// the medium; join() tears it down. The researcher talks to links().
class MarketHost {
public:
    MarketHost(std::vector<MarketNode>& nodes, const std::string& transport) {
        if (transport == "inproc") {
            for (MarketNode& node : nodes) {
                auto [mine, theirs] = make_inproc_pair();
                researcher_side_.push_back(std::move(mine));
                threads_.emplace_back(
                    [&node, t = std::move(theirs)]() mutable { node.serve(*t); });
            }
        } else if (transport == "socket") {
            for (MarketNode& node : nodes) {
                auto listener = std::make_unique<TcpListener>();
                TcpListener* raw = listener.get();
                threads_.emplace_back([&node, raw] {
                    auto t = raw->accept(std::chrono::milliseconds(10000));
                    if (t) node.serve(*t);
                });
                researcher_side_.push_back(connect_tcp("127.0.0.1", raw->port(),
                                                       std::chrono::milliseconds(5000)));
                listeners_.push_back(std::move(listener));
            }
        } else {
            throw Error(ErrorCode::invalid_argument,
                        "transport must be 'inproc' or 'socket'");
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            links_.push_back({nodes[i].config().market_id, researcher_side_[i].get()});
        }
    }

    ~MarketHost() { join(); }

    const std::vector<MarketLink>& links() const { return links_; }

    void join() {
        for (auto& t : researcher_side_) t->close();
        for (auto& th : threads_) {
            if (th.joinable()) th.join();
        }
        threads_.clear();
    }

private:
    std::vector<std::unique_ptr<Transport>> researcher_side_;
    std::vector<std::unique_ptr<TcpListener>> listeners_;
    std::vector<std::thread> threads_;
    std::vector<MarketLink> links_;
};

std::vector<MarketNode> build_nodes(const World& world, std::size_t min_group_size,
                                    std::uint64_t seed, bool with_series) {
    std::vector<MarketNode> nodes;
    nodes.reserve(world.market_tables.size());
    Rng node_seeds = Rng(seed).derive("nodes");
    for (std::size_t m = 0; m < world.market_tables.size(); ++m) {
        std::map<std::string, std::map<std::string, TimeSeries>> series;
        if (with_series) series["sales"] = world.sales[m];
        nodes.emplace_back(MarketConfig{market_id_of(m), min_group_size,
                                        node_seeds.derive(m).seed()},
                           world.market_tables[m], std::move(series));
    }
    return nodes;
}

json selection_to_json(const SessionResult& session) {
    json elbow;
    if (!session.selection.ks.empty()) {
        json wcss = json::array();
        for (double v : session.selection.wcss_values) wcss.push_back(v);
        elbow = json{{"ks", session.selection.ks}, {"wcss", wcss}};
    }
    json cluster_sizes = json::array();
    for (const auto& members : session.selection.clusters) {
        cluster_sizes.push_back(members.size());
    }
    json j{{"chosen_k", session.selection.chosen_k},
           {"weak_elbow", session.selection.weak_elbow},
           {"wcss", session.selection.wcss},
           {"cluster_sizes", cluster_sizes},
           {"pooled_rows", session.pooled_members.size()},
           {"missing_markets", session.missing_markets},
           {"excluded_markets", session.excluded_markets}};
    if (!elbow.is_null()) j["elbow"] = elbow;
    return j;
}

void write_clusters_csv(const SessionResult& session, const std::filesystem::path& path) {
    std::string csv = "cluster,market_id,pseudonym\n";
    for (std::size_t c = 0; c < session.selection.clusters.size(); ++c) {
        for (const ClusterMember& member : session.selection.clusters[c]) {
            csv += std::to_string(c) + ',' + member.market_id + ',' + member.pseudonym + '\n';
        }
    }
    write_text(path, csv);
}

std::string run_gen(ConfigReader& config, const std::filesystem::path& out_dir) {
    const std::uint64_t seed = config.seed("seed", 1);
    const std::size_t weeks = config.count("weeks", 36);
    const std::size_t min_group_size = config.count("min_group_size", 3);
    const std::string start_week = config.text("start_week", "2013-W01");
    SweepDataSpec data = sized_data(config);
    config.finish();
    require(weeks >= 1, ErrorCode::invalid_argument, "weeks must be >= 1");
    const IsoWeek start = parse_iso_week(start_week);

    World world = generate_world(data, seed, weeks, start);

    write_text(out_dir / "schema.json", pretty(schema_to_json(data.schema)));
    write_csv(world.public_table, out_dir / "public.csv");

    json markets = json::array();
    for (std::size_t m = 0; m < data.markets; ++m) {
        const std::string table_file = "market_" + std::to_string(m + 1) + ".csv";
        const std::string series_file = "market_" + std::to_string(m + 1) + "_series.csv";
        write_csv(world.market_tables[m], out_dir / table_file);

        std::string csv = "pseudonym,week,sales\n";
        for (const std::string& id : world.market_tables[m].pseudonyms()) {
            for (const TimePoint& p : world.sales[m].at(id).points()) {
                csv += id + ',' + p.bucket + ',' + format_double(p.value) + '\n';
            }
        }
        write_text(out_dir / series_file, csv);
        markets.push_back({{"market_id", market_id_of(m)},
                           {"rows", world.market_tables[m].rows()},
                           {"table", table_file},
                           {"series", series_file},
                           {"min_group_size", min_group_size}});
    }

    Rng base(seed);
    TimeSeries price = generate_price_series(start, weeks, base.derive("price").seed());
    {
        std::string csv = "week,product,price_per_unit\n";
        for (const TimePoint& p : price.points()) {
            csv += p.bucket + ",potatoes," + format_double(p.value) + '\n';
        }
        write_text(out_dir / "pricing.csv", csv);
    }
    {
        std::vector<std::string> months;
        IsoWeek w = start;
        for (std::size_t i = 0; i < weeks; ++i, w = next_week(w)) {
            std::string m = month_of(w);
            if (months.empty() || months.back() != m) months.push_back(m);
        }
        int year = std::stoi(months.front().substr(0, 4));
        int month = std::stoi(months.front().substr(5, 2));
        TimeSeries insecurity = generate_insecurity_series(year, month, months.size(),
                                                           base.derive("insecurity").seed());
        std::string csv = "month,level,population_pct\n";
        for (const TimePoint& p : insecurity.points()) {
            csv += p.bucket + ",overall," + format_double(p.value) + '\n';
        }
        write_text(out_dir / "insecurity.csv", csv);
    }

    json summary{{"public", "public.csv"},
                 {"public_rows", data.public_rows},
                 {"markets", markets},
                 {"pricing", "pricing.csv"},
                 {"insecurity", "insecurity.csv"},
                 {"weeks", weeks},
                 {"start_week", start_week}};
    std::string summary_text = pretty(summary);
    write_text(out_dir / "markets.json", summary_text);

    json resolved{{"seed", seed},
                  {"weeks", weeks},
                  {"start_week", start_week},
                  {"min_group_size", min_group_size}};
    resolved.update(resolved_data_config(data));
    write_manifest(out_dir, "gen", resolved);
    return summary_text;
}

std::string run_simulate(ConfigReader& config, const std::filesystem::path& out_dir) {
    const std::uint64_t seed = config.seed("seed", 1);
    const double epsilon = config.real("epsilon", 100.0);
    const std::size_t k_min = config.count("k_min", 2);
    const std::size_t k_max = config.count("k_max", 2);
    const std::size_t min_group_size = config.count("min_group_size", 3);
    const std::string transport = config.text("transport", "inproc");
    SweepDataSpec data = sized_data(config);
    config.finish();

    World world = generate_world(data, seed, 0, IsoWeek{});
    ShareBundle bundle = fit_share_bundle(world.public_table, data.rank);
    std::vector<MarketNode> nodes = build_nodes(world, min_group_size, seed, false);

    ResearcherConfig rconfig;
    rconfig.epsilon_total = epsilon;
    rconfig.k_min = k_min;
    rconfig.k_max = k_max;
    rconfig.seed = Rng(seed).derive("researcher").seed();

    SessionResult session;
    {
        MarketHost host(nodes, transport);
        session = researcher_session(bundle, rconfig, host.links());
        host.join();
    }

    write_clusters_csv(session, out_dir / "clusters.csv");
    json summary = selection_to_json(session);
    summary["transport"] = transport;
    summary["epsilon"] = epsilon;
    std::string summary_text = pretty(summary);
    write_text(out_dir / "summary.json", summary_text);

    json resolved{{"seed", seed},        {"epsilon", epsilon},
                  {"k_min", k_min},      {"k_max", k_max},
                  {"min_group_size", min_group_size}, {"transport", transport}};
    resolved.update(resolved_data_config(data));
    write_manifest(out_dir, "simulate", resolved);
    return summary_text;
}

std::string run_sweep(ConfigReader& config, const std::filesystem::path& out_dir) {
    SweepConfig sweep;
    sweep.master_seed = config.seed("seed", 1);
    sweep.epsilons = config.reals("epsilons", {10.0, 25.0, 50.0, 100.0, 500.0, 1000.0});
    sweep.fpr = config.real("fpr", sweep.fpr);
    sweep.seed_count = config.count("seed_count", sweep.seed_count);
    sweep.power_max = config.real("power_max", sweep.power_max);
    sweep.accuracy_min = config.real("accuracy_min", sweep.accuracy_min);
    SweepDataSpec data = sized_data(config);
    config.finish();

    SweepResult result = epsilon_sweep(sweep, data);
    write_sweep_csv(result, out_dir / "sweep.csv");

    json by_kind;
    for (const auto& [kind, pick] : result.optimal_epsilon_by_kind) {
        json entry{{"feasible", pick.feasible}};
        if (pick.feasible) {
            entry["epsilon"] = pick.epsilon;
        } else {
            entry["frontier_epsilons"] = pick.frontier_epsilons;
        }
        by_kind[classifier_kind_name(kind)] = entry;
    }
    json optimal{{"power_max", sweep.power_max},
                 {"accuracy_min", sweep.accuracy_min},
                 {"by_kind", by_kind}};
    std::string optimal_text = pretty(optimal);
    write_text(out_dir / "optimal.json", optimal_text);

    json resolved{{"seed", sweep.master_seed}, {"epsilons", sweep.epsilons},
                  {"fpr", sweep.fpr},          {"seed_count", sweep.seed_count},
                  {"power_max", sweep.power_max}, {"accuracy_min", sweep.accuracy_min}};
    resolved.update(resolved_data_config(data));
    write_manifest(out_dir, "sweep", resolved);
    return optimal_text;
}

std::string run_link(ConfigReader& config, const std::filesystem::path& out_dir) {
    const std::uint64_t seed = config.seed("seed", 1);
    const double epsilon = config.real("epsilon", 100.0);
    const std::size_t k_min = config.count("k_min", 2);
    const std::size_t k_max = config.count("k_max", 2);
    const std::size_t min_group_size = config.count("min_group_size", 3);
    const std::size_t weeks = config.count("weeks", 36);
    const std::string start_week = config.text("start_week", "2013-W01");
    const std::string transport = config.text("transport", "inproc");
    const std::string attribute = config.text("attribute", "sales");
    const std::string aggregate_name = config.text("aggregate", "sum");
    const long long cluster_index = config.integer("cluster_index", -1);
    const std::string public_csv = config.text("public_csv", "");
    const std::string bucket_column = config.text("bucket_column", "week");
    const std::string value_column = config.text("value_column", "price_per_unit");
    SweepDataSpec data = sized_data(config);
    config.finish();

    require(!public_csv.empty(), ErrorCode::invalid_argument, "public_csv is required");
    require(std::filesystem::exists(public_csv), ErrorCode::invalid_argument,
            "public_csv '" + public_csv + "' does not exist");
    require(weeks >= 1, ErrorCode::invalid_argument, "weeks must be >= 1");
    const AggregateKind aggregate = parse_aggregate_kind(aggregate_name);
    const IsoWeek start = parse_iso_week(start_week);
    IsoWeek end = start;
    for (std::size_t i = 1; i < weeks; ++i) end = next_week(end);

    TimeSeries public_series = load_timeseries_csv(public_csv, bucket_column, value_column);

    World world = generate_world(data, seed, weeks, start);
    ShareBundle bundle = fit_share_bundle(world.public_table, data.rank);
    std::vector<MarketNode> nodes = build_nodes(world, min_group_size, seed, true);

    ResearcherConfig rconfig;
    rconfig.epsilon_total = epsilon;
    rconfig.k_min = k_min;
    rconfig.k_max = k_max;
    rconfig.seed = Rng(seed).derive("researcher").seed();

    SessionResult session;
    GroupQueryResult query;
    std::size_t chosen_cluster = 0;
    {
        MarketHost host(nodes, transport);
        session = researcher_session(bundle, rconfig, host.links());

        if (cluster_index >= 0) {
            require(std::size_t(cluster_index) < session.selection.clusters.size(),
                    ErrorCode::invalid_argument, "cluster_index out of range");
            chosen_cluster = std::size_t(cluster_index);
        } else {
            for (std::size_t c = 1; c < session.selection.clusters.size(); ++c) {
                if (session.selection.clusters[c].size() >
                    session.selection.clusters[chosen_cluster].size()) {
                    chosen_cluster = c;
                }
            }
        }
        query = query_aggregates(session.selection.clusters[chosen_cluster], attribute,
                                 {to_string(start), to_string(end)}, aggregate, host.links(),
                                 std::chrono::milliseconds(10000));
        host.join();
    }

    bool resampled = false;
    TimeSeries public_aligned = public_series;
    if (!query.series.empty() && !public_series.empty() &&
        public_series.kind() == BucketKind::monthly &&
        query.series.kind() == BucketKind::weekly) {
        public_aligned = expand_monthly_to_weekly(public_series);
        resampled = true;
    }

    std::vector<AlignedPoint> joined = align(query.series, public_aligned);
    double r = pearson(joined);

    std::string csv = "bucket,series_a,series_b\n";
    for (const AlignedPoint& p : joined) {
        csv += p.bucket + ',' + format_double(p.value_a) + ',' + format_double(p.value_b) + '\n';
    }
    write_text(out_dir / "linked.csv", csv);

    json summary{{"r", r},
                 {"n", joined.size()},
                 {"resampling_flag", resampled},
                 {"attribute", attribute},
                 {"aggregate", aggregate_name},
                 {"cluster_index", chosen_cluster},
                 {"cluster_size", session.selection.clusters[chosen_cluster].size()},
                 {"refused_markets", query.refused_markets},
                 {"missing_markets", query.missing_markets}};
    std::string summary_text = pretty(summary);
    write_text(out_dir / "link_summary.json", summary_text);

    json resolved{{"seed", seed},
                  {"epsilon", epsilon},
                  {"k_min", k_min},
                  {"k_max", k_max},
                  {"min_group_size", min_group_size},
                  {"weeks", weeks},
                  {"start_week", start_week},
                  {"transport", transport},
                  {"attribute", attribute},
                  {"aggregate", aggregate_name},
                  {"cluster_index", cluster_index},
                  {"public_csv", public_csv},
                  {"bucket_column", bucket_column},
                  {"value_column", value_column}};
    resolved.update(resolved_data_config(data));
    write_manifest(out_dir, "link", resolved);
    return summary_text;
}

std::string run_eval_power(ConfigReader& config, const std::filesystem::path& out_dir) {
    const std::uint64_t seed = config.seed("seed", 1);
    const double epsilon = config.real("epsilon", 100.0);
    const double fpr = config.real("fpr", 0.05);
    SweepDataSpec data = sized_data(config);
    config.finish();
    require(epsilon > 0.0, ErrorCode::invalid_argument, "epsilon must be positive");

    Rng base(seed);
    World world = generate_world(data, seed, 0, IsoWeek{});
    ShareBundle bundle = fit_share_bundle(world.public_table, data.rank);
    ProjectedMatrix control = project_with_bundle(bundle, world.public_table);

    ProjectedMatrix pooled;
    std::size_t total = 0;
    for (const FeatureTable& market : world.market_tables) total += market.rows();
    pooled.scores = Matrix(total, data.rank);
    std::size_t at = 0;
    for (const FeatureTable& market : world.market_tables) {
        ProjectedMatrix proj = project_with_bundle(bundle, market);
        for (std::size_t i = 0; i < proj.scores.rows(); ++i, ++at) {
            pooled.pseudonyms.push_back(proj.pseudonyms[i]);
            for (std::size_t j = 0; j < data.rank; ++j) {
                pooled.scores(at, j) = proj.scores(i, j);
            }
        }
    }

    PrivacyBudget budget = allocate_budget(epsilon, bundle.sensitivity);
    Rng noise = base.derive("noise");
    NoisyProjection noisy = perturb(pooled, bundle.sensitivity, budget, noise);
    PowerResult power = membership_power(noisy, pooled, control, fpr);

    json summary{{"epsilon", epsilon},
                 {"fpr_target", power.fpr_target},
                 {"threshold", power.threshold},
                 {"power", power.power},
                 {"realized_fpr", power.realized_fpr},
                 {"case_count", power.case_distances.size()},
                 {"control_count", power.control_distances.size()}};
    std::string summary_text = pretty(summary);
    write_text(out_dir / "power.json", summary_text);

    json resolved{{"seed", seed}, {"epsilon", epsilon}, {"fpr", fpr}};
    resolved.update(resolved_data_config(data));
    write_manifest(out_dir, "eval-power", resolved);
    return summary_text;
}

} // namespace

std::string run_command(const std::string& command, const std::string& config_json,
                        const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    ConfigReader config(config_json);
    if (command == "gen") return run_gen(config, out_dir);
    if (command == "simulate") return run_simulate(config, out_dir);
    if (command == "sweep") return run_sweep(config, out_dir);
    if (command == "link") return run_link(config, out_dir);
    if (command == "eval-power") return run_eval_power(config, out_dir);
    throw Error(ErrorCode::invalid_argument, "unknown command '" + command + "'");
}

std::string replay(const std::filesystem::path& manifest_path,
                   const std::filesystem::path& out_dir) {
    std::ifstream in(manifest_path, std::ios::binary);
    require(in.good(), ErrorCode::io, "cannot open '" + manifest_path.string() + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json manifest;
    try {
        manifest = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("malformed manifest: ") + e.what());
    }
    require(manifest.is_object() && manifest.contains("command") &&
                manifest["command"].is_string() && manifest.contains("config") &&
                manifest["config"].is_object(),
            ErrorCode::parse, "manifest must carry a command and a config object");
    return run_command(manifest["command"].get<std::string>(), manifest["config"].dump(),
                       out_dir);
}

} // namespace farmlink
