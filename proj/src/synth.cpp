#include "farmlink/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "farmlink/rng.hpp"

namespace farmlink {

namespace {

constexpr double kTau = 6.283185307179586476925287;

std::string hex_token(Rng& rng) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(rng.next_u64()));
    return buf;
}

} // namespace

std::vector<std::string> mint_pseudonyms(Rng& rng, std::size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < count; ++i) {
        std::string token = hex_token(rng);
        while (!seen.insert(token).second) token = hex_token(rng);
        out.push_back(std::move(token));
    }
    return out;
}

FeatureTable generate_synthetic_market(const Schema& schema, std::size_t n,
                                       const std::vector<ClusterSpec>& clusters,
                                       std::uint64_t seed) {
    require(n >= 1, ErrorCode::invalid_argument, "need at least one row");
    require(!clusters.empty(), ErrorCode::invalid_argument, "empty cluster spec");
    double total_weight = 0.0;
    for (const ClusterSpec& c : clusters) {
        require(c.centroid.size() == schema.feature_count(), ErrorCode::dimension_mismatch,
                "centroid size does not match schema feature count");
        require(c.spread.size() == schema.feature_count(), ErrorCode::dimension_mismatch,
                "spread size does not match schema feature count");
        require(c.weight > 0.0, ErrorCode::invalid_argument, "cluster weight must be positive");
        for (double s : c.spread) {
            require(s >= 0.0, ErrorCode::invalid_argument, "cluster spread must be >= 0");
        }
        total_weight += c.weight;
    }

    Rng base(seed);
    Rng pick = base.derive("component");
    Rng noise = base.derive("noise");
    Rng ids = base.derive("ids");

    const auto& kinds = schema.feature_kinds();
    Matrix values(n, schema.feature_count());
    std::vector<std::string> pseudonyms = mint_pseudonyms(ids, n);

    for (std::size_t i = 0; i < n; ++i) {
        double u = pick.next_unit() * total_weight;
        std::size_t which = 0;
        for (; which + 1 < clusters.size(); ++which) {
            u -= clusters[which].weight;
            if (u < 0.0) break;
        }
        const ClusterSpec& c = clusters[which];
        for (std::size_t j = 0; j < schema.feature_count(); ++j) {
            if (kinds[j] == ColumnKind::binary_indicator) {
                const double p = std::clamp(c.centroid[j], 0.0, 1.0);
                values(i, j) = noise.next_bernoulli(p) ? 1.0 : 0.0;
            } else {
                values(i, j) = c.centroid[j] + c.spread[j] * noise.next_gaussian();
            }
        }
    }
    return FeatureTable(schema, std::move(pseudonyms), std::move(values));
}

std::map<std::string, TimeSeries> generate_weekly_sales(const FeatureTable& table,
                                                        const IsoWeek& start,
                                                        std::size_t weeks,
                                                        std::uint64_t seed) {
    require(weeks >= 1, ErrorCode::invalid_argument, "need at least one week");
    const std::size_t sales_col = table.schema().feature_index("Sales");
    Rng base(seed);
    std::map<std::string, TimeSeries> out;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        const std::string& id = table.pseudonyms()[i];
        Rng rec = base.derive(id);
        const double level = sales_col != Schema::npos
                                 ? std::max(10.0, table.values()(i, sales_col))
                                 : 100.0 + 10.0 * static_cast<double>(i % 7);
        const double phase = rec.next_unit() * kTau;
        std::vector<TimePoint> points;
        points.reserve(weeks);
        IsoWeek w = start;
        for (std::size_t t = 0; t < weeks; ++t) {
            const double season = 1.0 + 0.25 * std::sin(kTau * static_cast<double>(t) / 52.0 + phase);
            const double value = std::max(0.0, level * season + 0.05 * level * rec.next_gaussian());
            points.push_back({to_string(w), value});
            w = next_week(w);
        }
        out.emplace(id, TimeSeries(std::move(points)));
    }
    return out;
}

TimeSeries generate_price_series(const IsoWeek& start, std::size_t weeks, std::uint64_t seed) {
    require(weeks >= 1, ErrorCode::invalid_argument, "need at least one week");
    Rng rng = Rng(seed).derive("price");
    std::vector<TimePoint> points;
    points.reserve(weeks);
    IsoWeek w = start;
    for (std::size_t t = 0; t < weeks; ++t) {
        const double value =
            2.5 + 0.6 * std::sin(kTau * (static_cast<double>(t) - 8.0) / 52.0) +
            0.05 * rng.next_gaussian();
        points.push_back({to_string(w), value});
        w = next_week(w);
    }
    return TimeSeries(std::move(points));
}

TimeSeries generate_insecurity_series(int start_year, int start_month, std::size_t months,
                                      std::uint64_t seed) {
    require(months >= 1, ErrorCode::invalid_argument, "need at least one month");
    require(start_month >= 1 && start_month <= 12, ErrorCode::invalid_argument,
            "start month out of range");
    Rng rng = Rng(seed).derive("insecurity");
    std::vector<TimePoint> points;
    points.reserve(months);
    int y = start_year, m = start_month;
    for (std::size_t t = 0; t < months; ++t) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02d", y, m);
        const double value =
            11.0 + 1.5 * std::sin(kTau * static_cast<double>(m) / 12.0) +
            0.2 * rng.next_gaussian();
        points.push_back({buf, value});
        if (++m > 12) {
            m = 1;
            ++y;
        }
    }
    return TimeSeries(std::move(points));
}

} // namespace farmlink
