#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "farmlink/rng.hpp"
#include "farmlink/table.hpp"
#include "farmlink/timeseries.hpp"

namespace farmlink {

/// `count` distinct 16-hex-digit opaque tokens drawn from `rng`.
std::vector<std::string> mint_pseudonyms(Rng& rng, std::size_t count);

/// One mixture component. `centroid` has one entry per feature column: the
/// Gaussian mean for continuous columns, the Bernoulli probability (clamped
/// to [0,1]) for indicator columns. `spread` gives the per-column standard
/// deviation for continuous columns; indicator entries are ignored.
struct ClusterSpec {
    std::vector<double> centroid;
    std::vector<double> spread;
    double weight = 1.0;
};

/// Draws n rows from the mixture, with fresh opaque pseudonyms. Byte-identical
/// output for a fixed seed.
FeatureTable generate_synthetic_market(const Schema& schema, std::size_t n,
                                       const std::vector<ClusterSpec>& clusters,
                                       std::uint64_t seed);

/// Synthetic per-record weekly sales series for a generated market table.
/// Each record gets `weeks` consecutive buckets starting at `start`; levels
/// track the record's Sales attribute with a seasonal swing plus noise.
std::map<std::string, TimeSeries> generate_weekly_sales(const FeatureTable& table,
                                                        const IsoWeek& start,
                                                        std::size_t weeks,
                                                        std::uint64_t seed);

/// Public single-product weekly price series (seasonal plus noise).
TimeSeries generate_price_series(const IsoWeek& start, std::size_t weeks, std::uint64_t seed);

/// Public monthly food-insecurity series (population percentage).
TimeSeries generate_insecurity_series(int start_year, int start_month, std::size_t months,
                                      std::uint64_t seed);

} // namespace farmlink
