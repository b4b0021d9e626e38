#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "farmlink/error.hpp"

namespace farmlink {

/// ISO-8601 week ("2018-W14"). Week numbering follows the Thursday rule:
/// a week belongs to the year (and, for monthly resampling, the month) that
/// contains its Thursday.
struct IsoWeek {
    int year = 0;
    int week = 0;

    auto operator<=>(const IsoWeek&) const = default;
};

IsoWeek parse_iso_week(const std::string& bucket);
std::string to_string(const IsoWeek& w);
int weeks_in_iso_year(int year);
IsoWeek next_week(const IsoWeek& w);
/// Month bucket ("2018-04") of the week's Thursday.
std::string month_of(const IsoWeek& w);

enum class BucketKind { weekly, monthly };
/// Classifies and validates a bucket string; throws on anything else.
BucketKind classify_bucket(const std::string& bucket);

struct TimePoint {
    std::string bucket;
    double value = 0.0;
};

/// Sorted series over uniform (all-weekly or all-monthly) buckets. Duplicate
/// buckets are an error, never a silent merge.
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<TimePoint> points);

    const std::vector<TimePoint>& points() const noexcept { return points_; }
    bool empty() const noexcept { return points_.empty(); }
    std::size_t size() const noexcept { return points_.size(); }

    /// Granularity of the buckets; not meaningful for an empty series.
    BucketKind kind() const noexcept { return kind_; }

private:
    std::vector<TimePoint> points_;
    BucketKind kind_ = BucketKind::weekly;
};

TimeSeries load_timeseries_csv(const std::filesystem::path& path,
                               const std::string& bucket_column,
                               const std::string& value_column);
void write_timeseries_csv(const TimeSeries& series, const std::filesystem::path& path,
                          const std::string& bucket_column, const std::string& value_column);

struct AlignedPoint {
    std::string bucket;
    double value_a = 0.0;
    double value_b = 0.0;
};

/// Inner join on exactly-equal buckets, ascending. No interpolation.
std::vector<AlignedPoint> align(const TimeSeries& a, const TimeSeries& b);

/// Sample Pearson correlation of the joined columns. Needs at least three
/// points and nonzero variance on both sides.
double pearson(const std::vector<AlignedPoint>& joined);

/// Repeats each monthly value across the ISO weeks whose Thursday falls in
/// that month. Callers flag the resampling in their output metadata.
TimeSeries expand_monthly_to_weekly(const TimeSeries& monthly);

} // namespace farmlink
