#include "farmlink/timeseries.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "farmlink/num_format.hpp"

namespace farmlink {

namespace {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (static_cast<unsigned>(m) + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

struct CivilDate {
    int year;
    int month;
    int day;
};

CivilDate civil_from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {y + (m <= 2), static_cast<int>(m), static_cast<int>(d)};
}

// ISO weekday, 1 = Monday .. 7 = Sunday. 1970-01-01 was a Thursday.
int iso_weekday(long days) {
    const long r = (days + 3) % 7;
    return static_cast<int>(r >= 0 ? r : r + 7) + 1;
}

// Monday of ISO week 1 of the given year: the week containing January 4.
long monday_of_week1(int year) {
    const long jan4 = days_from_civil(year, 1, 4);
    return jan4 - (iso_weekday(jan4) - 1);
}

long thursday_of(const IsoWeek& w) {
    return monday_of_week1(w.year) + 7L * (w.week - 1) + 3;
}

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

int weeks_in_iso_year(int year) {
    return static_cast<int>((monday_of_week1(year + 1) - monday_of_week1(year)) / 7);
}

IsoWeek parse_iso_week(const std::string& bucket) {
    // YYYY-Www
    const bool shaped = bucket.size() == 8 && bucket[4] == '-' && bucket[5] == 'W' &&
                        all_digits(bucket, 0, 4) && all_digits(bucket, 6, 8);
    require(shaped, ErrorCode::parse, "cannot parse week bucket '" + bucket + "'");
    IsoWeek w{std::stoi(bucket.substr(0, 4)), std::stoi(bucket.substr(6, 2))};
    require(w.week >= 1 && w.week <= weeks_in_iso_year(w.year), ErrorCode::parse,
            "week out of range in bucket '" + bucket + "'");
    return w;
}

std::string to_string(const IsoWeek& w) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-W%02d", w.year, w.week);
    return buf;
}

IsoWeek next_week(const IsoWeek& w) {
    if (w.week < weeks_in_iso_year(w.year)) return {w.year, w.week + 1};
    return {w.year + 1, 1};
}

std::string month_of(const IsoWeek& w) {
    const CivilDate d = civil_from_days(thursday_of(w));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", d.year, d.month);
    return buf;
}

BucketKind classify_bucket(const std::string& bucket) {
    if (bucket.size() == 8 && bucket[5] == 'W') {
        parse_iso_week(bucket);
        return BucketKind::weekly;
    }
    const bool monthly = bucket.size() == 7 && bucket[4] == '-' && all_digits(bucket, 0, 4) &&
                         all_digits(bucket, 5, 7);
    require(monthly, ErrorCode::parse, "cannot parse bucket '" + bucket + "'");
    const int month = std::stoi(bucket.substr(5, 2));
    require(month >= 1 && month <= 12, ErrorCode::parse,
            "month out of range in bucket '" + bucket + "'");
    return BucketKind::monthly;
}

TimeSeries::TimeSeries(std::vector<TimePoint> points) : points_(std::move(points)) {
    if (points_.empty()) return;
    const BucketKind kind = classify_bucket(points_.front().bucket);
    kind_ = kind;
    for (const TimePoint& p : points_) {
        require(classify_bucket(p.bucket) == kind, ErrorCode::parse,
                "mixed bucket granularity at '" + p.bucket + "'");
        require(std::isfinite(p.value), ErrorCode::invalid_argument,
                "non-finite value at bucket '" + p.bucket + "'");
    }
    // Zero-padded buckets of one granularity sort correctly as strings.
    std::sort(points_.begin(), points_.end(),
              [](const TimePoint& a, const TimePoint& b) { return a.bucket < b.bucket; });
    for (std::size_t i = 1; i < points_.size(); ++i)
        require(points_[i - 1].bucket != points_[i].bucket, ErrorCode::parse,
                "duplicate bucket '" + points_[i].bucket + "'");
}

TimeSeries load_timeseries_csv(const std::filesystem::path& path,
                               const std::string& bucket_column,
                               const std::string& value_column) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::io, "cannot open '" + path.string() + "'");
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::parse,
            "empty file '" + path.string() + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    {
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                header.push_back(cur);
                cur.clear();
            } else
                cur.push_back(c);
        }
        header.push_back(cur);
    }
    auto find_col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        require(it != header.end(), ErrorCode::parse,
                "missing column '" + name + "' in '" + path.string() + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t bucket_at = find_col(bucket_column);
    const std::size_t value_at = find_col(value_column);

    std::vector<TimePoint> points;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else
                cur.push_back(c);
        }
        fields.push_back(cur);
        require(fields.size() == header.size(), ErrorCode::parse,
                "row " + std::to_string(line_no) + ": field count mismatch");
        double v = 0.0;
        require(parse_double(fields[value_at], v), ErrorCode::parse,
                "row " + std::to_string(line_no) + ", column '" + value_column +
                    "': cannot parse '" + fields[value_at] + "' as a number");
        classify_bucket(fields[bucket_at]);
        points.push_back({fields[bucket_at], v});
    }
    return TimeSeries(std::move(points));
}

void write_timeseries_csv(const TimeSeries& series, const std::filesystem::path& path,
                          const std::string& bucket_column, const std::string& value_column) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorCode::io, "cannot write '" + path.string() + "'");
    out << bucket_column << ',' << value_column << '\n';
    for (const TimePoint& p : series.points())
        out << p.bucket << ',' << format_double(p.value) << '\n';
    require(out.good(), ErrorCode::io, "write failed for '" + path.string() + "'");
}

std::vector<AlignedPoint> align(const TimeSeries& a, const TimeSeries& b) {
    std::vector<AlignedPoint> joined;
    std::size_t i = 0, j = 0;
    const auto& pa = a.points();
    const auto& pb = b.points();
    while (i < pa.size() && j < pb.size()) {
        if (pa[i].bucket < pb[j].bucket)
            ++i;
        else if (pb[j].bucket < pa[i].bucket)
            ++j;
        else {
            joined.push_back({pa[i].bucket, pa[i].value, pb[j].value});
            ++i;
            ++j;
        }
    }
    return joined;
}

double pearson(const std::vector<AlignedPoint>& joined) {
    require(joined.size() >= 3, ErrorCode::invalid_argument,
            "pearson needs at least 3 joined points, got " + std::to_string(joined.size()));
    const double n = static_cast<double>(joined.size());
    double ma = 0.0, mb = 0.0;
    for (const AlignedPoint& p : joined) {
        ma += p.value_a;
        mb += p.value_b;
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (const AlignedPoint& p : joined) {
        const double da = p.value_a - ma;
        const double db = p.value_b - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    require(va > 0.0, ErrorCode::invalid_argument, "zero variance in first series");
    require(vb > 0.0, ErrorCode::invalid_argument, "zero variance in second series");
    return cov / std::sqrt(va * vb);
}

TimeSeries expand_monthly_to_weekly(const TimeSeries& monthly) {
    std::vector<TimePoint> weekly;
    for (const TimePoint& p : monthly.points()) {
        require(classify_bucket(p.bucket) == BucketKind::monthly, ErrorCode::invalid_argument,
                "expected monthly buckets, got '" + p.bucket + "'");
        const int year = std::stoi(p.bucket.substr(0, 4));
        for (int w = 1; w <= weeks_in_iso_year(year); ++w) {
            const IsoWeek week{year, w};
            if (month_of(week) == p.bucket) weekly.push_back({to_string(week), p.value});
        }
    }
    return TimeSeries(std::move(weekly));
}

} // namespace farmlink
