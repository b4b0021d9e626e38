#include <doctest.h>

#include <cmath>
#include <set>

#include <farmlink/table.hpp>

#include "support.hpp"

using namespace farmlink;
using testsupport::TempDir;

namespace {

const std::filesystem::path kFixtures = FARMLINK_FIXTURES_DIR;

Schema tiny_schema() {
    return Schema({{"id", ColumnKind::identifier},
                   {"x", ColumnKind::continuous},
                   {"y", ColumnKind::continuous}});
}

} // namespace

TEST_CASE("vendor roster CSV loads with the expected cells") {
    FeatureTable t = load_csv(kFixtures / "vendors_small.csv", Schema::farmers_market());
    CHECK(t.rows() == 5);
    CHECK(t.feature_count() == 12);
    CHECK(t.pseudonyms() ==
          std::vector<std::string>{"6815", "5991", "5663", "5950", "5686"});

    const std::size_t sales = t.schema().feature_index("Sales");
    REQUIRE(sales != Schema::npos);
    CHECK(t.values()(0, sales) == 414.0);
    CHECK(t.values()(1, sales) == 157.0);
    CHECK(t.values()(2, sales) == 670.0);
    CHECK(t.values()(3, sales) == 70.0);
    CHECK(t.values()(4, sales) == 285.0);

    const std::size_t dairy = t.schema().feature_index("D");
    CHECK(t.values()(0, dairy) == 1.0);
    CHECK(t.values()(1, dairy) == 0.0);
}

TEST_CASE("sales column mean matches direct arithmetic") {
    FeatureTable t = load_csv(kFixtures / "vendors_small.csv", Schema::farmers_market());
    const std::size_t sales = t.schema().feature_index("Sales");
    CHECK(column_means(t.values())[sales] == 319.2);
}

TEST_CASE("csv survives a write/load round trip") {
    FeatureTable t = load_csv(kFixtures / "vendors_small.csv", Schema::farmers_market());
    TempDir dir("table-roundtrip");
    write_csv(t, dir / "copy.csv");
    FeatureTable back = load_csv(dir / "copy.csv", Schema::farmers_market());
    CHECK(back.pseudonyms() == t.pseudonyms());
    CHECK(back.values() == t.values());
}

TEST_CASE("load_csv rejects a header that does not match the schema") {
    TempDir dir("table-header");
    testsupport::spit(dir / "bad.csv", "id,x\n1,2\n");
    CHECK_THROWS_AS(load_csv(dir / "bad.csv", tiny_schema()), Error);
}

TEST_CASE("load_csv rejects non-numeric cells") {
    TempDir dir("table-cell");
    testsupport::spit(dir / "bad.csv", "id,x,y\nr1,oops,2\n");
    CHECK_THROWS_AS(load_csv(dir / "bad.csv", tiny_schema()), Error);
}

TEST_CASE("missing file reports an io error") {
    CHECK_THROWS_WITH_AS(load_csv("/nonexistent/nowhere.csv", tiny_schema()),
                         doctest::Contains("cannot open"), Error);
}

TEST_CASE("table construction validates pseudonyms and indicators") {
    Schema s({{"id", ColumnKind::identifier}, {"flag", ColumnKind::binary_indicator}});
    CHECK_THROWS_AS(FeatureTable(s, {"a", "a"}, Matrix::from_rows({{0}, {1}})), Error);
    CHECK_THROWS_AS(FeatureTable(s, {"a", ""}, Matrix::from_rows({{0}, {1}})), Error);
    CHECK_THROWS_AS(FeatureTable(s, {"a", "b"}, Matrix::from_rows({{0}, {0.5}})), Error);
    CHECK_THROWS_AS(FeatureTable(s, {"a"}, Matrix::from_rows({{0}, {1}})), Error);
}

TEST_CASE("with_pseudonyms re-keys without touching values") {
    FeatureTable t(tiny_schema(), {"a", "b"}, Matrix::from_rows({{1, 2}, {3, 4}}));
    FeatureTable renamed = t.with_pseudonyms({"p", "q"});
    CHECK(renamed.pseudonyms() == std::vector<std::string>{"p", "q"});
    CHECK(renamed.values() == t.values());
}

TEST_CASE("standardizer uses the population convention") {
    FeatureTable t = load_csv(kFixtures / "vendors_small.csv", Schema::farmers_market());
    StandardizationParams p = fit_standardizer(t);
    const std::size_t sales = t.schema().feature_index("Sales");
    CHECK(p.means[sales] == 319.2);
    // Divisor n, not n-1: mean squared deviation of the five sales values.
    const double expected = std::sqrt(221626.8 / 5.0);
    CHECK(p.scales[sales] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("constant columns standardize to zero instead of dividing by zero") {
    FeatureTable t(tiny_schema(), {"a", "b", "c"},
                   Matrix::from_rows({{5, 1}, {5, 2}, {5, 3}}));
    StandardizationParams p = fit_standardizer(t);
    CHECK(p.scales[0] == 1.0);
    FeatureTable z = apply_standardizer(p, t);
    CHECK(z.values()(0, 0) == 0.0);
    CHECK(z.values()(2, 0) == 0.0);
}

TEST_CASE("standardized columns have zero mean and unit spread") {
    FeatureTable t(tiny_schema(), {"a", "b", "c", "d"},
                   Matrix::from_rows({{1, 9}, {2, 7}, {3, 5}, {4, 3}}));
    FeatureTable z = apply_standardizer(fit_standardizer(t), t);
    for (std::size_t j = 0; j < 2; ++j) {
        double mean = 0.0, var = 0.0;
        for (std::size_t i = 0; i < 4; ++i) mean += z.values()(i, j);
        mean /= 4.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const double d = z.values()(i, j) - mean;
            var += d * d;
        }
        CHECK(mean == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(var / 4.0 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("partition splits rows into balanced disjoint parts") {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 10; ++i) {
        ids.push_back("r" + std::to_string(i));
        rows.push_back({double(i), double(2 * i)});
    }
    FeatureTable t(tiny_schema(), ids, Matrix::from_rows(rows));

    auto parts = partition(t, 3, 99);
    REQUIRE(parts.size() == 3);
    std::vector<std::size_t> sizes{parts[0].rows(), parts[1].rows(), parts[2].rows()};
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    CHECK(sizes == std::vector<std::size_t>{4, 3, 3});

    std::set<std::string> seen;
    for (const auto& part : parts)
        for (const auto& p : part.pseudonyms()) CHECK(seen.insert(p).second);
    CHECK(seen.size() == 10);

    // Same seed, same split.
    auto again = partition(t, 3, 99);
    for (std::size_t i = 0; i < 3; ++i) CHECK(again[i].pseudonyms() == parts[i].pseudonyms());
}
