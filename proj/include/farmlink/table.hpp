#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "farmlink/matrix.hpp"
#include "farmlink/schema.hpp"

namespace farmlink {

/// Rectangular numeric table keyed by record pseudonyms. The identifier
/// column is held apart from the numeric block and never enters any math.
class FeatureTable {
public:
    /// Validates shape, pseudonym uniqueness, finiteness, and 0/1 content of
    /// indicator columns.
    FeatureTable(Schema schema, std::vector<std::string> pseudonyms, Matrix values);

    const Schema& schema() const noexcept { return schema_; }
    const std::vector<std::string>& pseudonyms() const noexcept { return pseudonyms_; }
    const Matrix& values() const noexcept { return values_; }

    std::size_t rows() const noexcept { return pseudonyms_.size(); }
    std::size_t feature_count() const noexcept { return values_.cols(); }

    /// Same table with fresh pseudonyms (used when a market re-keys records).
    FeatureTable with_pseudonyms(std::vector<std::string> pseudonyms) const;

private:
    Schema schema_;
    std::vector<std::string> pseudonyms_;
    Matrix values_;
};

FeatureTable load_csv(const std::filesystem::path& path, const Schema& schema);
void write_csv(const FeatureTable& table, const std::filesystem::path& path);

/// Per-column centering/scaling constants fitted on a table.
struct StandardizationParams {
    std::vector<double> means;
    std::vector<double> scales;
};

/// Population-convention standard deviations; zero-variance columns get
/// scale 1 so they standardize to all-zeros instead of dividing by zero.
StandardizationParams fit_standardizer(const FeatureTable& table);
FeatureTable apply_standardizer(const StandardizationParams& params, const FeatureTable& table);

/// Disjoint, balanced, seed-deterministic row split. Part sizes differ by at
/// most one; row order inside each part follows the source table.
std::vector<FeatureTable> partition(const FeatureTable& table, std::size_t parts,
                                    std::uint64_t seed);

} // namespace farmlink
