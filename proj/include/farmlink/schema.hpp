#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "farmlink/error.hpp"

namespace farmlink {

enum class ColumnKind {
    identifier,
    continuous,
    binary_indicator,
};

std::string to_string(ColumnKind kind);
ColumnKind column_kind_from_string(const std::string& s);

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::continuous;

    bool operator==(const Column&) const = default;
};

/// Ordered column roster of a feature table. Exactly one identifier column;
/// every other column is numeric (continuous or a 0/1 indicator).
class Schema {
public:
    explicit Schema(std::vector<Column> columns);

    /// The vendor-market roster: an ID, miles from market, nine vendor-type
    /// indicators, sales, and visitor count.
    static Schema farmers_market();

    const std::vector<Column>& columns() const noexcept { return columns_; }
    std::size_t identifier_index() const noexcept { return identifier_index_; }

    /// Non-identifier columns, in table column order.
    std::size_t feature_count() const noexcept { return columns_.size() - 1; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::vector<ColumnKind>& feature_kinds() const noexcept { return feature_kinds_; }

    /// Index into the feature columns, or npos if absent / the identifier.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t feature_index(const std::string& name) const;

    /// Same roster with every indicator column downgraded to continuous;
    /// the schema of standardized (derived) tables.
    Schema as_continuous() const;

    bool operator==(const Schema&) const = default;

private:
    std::vector<Column> columns_;
    std::size_t identifier_index_ = 0;
    std::vector<std::string> feature_names_;
    std::vector<ColumnKind> feature_kinds_;
};

} // namespace farmlink
