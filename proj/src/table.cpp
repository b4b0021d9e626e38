#include "farmlink/table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "farmlink/num_format.hpp"
#include "farmlink/rng.hpp"

namespace farmlink {

std::string to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::identifier: return "identifier";
        case ColumnKind::continuous: return "continuous";
        case ColumnKind::binary_indicator: return "binary-indicator";
    }
    return "continuous";
}

ColumnKind column_kind_from_string(const std::string& s) {
    if (s == "identifier") return ColumnKind::identifier;
    if (s == "continuous") return ColumnKind::continuous;
    if (s == "binary-indicator" || s == "binary") return ColumnKind::binary_indicator;
    throw Error(ErrorCode::parse, "unknown column kind '" + s + "'");
}

Schema::Schema(std::vector<Column> columns) : columns_(std::move(columns)) {
    require(!columns_.empty(), ErrorCode::invalid_argument, "schema has no columns");
    std::unordered_set<std::string> seen;
    std::size_t id_count = 0;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        const Column& c = columns_[i];
        require(!c.name.empty(), ErrorCode::invalid_argument, "schema column name is empty");
        require(seen.insert(c.name).second, ErrorCode::invalid_argument,
                "duplicate schema column '" + c.name + "'");
        if (c.kind == ColumnKind::identifier) {
            identifier_index_ = i;
            ++id_count;
        } else {
            feature_names_.push_back(c.name);
            feature_kinds_.push_back(c.kind);
        }
    }
    require(id_count == 1, ErrorCode::invalid_argument,
            "schema must have exactly one identifier column (found " +
                std::to_string(id_count) + ")");
}

Schema Schema::farmers_market() {
    std::vector<Column> cols{{"ID", ColumnKind::identifier},
                             {"Miles from Market", ColumnKind::continuous}};
    for (const char* vendor : {"F&V", "M&S", "D", "Eggs", "P&F", "N&L", "VA", "PF", "CAS"})
        cols.push_back({vendor, ColumnKind::binary_indicator});
    cols.push_back({"Sales", ColumnKind::continuous});
    cols.push_back({"#Visitors", ColumnKind::continuous});
    return Schema(std::move(cols));
}

std::size_t Schema::feature_index(const std::string& name) const {
    for (std::size_t j = 0; j < feature_names_.size(); ++j)
        if (feature_names_[j] == name) return j;
    return npos;
}

Schema Schema::as_continuous() const {
    std::vector<Column> cols = columns_;
    for (Column& c : cols)
        if (c.kind == ColumnKind::binary_indicator) c.kind = ColumnKind::continuous;
    return Schema(std::move(cols));
}

FeatureTable::FeatureTable(Schema schema, std::vector<std::string> pseudonyms, Matrix values)
    : schema_(std::move(schema)), pseudonyms_(std::move(pseudonyms)), values_(std::move(values)) {
    require(values_.rows() == pseudonyms_.size(), ErrorCode::dimension_mismatch,
            "row count does not match pseudonym count");
    require(values_.cols() == schema_.feature_count(), ErrorCode::dimension_mismatch,
            "column count does not match schema");
    std::unordered_set<std::string> seen;
    for (const std::string& p : pseudonyms_) {
        require(!p.empty(), ErrorCode::invalid_argument, "empty pseudonym");
        require(seen.insert(p).second, ErrorCode::invalid_argument,
                "duplicate pseudonym '" + p + "'");
    }
    const auto& kinds = schema_.feature_kinds();
    for (std::size_t i = 0; i < values_.rows(); ++i)
        for (std::size_t j = 0; j < values_.cols(); ++j) {
            const double v = values_(i, j);
            require(std::isfinite(v), ErrorCode::invalid_argument,
                    "non-finite value in column '" + schema_.feature_names()[j] + "'");
            if (kinds[j] == ColumnKind::binary_indicator)
                require(v == 0.0 || v == 1.0, ErrorCode::invalid_argument,
                        "indicator column '" + schema_.feature_names()[j] +
                            "' has non-binary value " + format_double(v));
        }
}

FeatureTable FeatureTable::with_pseudonyms(std::vector<std::string> pseudonyms) const {
    return FeatureTable(schema_, std::move(pseudonyms), values_);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

} // namespace

FeatureTable load_csv(const std::filesystem::path& path, const Schema& schema) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::io, "cannot open '" + path.string() + "'");

    std::string header_line;
    if (!std::getline(in, header_line))
        throw Error(ErrorCode::parse, "empty file '" + path.string() + "'");
    header_line = strip_cr(header_line);

    const std::vector<std::string> header = split_line(header_line);
    const auto& cols = schema.columns();
    for (const Column& c : cols)
        require(std::find(header.begin(), header.end(), c.name) != header.end(),
                ErrorCode::parse, "missing column '" + c.name + "' in '" + path.string() + "'");
    require(header.size() == cols.size(), ErrorCode::parse,
            "header of '" + path.string() + "' has " + std::to_string(header.size()) +
                " columns, schema expects " + std::to_string(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
        require(header[i] == cols[i].name, ErrorCode::parse,
                "column order mismatch at position " + std::to_string(i + 1) + ": got '" +
                    header[i] + "', expected '" + cols[i].name + "'");

    std::vector<std::string> pseudonyms;
    std::vector<std::vector<double>> rows;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_line(line);
        require(fields.size() == cols.size(), ErrorCode::parse,
                "row " + std::to_string(line_no) + ": expected " +
                    std::to_string(cols.size()) + " fields, got " +
                    std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(schema.feature_count());
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (cols[i].kind == ColumnKind::identifier) {
                require(!fields[i].empty(), ErrorCode::parse,
                        "row " + std::to_string(line_no) + ": empty identifier");
                require(seen_ids.insert(fields[i]).second, ErrorCode::parse,
                        "duplicate pseudonym '" + fields[i] + "' at row " +
                            std::to_string(line_no));
                pseudonyms.push_back(fields[i]);
            } else {
                double v = 0.0;
                require(parse_double(fields[i], v), ErrorCode::parse,
                        "row " + std::to_string(line_no) + ", column '" + cols[i].name +
                            "': cannot parse '" + fields[i] + "' as a number");
                row.push_back(v);
            }
        }
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorCode::parse, "empty table in '" + path.string() + "'");
    return FeatureTable(schema, std::move(pseudonyms), Matrix::from_rows(rows));
}

void write_csv(const FeatureTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorCode::io, "cannot write '" + path.string() + "'");
    const auto& cols = table.schema().columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i].name;
    out << '\n';
    const std::size_t id_pos = table.schema().identifier_index();
    for (std::size_t r = 0; r < table.rows(); ++r) {
        std::size_t feature = 0;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out << ',';
            if (i == id_pos)
                out << table.pseudonyms()[r];
            else
                out << format_double(table.values()(r, feature++));
        }
        out << '\n';
    }
    require(out.good(), ErrorCode::io, "write failed for '" + path.string() + "'");
}

StandardizationParams fit_standardizer(const FeatureTable& table) {
    require(table.rows() >= 2, ErrorCode::invalid_argument,
            "insufficient rows to fit standardizer (need at least 2)");
    const Matrix& x = table.values();
    const std::size_t n = x.rows();
    StandardizationParams p;
    p.means = column_means(x);
    p.scales.assign(x.cols(), 1.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x(i, j) - p.means[j];
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        p.scales[j] = sd < 1e-12 ? 1.0 : sd;
    }
    return p;
}

FeatureTable apply_standardizer(const StandardizationParams& params, const FeatureTable& table) {
    require(params.means.size() == table.feature_count() &&
                params.scales.size() == table.feature_count(),
            ErrorCode::dimension_mismatch, "standardizer dimensionality mismatch");
    Matrix out = table.values();
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j)
            out(i, j) = (out(i, j) - params.means[j]) / params.scales[j];
    // Standardized indicators are no longer 0/1, so the derived schema drops
    // the binary kinds.
    return FeatureTable(table.schema().as_continuous(), table.pseudonyms(), std::move(out));
}

std::vector<FeatureTable> partition(const FeatureTable& table, std::size_t parts,
                                    std::uint64_t seed) {
    require(parts >= 2, ErrorCode::invalid_argument, "parts must be at least 2");
    require(parts <= table.rows(), ErrorCode::invalid_argument,
            "cannot split " + std::to_string(table.rows()) + " rows into " +
                std::to_string(parts) + " parts");
    const std::size_t n = table.rows();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng = Rng(seed).derive("partition");
    rng.shuffle(order);

    std::vector<FeatureTable> out;
    out.reserve(parts);
    const std::size_t base = n / parts;
    const std::size_t extra = n % parts;
    std::size_t offset = 0;
    for (std::size_t p = 0; p < parts; ++p) {
        const std::size_t size = base + (p < extra ? 1 : 0);
        std::vector<std::size_t> idx(order.begin() + offset, order.begin() + offset + size);
        offset += size;
        std::sort(idx.begin(), idx.end());
        std::vector<std::string> ids;
        Matrix values(size, table.feature_count());
        for (std::size_t i = 0; i < size; ++i) {
            ids.push_back(table.pseudonyms()[idx[i]]);
            for (std::size_t j = 0; j < table.feature_count(); ++j)
                values(i, j) = table.values()(idx[i], j);
        }
        out.emplace_back(table.schema(), std::move(ids), std::move(values));
    }
    return out;
}

} // namespace farmlink
