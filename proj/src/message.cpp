#include "farmlink/message.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "farmlink/error.hpp"
#include "farmlink/timeseries.hpp"

namespace farmlink {

namespace {

using nlohmann::json;

json vector_to_json(const std::vector<double>& v) { return json(v); }

std::vector<double> finite_vector(const json& j, const char* field) {
    require(j.is_array(), ErrorCode::parse, std::string(field) + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        require(e.is_number(), ErrorCode::parse,
                std::string(field) + " entries must be numbers");
        double v = e.get<double>();
        require(std::isfinite(v), ErrorCode::parse,
                std::string(field) + " entries must be finite");
        out.push_back(v);
    }
    return out;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const char* field) {
    require(j.is_array() && !j.empty(), ErrorCode::parse,
            std::string(field) + " must be a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    rows.reserve(j.size());
    for (const auto& row : j) rows.push_back(finite_vector(row, field));
    for (const auto& row : rows) {
        require(row.size() == rows.front().size(), ErrorCode::parse,
                std::string(field) + " rows must have equal length");
    }
    return Matrix::from_rows(rows);
}

std::vector<std::string> string_vector(const json& j, const char* field) {
    require(j.is_array(), ErrorCode::parse, std::string(field) + " must be an array");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        require(e.is_string(), ErrorCode::parse,
                std::string(field) + " entries must be strings");
        out.push_back(e.get<std::string>());
        require(!out.back().empty(), ErrorCode::parse,
                std::string(field) + " entries must be non-empty");
    }
    return out;
}

const json& field_of(const json& j, const char* name) {
    auto it = j.find(name);
    require(it != j.end(), ErrorCode::parse, std::string("missing field '") + name + "'");
    return *it;
}

json encode_model_share(const ModelShare& m) {
    require(m.epsilon_total > 0.0 && std::isfinite(m.epsilon_total),
            ErrorCode::invalid_argument, "epsilon_total must be positive");
    require(m.standardization.means.size() == m.model.input_dim() &&
                m.standardization.scales.size() == m.model.input_dim(),
            ErrorCode::dimension_mismatch,
            "standardization dimension does not match model");
    require(m.sensitivity.s.size() == m.model.rank(), ErrorCode::dimension_mismatch,
            "sensitivity dimension does not match model rank");
    json j;
    j["type"] = "ModelShare";
    j["model"] = json::parse(pca_model_to_json(m.model));
    j["standardization"] = {{"means", vector_to_json(m.standardization.means)},
                            {"scales", vector_to_json(m.standardization.scales)}};
    j["sensitivity"] = vector_to_json(m.sensitivity.s);
    j["epsilon_total"] = m.epsilon_total;
    return j;
}

ModelShare decode_model_share(const json& j) {
    ModelShare m;
    m.model = pca_model_from_json(field_of(j, "model").dump());
    const json& std_j = field_of(j, "standardization");
    m.standardization.means = finite_vector(field_of(std_j, "means"), "standardization.means");
    m.standardization.scales =
        finite_vector(field_of(std_j, "scales"), "standardization.scales");
    require(m.standardization.means.size() == m.model.input_dim() &&
                m.standardization.scales.size() == m.model.input_dim(),
            ErrorCode::parse, "standardization dimension does not match model");
    for (double s : m.standardization.scales) {
        require(s > 0.0, ErrorCode::parse, "standardization scales must be positive");
    }
    m.sensitivity = ComponentSensitivity(finite_vector(field_of(j, "sensitivity"), "sensitivity"));
    require(m.sensitivity.s.size() == m.model.rank(), ErrorCode::parse,
            "sensitivity dimension does not match model rank");
    const json& eps = field_of(j, "epsilon_total");
    require(eps.is_number(), ErrorCode::parse, "epsilon_total must be a number");
    m.epsilon_total = eps.get<double>();
    require(std::isfinite(m.epsilon_total) && m.epsilon_total > 0.0, ErrorCode::parse,
            "epsilon_total must be positive");
    return m;
}

json encode_projection_share(const ProjectionShare& m) {
    require(!m.market_id.empty(), ErrorCode::invalid_argument, "market_id must be non-empty");
    require(m.pseudonyms.size() == m.scores.rows(), ErrorCode::dimension_mismatch,
            "pseudonym count does not match score rows");
    json j;
    j["type"] = "ProjectionShare";
    j["market_id"] = m.market_id;
    j["pseudonyms"] = m.pseudonyms;
    j["scores"] = matrix_to_json(m.scores);
    return j;
}

ProjectionShare decode_projection_share(const json& j) {
    ProjectionShare m;
    const json& id = field_of(j, "market_id");
    require(id.is_string() && !id.get<std::string>().empty(), ErrorCode::parse,
            "market_id must be a non-empty string");
    m.market_id = id.get<std::string>();
    m.pseudonyms = string_vector(field_of(j, "pseudonyms"), "pseudonyms");
    require(!m.pseudonyms.empty(), ErrorCode::parse, "pseudonyms must be non-empty");
    {
        auto sorted = m.pseudonyms;
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                ErrorCode::parse, "pseudonyms must be unique");
    }
    m.scores = matrix_from_json(field_of(j, "scores"), "scores");
    require(m.scores.rows() == m.pseudonyms.size(), ErrorCode::parse,
            "score rows must match pseudonyms");
    return m;
}

json encode_aggregate_query(const AggregateQuery& m) {
    require(!m.market_id.empty(), ErrorCode::invalid_argument, "market_id must be non-empty");
    require(!m.attribute.empty(), ErrorCode::invalid_argument, "attribute must be non-empty");
    json j;
    j["type"] = "AggregateQuery";
    j["market_id"] = m.market_id;
    j["pseudonyms"] = m.pseudonyms;
    j["attribute"] = m.attribute;
    j["time_range"] = {m.time_range[0], m.time_range[1]};
    j["aggregate"] = aggregate_kind_name(m.aggregate);
    return j;
}

AggregateQuery decode_aggregate_query(const json& j) {
    AggregateQuery m;
    const json& id = field_of(j, "market_id");
    require(id.is_string() && !id.get<std::string>().empty(), ErrorCode::parse,
            "market_id must be a non-empty string");
    m.market_id = id.get<std::string>();
    m.pseudonyms = string_vector(field_of(j, "pseudonyms"), "pseudonyms");
    require(!m.pseudonyms.empty(), ErrorCode::parse, "pseudonyms must be non-empty");
    require(std::is_sorted(m.pseudonyms.begin(), m.pseudonyms.end()) &&
                std::adjacent_find(m.pseudonyms.begin(), m.pseudonyms.end()) ==
                    m.pseudonyms.end(),
            ErrorCode::parse, "pseudonyms must be sorted and unique");
    const json& attr = field_of(j, "attribute");
    require(attr.is_string() && !attr.get<std::string>().empty(), ErrorCode::parse,
            "attribute must be a non-empty string");
    m.attribute = attr.get<std::string>();
    const json& range = field_of(j, "time_range");
    require(range.is_array() && range.size() == 2 && range[0].is_string() &&
                range[1].is_string(),
            ErrorCode::parse, "time_range must be a pair of bucket strings");
    m.time_range[0] = range[0].get<std::string>();
    m.time_range[1] = range[1].get<std::string>();
    BucketKind a = classify_bucket(m.time_range[0]);
    BucketKind b = classify_bucket(m.time_range[1]);
    require(a == b, ErrorCode::parse, "time_range endpoints must share granularity");
    require(m.time_range[0] <= m.time_range[1], ErrorCode::parse,
            "time_range start must not exceed end");
    const json& agg = field_of(j, "aggregate");
    require(agg.is_string(), ErrorCode::parse, "aggregate must be a string");
    m.aggregate = parse_aggregate_kind(agg.get<std::string>());
    return m;
}

json encode_aggregate_response(const AggregateResponse& m) {
    json series = json::array();
    for (const auto& [bucket, value] : m.series) {
        series.push_back(json::array({bucket, value}));
    }
    json j;
    j["type"] = "AggregateResponse";
    j["series"] = std::move(series);
    return j;
}

AggregateResponse decode_aggregate_response(const json& j) {
    AggregateResponse m;
    const json& series = field_of(j, "series");
    require(series.is_array(), ErrorCode::parse, "series must be an array");
    for (const auto& e : series) {
        require(e.is_array() && e.size() == 2 && e[0].is_string() && e[1].is_number(),
                ErrorCode::parse, "series entries must be [bucket, value] pairs");
        std::string bucket = e[0].get<std::string>();
        classify_bucket(bucket);
        double value = e[1].get<double>();
        require(std::isfinite(value), ErrorCode::parse, "series values must be finite");
        m.series.emplace_back(std::move(bucket), value);
    }
    for (std::size_t i = 1; i < m.series.size(); ++i) {
        require(m.series[i - 1].first < m.series[i].first, ErrorCode::parse,
                "series buckets must be strictly increasing");
    }
    return m;
}

json encode_protocol_error(const ProtocolError& m) {
    require(!m.code.empty(), ErrorCode::invalid_argument, "error code must be non-empty");
    json j;
    j["type"] = "ProtocolError";
    j["code"] = m.code;
    j["detail"] = m.detail;
    return j;
}

ProtocolError decode_protocol_error(const json& j) {
    ProtocolError m;
    const json& code = field_of(j, "code");
    require(code.is_string() && !code.get<std::string>().empty(), ErrorCode::parse,
            "code must be a non-empty string");
    m.code = code.get<std::string>();
    const json& detail = field_of(j, "detail");
    require(detail.is_string(), ErrorCode::parse, "detail must be a string");
    m.detail = detail.get<std::string>();
    return m;
}

} // namespace

const char* aggregate_kind_name(AggregateKind kind) {
    switch (kind) {
        case AggregateKind::sum: return "sum";
        case AggregateKind::mean: return "mean";
        case AggregateKind::count: return "count";
    }
    throw Error(ErrorCode::invalid_argument, "unknown aggregate kind");
}

AggregateKind parse_aggregate_kind(std::string_view name) {
    if (name == "sum") return AggregateKind::sum;
    if (name == "mean") return AggregateKind::mean;
    if (name == "count") return AggregateKind::count;
    throw Error(ErrorCode::parse, "unknown aggregate kind '" + std::string(name) + "'");
}

std::string encode_message(const Message& message) {
    json j = std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ModelShare>) return encode_model_share(m);
            if constexpr (std::is_same_v<T, ProjectionShare>) return encode_projection_share(m);
            if constexpr (std::is_same_v<T, AggregateQuery>) return encode_aggregate_query(m);
            if constexpr (std::is_same_v<T, AggregateResponse>)
                return encode_aggregate_response(m);
            if constexpr (std::is_same_v<T, ProtocolError>) return encode_protocol_error(m);
        },
        message);
    std::string line = j.dump();
    require(line.size() <= kMaxMessageBytes, ErrorCode::protocol,
            "encoded message exceeds the 16 MiB limit");
    return line;
}

Message decode_message(std::string_view line) {
    require(line.size() <= kMaxMessageBytes, ErrorCode::protocol,
            "message exceeds the 16 MiB limit");
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("malformed message: ") + e.what());
    }
    require(j.is_object(), ErrorCode::parse, "message must be a JSON object");
    const json& type = field_of(j, "type");
    require(type.is_string(), ErrorCode::parse, "type must be a string");
    const std::string tag = type.get<std::string>();
    try {
        if (tag == "ModelShare") return decode_model_share(j);
        if (tag == "ProjectionShare") return decode_projection_share(j);
        if (tag == "AggregateQuery") return decode_aggregate_query(j);
        if (tag == "AggregateResponse") return decode_aggregate_response(j);
        if (tag == "ProtocolError") return decode_protocol_error(j);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("malformed message: ") + e.what());
    }
    throw Error(ErrorCode::parse, "unknown message type '" + tag + "'");
}

} // namespace farmlink
