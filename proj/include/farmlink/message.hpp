#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "farmlink/ldp.hpp"
#include "farmlink/pca.hpp"
#include "farmlink/table.hpp"

namespace farmlink {

/// Hard cap on one encoded message line, enforced on both encode and decode.
inline constexpr std::size_t kMaxMessageBytes = 16u * 1024u * 1024u;

/// Stable error codes carried inside ProtocolError messages.
namespace protocol_code {
inline constexpr std::string_view out_of_order = "out_of_order";
inline constexpr std::string_view unexpected_message = "unexpected_message";
inline constexpr std::string_view unknown_record = "unknown_record";
inline constexpr std::string_view group_too_small = "group_too_small";
inline constexpr std::string_view bad_request = "bad_request";
inline constexpr std::string_view dimension_mismatch = "dimension_mismatch";
} // namespace protocol_code

/// Everything a market needs to project locally: the reference model, the
/// standardization fitted on the public table, per-component sensitivity and
/// the total privacy budget.
struct ModelShare {
    PcaModel model;
    StandardizationParams standardization;
    ComponentSensitivity sensitivity;
    double epsilon_total = 0.0;
};

/// A market's perturbed projection rows, keyed by session pseudonyms.
struct ProjectionShare {
    std::string market_id;
    std::vector<std::string> pseudonyms;
    Matrix scores;
};

enum class AggregateKind { sum, mean, count };

const char* aggregate_kind_name(AggregateKind kind);
AggregateKind parse_aggregate_kind(std::string_view name);

/// Request for one aggregated series over a pseudonym group. Pseudonyms must
/// arrive sorted and unique so group identity is canonical.
struct AggregateQuery {
    std::string market_id;
    std::vector<std::string> pseudonyms;
    std::string attribute;
    std::array<std::string, 2> time_range; // inclusive [start, end] buckets
    AggregateKind aggregate = AggregateKind::sum;
};

/// Aggregated series, sorted by bucket. Buckets the market suppressed or has
/// no data for are simply absent.
struct AggregateResponse {
    std::vector<std::pair<std::string, double>> series;
};

struct ProtocolError {
    std::string code;
    std::string detail;
};

using Message =
    std::variant<ModelShare, ProjectionShare, AggregateQuery, AggregateResponse, ProtocolError>;

/// One-line JSON with a top-level "type" tag; no trailing newline.
std::string encode_message(const Message& message);

/// Strict inverse of encode_message. Rejects unknown tags, malformed JSON,
/// structurally invalid payloads and lines over the size cap.
Message decode_message(std::string_view line);

} // namespace farmlink
