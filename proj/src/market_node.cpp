#include "farmlink/market_node.hpp"

#include <algorithm>

#include "farmlink/error.hpp"
#include "farmlink/ldp.hpp"
#include "farmlink/pca.hpp"
#include "farmlink/rng.hpp"
#include "farmlink/synth.hpp"

namespace farmlink {

namespace {

Message protocol_error(std::string_view code, std::string detail) {
    return ProtocolError{std::string(code), std::move(detail)};
}

} // namespace

MarketNode::MarketNode(MarketConfig config, FeatureTable table,
                       std::map<std::string, std::map<std::string, TimeSeries>> series_by_attribute)
    : config_(std::move(config)), table_(std::move(table)), series_(std::move(series_by_attribute)) {
    require(!config_.market_id.empty(), ErrorCode::invalid_argument,
            "market_id must be non-empty");
    require(config_.min_group_size >= 1, ErrorCode::invalid_argument,
            "min_group_size must be at least 1");
    for (const auto& [attribute, by_record] : series_) {
        require(!attribute.empty(), ErrorCode::invalid_argument,
                "attribute names must be non-empty");
        for (const auto& [record, series] : by_record) {
            (void)series;
            require(std::find(table_.pseudonyms().begin(), table_.pseudonyms().end(), record) !=
                        table_.pseudonyms().end(),
                    ErrorCode::invalid_argument,
                    "series record '" + record + "' is not in the table");
        }
    }

    // Re-key records for this session; the original identifiers stay local.
    Rng mint = Rng(config_.seed).derive("mint");
    minted_ = mint_pseudonyms(mint, table_.rows());
    for (std::size_t i = 0; i < minted_.size(); ++i) minted_row_[minted_[i]] = i;
}

Message MarketNode::handle(const Message& incoming) {
    if (const auto* share = std::get_if<ModelShare>(&incoming)) {
        return handle_model_share(*share);
    }
    if (const auto* query = std::get_if<AggregateQuery>(&incoming)) {
        return handle_query(*query);
    }
    if (!model_received_) {
        return protocol_error(protocol_code::out_of_order,
                              "session must start with a ModelShare");
    }
    return protocol_error(protocol_code::unexpected_message,
                          "markets accept only ModelShare and AggregateQuery");
}

Message MarketNode::handle_model_share(const ModelShare& share) {
    if (model_received_) {
        return protocol_error(protocol_code::unexpected_message,
                              "model already received this session");
    }
    if (share.standardization.means.size() != table_.feature_count() ||
        share.model.input_dim() != table_.feature_count()) {
        return protocol_error(protocol_code::dimension_mismatch,
                              "model dimension does not match this market's features");
    }
    PrivacyBudget budget;
    try {
        budget = allocate_budget(share.epsilon_total, share.sensitivity);
    } catch (const Error& e) {
        return protocol_error(protocol_code::bad_request, e.what());
    }

    FeatureTable standardized = apply_standardizer(share.standardization, table_);
    ProjectedMatrix projected = project(share.model, standardized);
    projected.pseudonyms = minted_;
    Rng noise = Rng(config_.seed).derive("noise");
    NoisyProjection noisy = perturb(projected, share.sensitivity, budget, noise);

    model_received_ = true;
    return ProjectionShare{config_.market_id, noisy.pseudonyms, noisy.scores};
}

Message MarketNode::handle_query(const AggregateQuery& query) {
    if (!model_received_) {
        return protocol_error(protocol_code::out_of_order,
                              "session must start with a ModelShare");
    }
    if (query.market_id != config_.market_id) {
        return protocol_error(protocol_code::bad_request,
                              "query addressed to market '" + query.market_id + "'");
    }
    if (query.pseudonyms.size() < config_.min_group_size) {
        return protocol_error(protocol_code::group_too_small,
                              "group has " + std::to_string(query.pseudonyms.size()) +
                                  " members, minimum is " +
                                  std::to_string(config_.min_group_size));
    }
    std::vector<std::size_t> rows;
    rows.reserve(query.pseudonyms.size());
    for (const std::string& p : query.pseudonyms) {
        auto it = minted_row_.find(p);
        if (it == minted_row_.end()) {
            return protocol_error(protocol_code::unknown_record,
                                  "one or more pseudonyms are not recognized");
        }
        rows.push_back(it->second);
    }
    auto attr_it = series_.find(query.attribute);
    if (attr_it == series_.end()) {
        return protocol_error(protocol_code::bad_request,
                              "unknown attribute '" + query.attribute + "'");
    }

    const BucketKind range_kind = classify_bucket(query.time_range[0]);
    // bucket -> (sum of member values, contributing members)
    std::map<std::string, std::pair<double, std::size_t>> buckets;
    for (std::size_t row : rows) {
        auto series_it = attr_it->second.find(table_.pseudonyms()[row]);
        if (series_it == attr_it->second.end()) continue;
        const TimeSeries& series = series_it->second;
        if (series.kind() != range_kind) {
            return protocol_error(protocol_code::bad_request,
                                  "time_range granularity does not match the attribute");
        }
        for (const TimePoint& point : series.points()) {
            if (point.bucket < query.time_range[0] || point.bucket > query.time_range[1]) {
                continue;
            }
            auto& slot = buckets[point.bucket];
            slot.first += point.value;
            slot.second += 1;
        }
    }

    AggregateResponse response;
    for (const auto& [bucket, slot] : buckets) {
        // Per-bucket suppression: a bucket with too few contributors would
        // expose small partial sums, so it is dropped entirely.
        if (slot.second < config_.min_group_size) continue;
        double value = 0.0;
        switch (query.aggregate) {
            case AggregateKind::sum: value = slot.first; break;
            case AggregateKind::mean: value = slot.first / double(slot.second); break;
            case AggregateKind::count: value = double(slot.second); break;
        }
        response.series.emplace_back(bucket, value);
    }
    return response;
}

void MarketNode::serve(Transport& transport, std::chrono::milliseconds idle_timeout) {
    for (;;) {
        std::optional<std::string> line;
        try {
            line = transport.receive(idle_timeout);
        } catch (const Error&) {
            return; // peer closed
        }
        if (!line) return; // idle
        log_.received.push_back(*line);

        Message reply;
        try {
            reply = handle(decode_message(*line));
        } catch (const Error& e) {
            reply = ProtocolError{std::string(protocol_code::bad_request), e.what()};
        }
        std::string encoded = encode_message(reply);
        log_.sent.push_back(encoded);
        try {
            transport.send(encoded);
        } catch (const Error&) {
            return;
        }
    }
}

} // namespace farmlink
