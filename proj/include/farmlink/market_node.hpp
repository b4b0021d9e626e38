#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "farmlink/message.hpp"
#include "farmlink/table.hpp"
#include "farmlink/timeseries.hpp"
#include "farmlink/transport.hpp"

namespace farmlink {

struct MarketConfig {
    std::string market_id;
    std::size_t min_group_size = 3;
    std::uint64_t seed = 0;
};

/// One data holder. Keeps its feature table and per-record series private;
/// everything that leaves goes through handle() and is a Message. Record
/// identifiers are re-minted per session so shared pseudonyms never reveal
/// the holder's own identifiers.
class MarketNode {
public:
    /// series_by_attribute: attribute name -> record identifier -> series.
    MarketNode(MarketConfig config, FeatureTable table,
               std::map<std::string, std::map<std::string, TimeSeries>> series_by_attribute);

    /// Replies to every incoming message with exactly one message. Protocol
    /// faults come back as ProtocolError; the session keeps going.
    Message handle(const Message& incoming);

    /// Serves a whole session: receive, handle, reply, until the peer closes
    /// or nothing arrives for idle_timeout.
    void serve(Transport& transport,
               std::chrono::milliseconds idle_timeout = std::chrono::milliseconds(10000));

    const SessionLog& log() const { return log_; }
    const MarketConfig& config() const { return config_; }

    /// Session pseudonyms in table row order.
    const std::vector<std::string>& session_pseudonyms() const { return minted_; }

private:
    Message handle_model_share(const ModelShare& share);
    Message handle_query(const AggregateQuery& query);

    MarketConfig config_;
    FeatureTable table_;
    std::map<std::string, std::map<std::string, TimeSeries>> series_;
    std::vector<std::string> minted_;              // row order
    std::map<std::string, std::size_t> minted_row_; // session pseudonym -> row
    bool model_received_ = false;
    SessionLog log_;
};

} // namespace farmlink
