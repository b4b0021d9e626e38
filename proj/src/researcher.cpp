#include "farmlink/researcher.hpp"

#include <algorithm>
#include <map>

#include "farmlink/error.hpp"
#include "farmlink/rng.hpp"

namespace farmlink {

ShareBundle fit_share_bundle(const FeatureTable& public_table, std::size_t rank) {
    ShareBundle bundle;
    bundle.standardization = fit_standardizer(public_table);
    FeatureTable standardized = apply_standardizer(bundle.standardization, public_table);
    bundle.model = fit_pca(standardized, rank);
    bundle.sensitivity = compute_sensitivity(project(bundle.model, standardized));
    return bundle;
}

ProjectedMatrix project_with_bundle(const ShareBundle& bundle, const FeatureTable& table) {
    return project(bundle.model, apply_standardizer(bundle.standardization, table));
}

namespace {

/// Sends one query and returns the decoded reply, or nullopt on timeout.
std::optional<Message> round_trip(Transport& transport, const Message& message,
                                  std::chrono::milliseconds timeout, SessionLog* log) {
    std::string encoded = encode_message(message);
    transport.send(encoded);
    if (log) log->sent.push_back(encoded);
    std::optional<std::string> line;
    try {
        line = transport.receive(timeout);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (!line) return std::nullopt;
    if (log) log->received.push_back(*line);
    return decode_message(*line);
}

} // namespace

SessionResult researcher_session(const ShareBundle& bundle, const ResearcherConfig& config,
                                 const std::vector<MarketLink>& links, SessionLog* log) {
    require(config.epsilon_total > 0.0, ErrorCode::invalid_argument,
            "epsilon_total must be positive");
    require(config.k_min >= 2 && config.k_max >= config.k_min, ErrorCode::invalid_argument,
            "need 2 <= k_min <= k_max");
    require(!links.empty(), ErrorCode::invalid_argument, "no market links");
    {
        std::vector<std::string> ids;
        for (const MarketLink& link : links) ids.push_back(link.market_id);
        std::sort(ids.begin(), ids.end());
        require(std::adjacent_find(ids.begin(), ids.end()) == ids.end(),
                ErrorCode::invalid_argument, "market ids must be unique");
    }

    SessionResult result;
    const std::string encoded = encode_message(
        ModelShare{bundle.model, bundle.standardization, bundle.sensitivity,
                   config.epsilon_total});
    for (const MarketLink& link : links) {
        link.transport->send(encoded);
        if (log) log->sent.push_back(encoded);
    }

    for (const MarketLink& link : links) {
        std::optional<std::string> line;
        try {
            line = link.transport->receive(config.timeout);
        } catch (const Error&) {
            line.reset();
        }
        if (!line) {
            result.missing_markets.push_back(link.market_id);
            continue;
        }
        if (log) log->received.push_back(*line);
        try {
            Message reply = decode_message(*line);
            auto* share = std::get_if<ProjectionShare>(&reply);
            if (share == nullptr || share->market_id != link.market_id ||
                share->scores.cols() != bundle.model.rank()) {
                result.excluded_markets.push_back(link.market_id);
                continue;
            }
            result.shares.push_back(std::move(*share));
        } catch (const Error&) {
            result.excluded_markets.push_back(link.market_id);
        }
    }
    require(!result.shares.empty(), ErrorCode::protocol,
            "no market produced a usable projection");

    // Canonical pooling order, so clustering does not depend on reply order.
    std::vector<std::pair<ClusterMember, const ProjectionShare*>> rows;
    for (const ProjectionShare& share : result.shares) {
        for (const std::string& p : share.pseudonyms) {
            rows.push_back({{share.market_id, p}, &share});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.first.market_id != b.first.market_id) {
            return a.first.market_id < b.first.market_id;
        }
        return a.first.pseudonym < b.first.pseudonym;
    });

    const std::size_t r = bundle.model.rank();
    result.pooled = Matrix(rows.size(), r);
    result.pooled_members.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ProjectionShare& share = *rows[i].second;
        auto it = std::find(share.pseudonyms.begin(), share.pseudonyms.end(),
                            rows[i].first.pseudonym);
        std::size_t src = std::size_t(it - share.pseudonyms.begin());
        for (std::size_t j = 0; j < r; ++j) result.pooled(i, j) = share.scores(src, j);
        result.pooled_members.push_back(rows[i].first);
    }

    SelectionReport& selection = result.selection;
    std::size_t chosen_k;
    if (config.k_min == config.k_max) {
        chosen_k = config.k_min;
    } else {
        ElbowCurve curve = select_k_elbow(result.pooled, config.k_min, config.k_max,
                                          config.seed, config.restarts);
        selection.ks = curve.ks;
        selection.wcss_values = curve.wcss_values;
        selection.weak_elbow = curve.weak_elbow;
        chosen_k = curve.chosen_k;
    }
    // Same per-k stream as the elbow scan, so this reruns the scanned model.
    KMeansModel model = kmeans(result.pooled, chosen_k,
                               Rng(config.seed).derive(chosen_k).seed(), config.restarts);
    selection.chosen_k = chosen_k;
    selection.wcss = model.wcss;
    selection.clusters.assign(chosen_k, {});
    for (std::size_t i = 0; i < model.labels.size(); ++i) {
        selection.clusters[model.labels[i]].push_back(result.pooled_members[i]);
    }
    return result;
}

GroupQueryResult query_aggregates(const std::vector<ClusterMember>& group,
                                  const std::string& attribute,
                                  const std::array<std::string, 2>& time_range,
                                  AggregateKind aggregate, const std::vector<MarketLink>& links,
                                  std::chrono::milliseconds timeout, SessionLog* log) {
    require(!group.empty(), ErrorCode::invalid_argument, "empty group");
    require(!attribute.empty(), ErrorCode::invalid_argument, "attribute must be non-empty");

    std::map<std::string, std::vector<std::string>> by_market;
    for (const ClusterMember& member : group) {
        by_market[member.market_id].push_back(member.pseudonym);
    }
    for (auto& [id, pseudonyms] : by_market) {
        std::sort(pseudonyms.begin(), pseudonyms.end());
        pseudonyms.erase(std::unique(pseudonyms.begin(), pseudonyms.end()), pseudonyms.end());
    }

    GroupQueryResult result;
    // bucket -> (summed value or sum-part, summed count-part)
    std::map<std::string, std::pair<double, double>> merged;
    std::size_t answered = 0;

    for (const auto& [market_id, pseudonyms] : by_market) {
        auto link_it = std::find_if(links.begin(), links.end(), [&](const MarketLink& l) {
            return l.market_id == market_id;
        });
        if (link_it == links.end()) {
            result.missing_markets.push_back(market_id);
            continue;
        }

        // Mean is fanned out as sum and count; dividing merged totals keeps
        // the cross-market mean exact.
        std::vector<AggregateKind> parts;
        if (aggregate == AggregateKind::mean) {
            parts = {AggregateKind::sum, AggregateKind::count};
        } else {
            parts = {aggregate};
        }

        bool refused = false;
        bool missing = false;
        std::map<std::string, std::pair<double, double>> partial;
        for (std::size_t part = 0; part < parts.size(); ++part) {
            AggregateQuery query{market_id, pseudonyms, attribute, time_range, parts[part]};
            std::optional<Message> reply =
                round_trip(*link_it->transport, query, timeout, log);
            if (!reply) {
                missing = true;
                break;
            }
            const auto* response = std::get_if<AggregateResponse>(&*reply);
            if (response == nullptr) {
                refused = true;
                break;
            }
            for (const auto& [bucket, value] : response->series) {
                auto& slot = partial[bucket];
                (part == 0 ? slot.first : slot.second) = value;
            }
        }
        if (missing) {
            result.missing_markets.push_back(market_id);
            continue;
        }
        if (refused) {
            result.refused_markets.push_back(market_id);
            continue;
        }
        answered += 1;
        for (const auto& [bucket, slot] : partial) {
            auto& total = merged[bucket];
            total.first += slot.first;
            total.second += slot.second;
        }
    }

    require(answered > 0, ErrorCode::protocol, "no market answered the aggregate query");

    std::vector<TimePoint> points;
    points.reserve(merged.size());
    for (const auto& [bucket, slot] : merged) {
        double value = slot.first;
        if (aggregate == AggregateKind::mean) {
            if (slot.second <= 0.0) continue;
            value = slot.first / slot.second;
        }
        points.push_back({bucket, value});
    }
    result.series = TimeSeries(std::move(points));
    return result;
}

} // namespace farmlink
