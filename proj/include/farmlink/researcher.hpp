#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "farmlink/kmeans.hpp"
#include "farmlink/ldp.hpp"
#include "farmlink/message.hpp"
#include "farmlink/pca.hpp"
#include "farmlink/table.hpp"
#include "farmlink/timeseries.hpp"
#include "farmlink/transport.hpp"

namespace farmlink {

/// Everything the researcher derives from the public reference table and
/// ships to every market: standardization constants, the projection model,
/// and per-component sensitivities measured on the reference projection.
struct ShareBundle {
    StandardizationParams standardization;
    PcaModel model;
    ComponentSensitivity sensitivity;
};

ShareBundle fit_share_bundle(const FeatureTable& public_table, std::size_t rank);

/// Standardize with the bundle's constants, then project.
ProjectedMatrix project_with_bundle(const ShareBundle& bundle, const FeatureTable& table);

struct ResearcherConfig {
    double epsilon_total = 0.0;
    std::size_t k_min = 2;
    std::size_t k_max = 2; // k_min == k_max skips the elbow scan
    std::uint64_t seed = 0;
    std::size_t restarts = 10;
    std::chrono::milliseconds timeout{10000};
};

/// A market the researcher can reach. The transport is owned by the caller.
struct MarketLink {
    std::string market_id;
    Transport* transport = nullptr;
};

struct ClusterMember {
    std::string market_id;
    std::string pseudonym;
};

struct SelectionReport {
    std::vector<std::size_t> ks; // empty when the elbow scan was skipped
    std::vector<double> wcss_values;
    std::size_t chosen_k = 0;
    bool weak_elbow = false;
    double wcss = 0.0;
    std::vector<std::vector<ClusterMember>> clusters;
};

struct SessionResult {
    SelectionReport selection;
    std::vector<std::string> missing_markets;  // no reply within the timeout
    std::vector<std::string> excluded_markets; // replied but unusable
    std::vector<ProjectionShare> shares;       // accepted, one per market
    Matrix pooled;                             // rows sorted by (market, pseudonym)
    std::vector<ClusterMember> pooled_members; // parallel to pooled rows
};

/// Broadcasts the bundle, collects perturbed projections, pools them in a
/// canonical order and clusters. Proceeds with whatever subset of markets
/// answered usably; throws only when none did.
SessionResult researcher_session(const ShareBundle& bundle, const ResearcherConfig& config,
                                 const std::vector<MarketLink>& links, SessionLog* log = nullptr);

struct GroupQueryResult {
    TimeSeries series;
    std::vector<std::string> refused_markets;
    std::vector<std::string> missing_markets;
};

/// One aggregate series for a cluster's members, fanned out per market and
/// merged by bucket. Mean is fetched as sum and count so the merge across
/// markets stays exact. Markets that refuse are reported, not fatal, unless
/// every market refused.
GroupQueryResult query_aggregates(const std::vector<ClusterMember>& group,
                                  const std::string& attribute,
                                  const std::array<std::string, 2>& time_range,
                                  AggregateKind aggregate, const std::vector<MarketLink>& links,
                                  std::chrono::milliseconds timeout, SessionLog* log = nullptr);

} // namespace farmlink
