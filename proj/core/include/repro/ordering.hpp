//! \file
//! Document-ordering agreement between an original and a re-created run.

#pragma once

#include "repro/error.hpp"
#include "repro/trec_io.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace repro {

/// Kendall's tau with tie correction,
///
///     (P - Q) / sqrt((P + Q + U) * (P + Q + V))
///
/// where P/Q count concordant/discordant pairs and U/V count pairs tied only
/// in x / only in y. Pairs tied in both lists are ignored. Runs in
/// O(n log n).
///
/// Returns nullopt when the coefficient is undefined: fewer than two
/// entries, or every pair tied in one of the lists. Throws Error(Input) if
/// the lengths differ.
std::optional<double> kendall_tau(std::span<const double> x, std::span<const double> y);

/// Integer rank-position overload.
std::optional<double> kendall_tau(std::span<const long> x, std::span<const long> y);

/// Rank positions of two rankings inside their union (1-based). The union
/// lists r's documents in order followed by s's unseen documents in order.
/// The pairing covers the common prefix min(|r|, |s|).
struct UnionPositions {
    std::vector<long> original;
    std::vector<long> replicated;
};

UnionPositions union_positions(RankedView r, RankedView s);

enum class LengthPolicy {
    CommonPrefix, // pair the first min(|r|, |s|) positions
    RequireEqual, // throw Error(Input) on unequal lengths
};

/// Kendall's tau over union rank positions.
std::optional<double> tau_union(RankedView r, RankedView s,
                                LengthPolicy policy = LengthPolicy::CommonPrefix);

struct IntersectionTau {
    double tau = 0.0;
    std::size_t overlap = 0;
};

/// Kendall's tau over the relative order of documents retrieved by both
/// runs. Throws Error(Undefined) when fewer than two documents are shared.
IntersectionTau tau_intersection(RankedView r, RankedView s);

struct RboParams {
    double phi = 0.8;
    std::size_t depth = 1000;

    void validate() const;
};

/// Truncated rank-biased overlap,
///
///     (1 - phi) * sum_{i=1..d} phi^(i-1) * |r[:i] ∩ s[:i]| / i,
///
/// with d = min(depth, max(|r|, |s|)). No residual or extrapolation term.
double rbo(RankedView r, RankedView s, const RboParams& params);

struct TopicMean {
    double mean = 0.0;
    std::size_t used = 0;
    std::size_t excluded = 0;
};

/// Arithmetic mean over topics, skipping undefined (nullopt) entries.
/// Throws Error(Undefined) when every entry is undefined or the map is empty.
TopicMean mean_over_topics(const std::map<std::string, std::optional<double>, TopicLess>& per_topic);

struct OrderingAtCutoff {
    std::optional<double> tau_union; // nullopt when undefined on every topic
    std::size_t tau_excluded = 0;
    double rbo = 0.0;
};

/// Mean tau-union and RBO after truncating both runs to each cutoff.
/// Cutoffs must be ascending and positive.
std::map<std::size_t, OrderingAtCutoff> ordering_at_cutoffs(const Run& r, const Run& s,
                                                            const TopicSet& topics,
                                                            std::span<const std::size_t> cutoffs,
                                                            const RboParams& params);

/// Truncated view of a topic's ranking, or an empty view if absent.
RankedView topic_prefix(const Run& run, const std::string& topic,
                        std::size_t cutoff = static_cast<std::size_t>(-1));

} // namespace repro
