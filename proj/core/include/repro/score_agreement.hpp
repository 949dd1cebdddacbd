#pragma once

#include "repro/effectiveness.hpp"
#include "repro/trec_io.hpp"

#include <cstddef>
#include <map>
#include <span>

namespace repro {

/// Original and re-created score vectors over the same topics and measure.
class ScorePair {
public:
    /// Throws Error(Input) unless topics and measure ids match exactly.
    ScorePair(TopicScoreVector original, TopicScoreVector replicated);

    const TopicScoreVector& original() const noexcept { return original_; }
    const TopicScoreVector& replicated() const noexcept { return replicated_; }

private:
    TopicScoreVector original_;
    TopicScoreVector replicated_;
};

struct ArpDelta {
    double signed_delta = 0.0; // mean(original) - mean(replicated)
    double absolute = 0.0;
};

ArpDelta delta_arp(const ScorePair& p);

/// Root mean squared per-topic difference.
double rmse(const ScorePair& p);

/// RMSE with both runs re-scored at each cutoff. Cutoffs must be ascending.
std::map<std::size_t, double> rmse_at_cutoffs(const Run& original, const Run& replicated, const Qrels& qrels,
                                              const TopicSet& topics, const MeasureConfig& measure,
                                              std::span<const std::size_t> cutoffs);

} // namespace repro
