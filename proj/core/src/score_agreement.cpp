#include "repro/score_agreement.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace repro {

ScorePair::ScorePair(TopicScoreVector original, TopicScoreVector replicated)
    : original_(std::move(original)), replicated_(std::move(replicated)) {
    if (original_.measure_id() != replicated_.measure_id()) {
        throw Error(ErrorCategory::Input, fmt::format("score vectors use different measures ({} vs {})",
                                                      original_.measure_id(), replicated_.measure_id()));
    }
    if (original_.topics() != replicated_.topics()) {
        throw Error(ErrorCategory::Input,
                    fmt::format("score vectors for {} and {} are not aligned on the same topics",
                                original_.run_tag(), replicated_.run_tag()));
    }
}

ArpDelta delta_arp(const ScorePair& p) {
    const double d = p.original().mean() - p.replicated().mean();
    return {d, std::abs(d)};
}

double rmse(const ScorePair& p) {
    const auto a = p.original().scores();
    const auto b = p.replicated().scores();
    if (a.empty()) throw Error(ErrorCategory::Input, "rmse of empty score vectors");
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

std::map<std::size_t, double> rmse_at_cutoffs(const Run& original, const Run& replicated, const Qrels& qrels,
                                              const TopicSet& topics, const MeasureConfig& measure,
                                              std::span<const std::size_t> cutoffs) {
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end()) ||
        std::adjacent_find(cutoffs.begin(), cutoffs.end()) != cutoffs.end()) {
        throw Error(ErrorCategory::Config, "cutoffs must be strictly ascending");
    }
    std::map<std::size_t, double> out;
    for (const std::size_t k : cutoffs) {
        const MeasureConfig cfg = measure.with_cutoff(k);
        auto a = score_run(original, qrels, topics, cfg);
        auto b = score_run(replicated, qrels, topics, cfg);
        out.emplace(k, rmse(ScorePair(std::move(a), std::move(b))));
    }
    return out;
}

} // namespace repro
