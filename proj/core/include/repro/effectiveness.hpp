#pragma once

#include "repro/error.hpp"
#include "repro/trec_io.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repro {

enum class Measure { Precision, AveragePrecision, Ndcg };

enum class Gain { Linear, Exponential };

struct MeasureConfig {
    Measure measure = Measure::AveragePrecision;
    std::size_t cutoff = 1000;
    int relevance_threshold = 1;
    Gain gain = Gain::Linear;

    /// Canonical id: "P@10", "AP", "nDCG". A cutoff other than 1000 is
    /// spelled out for AP and nDCG ("AP@100", "nDCG@20").
    std::string id() const;

    /// Parses the forms produced by id(), case-insensitively. "ndcg_exp"
    /// selects exponential gain. Throws Error(Config) on anything else.
    static MeasureConfig parse(std::string_view text);

    MeasureConfig with_cutoff(std::size_t k) const;

    friend bool operator==(const MeasureConfig&, const MeasureConfig&) = default;
};

/// M(r): per-topic scores of one run under one measure, aligned with a
/// TopicSet. `mean()` is the run's ARP.
class TopicScoreVector {
public:
    TopicScoreVector(std::string measure_id, std::string run_tag, std::vector<std::string> topics,
                     std::vector<double> scores);

    const std::string& measure_id() const noexcept { return measure_id_; }
    const std::string& run_tag() const noexcept { return run_tag_; }
    const std::vector<std::string>& topics() const noexcept { return topics_; }
    std::span<const double> scores() const noexcept { return scores_; }
    std::size_t size() const noexcept { return scores_.size(); }
    double mean() const noexcept { return mean_; }

    /// Score of a topic; throws Error(Input) if absent.
    double at(std::string_view topic) const;

private:
    std::string measure_id_;
    std::string run_tag_;
    std::vector<std::string> topics_;
    std::vector<double> scores_;
    double mean_ = 0.0;
};

/// Fraction of the top-k documents with grade >= threshold. Lists shorter
/// than k count the missing positions as non-relevant.
double precision_at_k(RankedView ranking, const GradeMap& grades, std::size_t k, int threshold = 1);

/// Non-interpolated average precision over the top-k documents, normalized
/// by the total number of relevant documents R. Throws Error(Undefined)
/// when R == 0.
double average_precision(RankedView ranking, const GradeMap& grades,
                         std::size_t k = static_cast<std::size_t>(-1), int threshold = 1);

/// nDCG@k with discount 1/log2(i+1). Linear gain uses the grade itself,
/// exponential gain uses 2^grade - 1. Throws Error(Undefined) when the
/// ideal DCG is 0.
double ndcg_at_k(RankedView ranking, const GradeMap& grades, std::size_t k, Gain gain = Gain::Linear);

/// Dispatches on cfg.measure for a single topic.
double score_topic(RankedView ranking, const GradeMap& grades, const MeasureConfig& cfg);

/// Scores every topic of `topics`. A topic missing from the run scores 0
/// with a warning in lenient mode and throws Error(Input) in strict mode.
TopicScoreVector score_run(const Run& run, const Qrels& qrels, const TopicSet& topics,
                           const MeasureConfig& cfg, ParseMode mode = ParseMode::Lenient,
                           Warnings* warnings = nullptr);

} // namespace repro
