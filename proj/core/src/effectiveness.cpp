#include "repro/effectiveness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace repro {
namespace {

constexpr std::size_t kDefaultDepth = 1000;

int grade_of(const GradeMap& grades, const std::string& doc) {
    const auto it = grades.find(doc);
    return it == grades.end() ? 0 : it->second;
}

double gain_of(int grade, Gain gain) {
    if (grade <= 0) return 0.0;
    return gain == Gain::Linear ? static_cast<double>(grade) : std::exp2(grade) - 1.0;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::string MeasureConfig::id() const {
    switch (measure) {
        case Measure::Precision: return fmt::format("P@{}", cutoff);
        case Measure::AveragePrecision:
            return cutoff == kDefaultDepth ? std::string("AP") : fmt::format("AP@{}", cutoff);
        case Measure::Ndcg: {
            const char* name = gain == Gain::Linear ? "nDCG" : "nDCG_exp";
            return cutoff == kDefaultDepth ? std::string(name) : fmt::format("{}@{}", name, cutoff);
        }
    }
    return "?";
}

MeasureConfig MeasureConfig::parse(std::string_view text) {
    const std::string s = lower(text);
    const auto at = s.find('@');
    const std::string name = s.substr(0, at);

    MeasureConfig cfg;
    if (name == "p") {
        cfg.measure = Measure::Precision;
        cfg.cutoff = 10;
    } else if (name == "ap") {
        cfg.measure = Measure::AveragePrecision;
    } else if (name == "ndcg") {
        cfg.measure = Measure::Ndcg;
    } else if (name == "ndcg_exp") {
        cfg.measure = Measure::Ndcg;
        cfg.gain = Gain::Exponential;
    } else {
        throw Error(ErrorCategory::Config, fmt::format("unknown measure '{}'", text));
    }

    if (at != std::string::npos) {
        const std::string_view digits = std::string_view(s).substr(at + 1);
        std::size_t k = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || k == 0) {
            throw Error(ErrorCategory::Config, fmt::format("invalid cutoff in measure '{}'", text));
        }
        cfg.cutoff = k;
    }
    return cfg;
}

MeasureConfig MeasureConfig::with_cutoff(std::size_t k) const {
    if (k == 0) throw Error(ErrorCategory::Config, "cutoff must be >= 1");
    MeasureConfig cfg = *this;
    cfg.cutoff = k;
    return cfg;
}

TopicScoreVector::TopicScoreVector(std::string measure_id, std::string run_tag,
                                   std::vector<std::string> topics, std::vector<double> scores)
    : measure_id_(std::move(measure_id)),
      run_tag_(std::move(run_tag)),
      topics_(std::move(topics)),
      scores_(std::move(scores)) {
    if (topics_.size() != scores_.size()) {
        throw Error(ErrorCategory::Input, "topic and score counts differ");
    }
    if (!scores_.empty()) {
        mean_ = std::accumulate(scores_.begin(), scores_.end(), 0.0) / static_cast<double>(scores_.size());
    }
}

double TopicScoreVector::at(std::string_view topic) const {
    const auto it = std::find(topics_.begin(), topics_.end(), topic);
    if (it == topics_.end()) {
        throw Error(ErrorCategory::Input, fmt::format("topic {} not scored for run {}", topic, run_tag_));
    }
    return scores_[static_cast<std::size_t>(it - topics_.begin())];
}

double precision_at_k(RankedView ranking, const GradeMap& grades, std::size_t k, int threshold) {
    if (k == 0) throw Error(ErrorCategory::Config, "P@k requires k >= 1");
    const std::size_t depth = std::min(k, ranking.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (grade_of(grades, ranking[i].doc_id) >= threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

double average_precision(RankedView ranking, const GradeMap& grades, std::size_t k, int threshold) {
    const std::size_t relevant = static_cast<std::size_t>(std::count_if(
        grades.begin(), grades.end(), [threshold](const auto& kv) { return kv.second >= threshold; }));
    if (relevant == 0) throw Error(ErrorCategory::Undefined, "AP undefined: topic has no relevant documents");

    const std::size_t depth = std::min(k, ranking.size());
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
        if (grade_of(grades, ranking[i].doc_id) >= threshold) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant);
}

double ndcg_at_k(RankedView ranking, const GradeMap& grades, std::size_t k, Gain gain) {
    if (k == 0) throw Error(ErrorCategory::Config, "nDCG@k requires k >= 1");

    std::vector<int> ideal;
    ideal.reserve(grades.size());
    for (const auto& [doc, g] : grades) {
        if (g > 0) ideal.push_back(g);
    }
    std::sort(ideal.begin(), ideal.end(), std::greater<>());

    double idcg = 0.0;
    for (std::size_t i = 0; i < std::min(k, ideal.size()); ++i) {
        idcg += gain_of(ideal[i], gain) / std::log2(static_cast<double>(i) + 2.0);
    }
    if (idcg <= 0.0) throw Error(ErrorCategory::Undefined, "nDCG undefined: topic has no relevant documents");

    double dcg = 0.0;
    for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i) {
        dcg += gain_of(grade_of(grades, ranking[i].doc_id), gain) / std::log2(static_cast<double>(i) + 2.0);
    }
    return std::min(1.0, dcg / idcg);
}

double score_topic(RankedView ranking, const GradeMap& grades, const MeasureConfig& cfg) {
    switch (cfg.measure) {
        case Measure::Precision: return precision_at_k(ranking, grades, cfg.cutoff, cfg.relevance_threshold);
        case Measure::AveragePrecision:
            return average_precision(ranking, grades, cfg.cutoff, cfg.relevance_threshold);
        case Measure::Ndcg: return ndcg_at_k(ranking, grades, cfg.cutoff, cfg.gain);
    }
    return 0.0;
}

TopicScoreVector score_run(const Run& run, const Qrels& qrels, const TopicSet& topics,
                           const MeasureConfig& cfg, ParseMode mode, Warnings* warnings) {
    static const GradeMap kNoJudgments;
    std::vector<double> scores;
    scores.reserve(topics.size());
    for (const auto& topic : topics) {
        const RankedList* docs = run.find(topic);
        if (docs == nullptr) {
            if (mode == ParseMode::Strict) {
                throw Error(ErrorCategory::Input, fmt::format("run {} has no results for topic {}", run.tag, topic));
            }
            warn(warnings, fmt::format("run {} has no results for topic {}; scored as 0", run.tag, topic));
            scores.push_back(0.0);
            continue;
        }
        const GradeMap* grades = qrels.find(topic);
        scores.push_back(score_topic(*docs, grades != nullptr ? *grades : kNoJudgments, cfg));
    }
    return TopicScoreVector(cfg.id(), run.tag, topics.ids(), std::move(scores));
}

} // namespace repro
