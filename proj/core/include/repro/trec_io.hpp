//! \file
//! TREC run and qrels parsing.
//!
//! Runs are canonicalized on load: documents within a topic are ordered by
//! score descending, ties broken by doc-id descending (the trec_eval
//! convention), and re-ranked from 1. Ranks present in the file are ignored.

#pragma once

#include "repro/error.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace repro {

/// Orders topic ids numerically when both are plain decimal numbers, and
/// lexicographically otherwise. Numeric ids sort before non-numeric ones.
struct TopicLess {
    bool operator()(std::string_view lhs, std::string_view rhs) const noexcept;
    using is_transparent = void;
};

struct RankedDoc {
    std::string doc_id;
    long rank = 0;
    double score = 0.0;

    friend bool operator==(const RankedDoc&, const RankedDoc&) = default;
};

using RankedList = std::vector<RankedDoc>;
using RankedView = std::span<const RankedDoc>;

struct Run {
    std::string tag;
    std::map<std::string, RankedList, TopicLess> topics;

    const RankedList* find(std::string_view topic) const;

    friend bool operator==(const Run&, const Run&) = default;
};

using GradeMap = std::unordered_map<std::string, int>;

struct Qrels {
    std::map<std::string, GradeMap, TopicLess> topics;

    /// Grade of (topic, doc); unjudged documents are grade 0.
    int grade(std::string_view topic, std::string_view doc_id) const;

    /// Judgments for a topic, or nullptr when the topic has none.
    const GradeMap* find(std::string_view topic) const;

    /// Number of documents with grade >= threshold.
    std::size_t relevant_count(std::string_view topic, int threshold = 1) const;
};

/// Ordered, non-empty set of topic ids.
class TopicSet {
public:
    explicit TopicSet(std::vector<std::string> ids);

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    std::size_t size() const noexcept { return ids_.size(); }
    bool contains(std::string_view topic) const;

    auto begin() const noexcept { return ids_.begin(); }
    auto end() const noexcept { return ids_.end(); }

    friend bool operator==(const TopicSet&, const TopicSet&) = default;

private:
    std::vector<std::string> ids_;
};

enum class ParseMode { Strict, Lenient };

/// Parses the 6-column run format `topic Q0 docid rank score tag`.
///
/// Strict mode rejects malformed lines and duplicate documents. Lenient mode
/// skips malformed lines and keeps the higher-scored copy of a duplicate,
/// recording a warning either way. Empty input is an error in both modes.
Run parse_run(std::istream& input, ParseMode mode = ParseMode::Strict,
              Warnings* warnings = nullptr);
Run parse_run(std::string_view text, ParseMode mode = ParseMode::Strict,
              Warnings* warnings = nullptr);
Run load_run(const std::filesystem::path& path, ParseMode mode = ParseMode::Strict,
             Warnings* warnings = nullptr);

/// Parses the 4-column qrels format `topic iter docid grade`.
/// Repeated pairs keep the last grade; negative grades clamp to 0.
Qrels parse_qrels(std::istream& input, Warnings* warnings = nullptr);
Qrels parse_qrels(std::string_view text, Warnings* warnings = nullptr);
Qrels load_qrels(const std::filesystem::path& path, Warnings* warnings = nullptr);

/// Sorts every topic into canonical order and renumbers ranks from 1.
void canonicalize(Run& run);

/// Writes a run in 6-column format using its canonical ranks.
void write_run(std::ostream& out, const Run& run);

/// Topics retrieved by both runs that have at least one relevant judgment.
/// Throws Error(Input) when the result is empty.
TopicSet topic_intersection(const Run& a, const Run& b, const Qrels& qrels);

/// Topics of `run` that have at least one relevant judgment.
TopicSet judged_topics(const Run& run, const Qrels& qrels);

} // namespace repro
