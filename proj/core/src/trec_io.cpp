#include "repro/trec_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace repro {
namespace {

bool all_digits(std::string_view s) noexcept {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip_leading_zeros(std::string_view s) noexcept {
    const auto pos = s.find_first_not_of('0');
    return pos == std::string_view::npos ? s.substr(s.size() - 1) : s.substr(pos);
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
    // from_chars rejects a leading '+', which some tools emit
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    T value{};
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) return std::nullopt;
    }
    return value;
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::Io, fmt::format("cannot open '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool canonical_before(const RankedDoc& a, const RankedDoc& b) noexcept {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id > b.doc_id;
}

} // namespace

bool TopicLess::operator()(std::string_view lhs, std::string_view rhs) const noexcept {
    const bool ln = all_digits(lhs);
    const bool rn = all_digits(rhs);
    if (ln && rn) {
        const auto l = strip_leading_zeros(lhs);
        const auto r = strip_leading_zeros(rhs);
        if (l.size() != r.size()) return l.size() < r.size();
        if (l != r) return l < r;
        return lhs < rhs;
    }
    if (ln != rn) return ln;
    return lhs < rhs;
}

const RankedList* Run::find(std::string_view topic) const {
    const auto it = topics.find(topic);
    return it == topics.end() ? nullptr : &it->second;
}

int Qrels::grade(std::string_view topic, std::string_view doc_id) const {
    const GradeMap* grades = find(topic);
    if (grades == nullptr) return 0;
    const auto it = grades->find(std::string(doc_id));
    return it == grades->end() ? 0 : it->second;
}

const GradeMap* Qrels::find(std::string_view topic) const {
    const auto it = topics.find(topic);
    return it == topics.end() ? nullptr : &it->second;
}

std::size_t Qrels::relevant_count(std::string_view topic, int threshold) const {
    const GradeMap* grades = find(topic);
    if (grades == nullptr) return 0;
    return static_cast<std::size_t>(std::count_if(
        grades->begin(), grades->end(), [threshold](const auto& kv) { return kv.second >= threshold; }));
}

TopicSet::TopicSet(std::vector<std::string> ids) : ids_(std::move(ids)) {
    if (ids_.empty()) throw Error(ErrorCategory::Input, "no comparable topics");
}

bool TopicSet::contains(std::string_view topic) const {
    return std::find(ids_.begin(), ids_.end(), topic) != ids_.end();
}

void canonicalize(Run& run) {
    for (auto& [topic, docs] : run.topics) {
        std::sort(docs.begin(), docs.end(), canonical_before);
        for (std::size_t i = 0; i < docs.size(); ++i) docs[i].rank = static_cast<long>(i + 1);
    }
}

Run parse_run(std::istream& input, ParseMode mode, Warnings* warnings) {
    const bool strict = mode == ParseMode::Strict;
    Run run;
    bool have_tag = false;
    bool warned_tag = false;
    // topic -> doc -> (index into list, line of first occurrence)
    std::map<std::string, std::unordered_map<std::string, std::pair<std::size_t, std::size_t>>,
             TopicLess>
        seen;

    auto reject = [&](std::size_t line_no, const std::string& why) {
        if (strict) throw ParseError(line_no, why);
        warn(warnings, fmt::format("line {}: {}; line skipped", line_no, why));
    };

    std::string line;
    std::size_t line_no = 0;
    std::size_t records = 0;
    while (std::getline(input, line)) {
        ++line_no;
        const auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != 6) {
            reject(line_no, fmt::format("expected 6 columns, found {}", fields.size()));
            continue;
        }
        const auto rank = parse_number<long>(fields[3]);
        if (!rank || *rank < 0) {
            reject(line_no, fmt::format("invalid rank '{}'", fields[3]));
            continue;
        }
        const auto score = parse_number<double>(fields[4]);
        if (!score) {
            reject(line_no, fmt::format("non-numeric score '{}'", fields[4]));
            continue;
        }

        const std::string topic(fields[0]);
        const std::string doc(fields[2]);
        if (!have_tag) {
            run.tag = std::string(fields[5]);
            have_tag = true;
        } else if (fields[5] != run.tag && !warned_tag) {
            warn(warnings, fmt::format("line {}: run tag '{}' differs from '{}'", line_no, fields[5],
                                       run.tag));
            warned_tag = true;
        }

        auto& docs = run.topics[topic];
        auto& topic_seen = seen[topic];
        if (const auto it = topic_seen.find(doc); it != topic_seen.end()) {
            const auto [index, first_line] = it->second;
            if (strict) {
                throw ParseError(line_no, fmt::format("duplicate document '{}' in topic {} (first seen on line {})",
                                                      doc, topic, first_line));
            }
            if (*score > docs[index].score) docs[index].score = *score;
            warn(warnings, fmt::format("line {}: duplicate document '{}' in topic {}; kept score {}", line_no,
                                       doc, topic, docs[index].score));
            ++records;
            continue;
        }
        topic_seen.emplace(doc, std::make_pair(docs.size(), line_no));
        docs.push_back(RankedDoc{doc, *rank, *score});
        ++records;
    }

    if (records == 0) throw ParseError(0, "empty run input");
    canonicalize(run);
    return run;
}

Run parse_run(std::string_view text, ParseMode mode, Warnings* warnings) {
    std::istringstream in{std::string(text)};
    return parse_run(in, mode, warnings);
}

Run load_run(const std::filesystem::path& path, ParseMode mode, Warnings* warnings) {
    std::istringstream in(read_all(path));
    try {
        return parse_run(in, mode, warnings);
    } catch (const ParseError& e) {
        throw e.in_source(path.string());
    }
}

Qrels parse_qrels(std::istream& input, Warnings* warnings) {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    std::size_t records = 0;
    while (std::getline(input, line)) {
        ++line_no;
        const auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != 4) {
            throw ParseError(line_no, fmt::format("expected 4 columns, found {}", fields.size()));
        }
        auto grade = parse_number<int>(fields[3]);
        if (!grade) throw ParseError(line_no, fmt::format("non-integer grade '{}'", fields[3]));
        if (*grade < 0) {
            warn(warnings, fmt::format("line {}: negative grade {} clamped to 0", line_no, *grade));
            grade = 0;
        }
        auto& grades = qrels.topics[std::string(fields[0])];
        const auto [it, inserted] = grades.insert_or_assign(std::string(fields[2]), *grade);
        if (!inserted) {
            warn(warnings, fmt::format("line {}: repeated judgment for '{}' in topic {}; keeping grade {}",
                                       line_no, fields[2], fields[0], *grade));
        }
        ++records;
    }
    if (records == 0) throw ParseError(0, "empty qrels input");
    return qrels;
}

Qrels parse_qrels(std::string_view text, Warnings* warnings) {
    std::istringstream in{std::string(text)};
    return parse_qrels(in, warnings);
}

Qrels load_qrels(const std::filesystem::path& path, Warnings* warnings) {
    std::istringstream in(read_all(path));
    try {
        return parse_qrels(in, warnings);
    } catch (const ParseError& e) {
        throw e.in_source(path.string());
    }
}

void write_run(std::ostream& out, const Run& run) {
    for (const auto& [topic, docs] : run.topics) {
        for (const auto& d : docs) {
            out << fmt::format("{} Q0 {} {} {} {}\n", topic, d.doc_id, d.rank, d.score, run.tag);
        }
    }
}

TopicSet topic_intersection(const Run& a, const Run& b, const Qrels& qrels) {
    std::vector<std::string> ids;
    for (const auto& [topic, docs] : a.topics) {
        if (b.find(topic) != nullptr && qrels.relevant_count(topic) > 0) ids.push_back(topic);
    }
    return TopicSet(std::move(ids));
}

TopicSet judged_topics(const Run& run, const Qrels& qrels) {
    return topic_intersection(run, run, qrels);
}

} // namespace repro
