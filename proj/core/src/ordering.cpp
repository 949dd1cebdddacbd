#include "repro/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace repro {
namespace {

std::int64_t pairs(std::int64_t t) { return t * (t - 1) / 2; }

template <typename T>
std::int64_t tied_pairs(const std::vector<T>& sorted) {
    std::int64_t total = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        total += pairs(static_cast<std::int64_t>(j - i));
        i = j;
    }
    return total;
}

// Sorts `v` ascending and returns the number of strict inversions.
template <typename T>
std::int64_t sort_counting_inversions(std::vector<T>& v) {
    const std::size_t n = v.size();
    std::vector<T> buf(n);
    std::int64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n);
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    inversions += static_cast<std::int64_t>(mid - i);
                    buf[k++] = v[j++];
                } else {
                    buf[k++] = v[i++];
                }
            }
            while (i < mid) buf[k++] = v[i++];
            while (j < hi) buf[k++] = v[j++];
        }
        v.swap(buf);
    }
    return inversions;
}

template <typename T>
std::optional<double> knight_tau(std::span<const T> x, std::span<const T> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCategory::Input,
                    fmt::format("kendall_tau: lists differ in length ({} vs {})", x.size(), y.size()));
    }
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;

    std::vector<std::pair<T, T>> xy(n);
    for (std::size_t i = 0; i < n; ++i) xy[i] = {x[i], y[i]};
    std::sort(xy.begin(), xy.end());

    std::vector<T> xs(n);
    std::vector<T> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = xy[i].first;
        ys[i] = xy[i].second;
    }

    const std::int64_t n0 = pairs(static_cast<std::int64_t>(n));
    const std::int64_t tied_x = tied_pairs(xs);
    const std::int64_t tied_xy = tied_pairs(xy);
    const std::int64_t discordant = sort_counting_inversions(ys);
    const std::int64_t tied_y = tied_pairs(ys);

    const double denom = std::sqrt(static_cast<double>(n0 - tied_x) * static_cast<double>(n0 - tied_y));
    if (denom == 0.0) return std::nullopt;
    const auto numerator = static_cast<double>(n0 - tied_x - tied_y + tied_xy - 2 * discordant);
    return std::clamp(numerator / denom, -1.0, 1.0);
}

} // namespace

std::optional<double> kendall_tau(std::span<const double> x, std::span<const double> y) {
    if (std::any_of(x.begin(), x.end(), [](double v) { return std::isnan(v); }) ||
        std::any_of(y.begin(), y.end(), [](double v) { return std::isnan(v); })) {
        throw Error(ErrorCategory::Input, "kendall_tau: NaN in input");
    }
    return knight_tau(x, y);
}

std::optional<double> kendall_tau(std::span<const long> x, std::span<const long> y) {
    return knight_tau(x, y);
}

UnionPositions union_positions(RankedView r, RankedView s) {
    std::unordered_map<std::string_view, long> position;
    position.reserve(r.size() + s.size());
    long next = 1;
    for (const auto& d : r) position.try_emplace(d.doc_id, next++);
    for (const auto& d : s) {
        if (position.try_emplace(d.doc_id, next).second) ++next;
    }

    const std::size_t n = std::min(r.size(), s.size());
    UnionPositions out;
    out.original.reserve(n);
    out.replicated.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.original.push_back(position.at(r[i].doc_id));
        out.replicated.push_back(position.at(s[i].doc_id));
    }
    return out;
}

std::optional<double> tau_union(RankedView r, RankedView s, LengthPolicy policy) {
    if (policy == LengthPolicy::RequireEqual && r.size() != s.size()) {
        throw Error(ErrorCategory::Input,
                    fmt::format("tau_union: rankings differ in length ({} vs {})", r.size(), s.size()));
    }
    const UnionPositions p = union_positions(r, s);
    return kendall_tau(std::span<const long>(p.original), std::span<const long>(p.replicated));
}

IntersectionTau tau_intersection(RankedView r, RankedView s) {
    std::unordered_map<std::string_view, long> in_s;
    in_s.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) in_s.emplace(s[i].doc_id, static_cast<long>(i + 1));

    std::vector<long> x;
    std::vector<long> y;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (const auto it = in_s.find(r[i].doc_id); it != in_s.end()) {
            x.push_back(static_cast<long>(i + 1));
            y.push_back(it->second);
        }
    }
    if (x.size() < 2) {
        throw Error(ErrorCategory::Undefined,
                    fmt::format("tau_intersection: overlap too small ({} shared documents)", x.size()));
    }
    // distinct positions on both sides, so never degenerate
    return {*kendall_tau(std::span<const long>(x), std::span<const long>(y)), x.size()};
}

void RboParams::validate() const {
    if (!(phi > 0.0 && phi < 1.0)) throw Error(ErrorCategory::Config, fmt::format("RBO phi must be in (0,1), got {}", phi));
    if (depth == 0) throw Error(ErrorCategory::Config, "RBO depth must be >= 1");
}

double rbo(RankedView r, RankedView s, const RboParams& params) {
    params.validate();
    const std::size_t d = std::min(params.depth, std::max(r.size(), s.size()));

    std::unordered_set<std::string_view> seen_r;
    std::unordered_set<std::string_view> seen_s;
    seen_r.reserve(d);
    seen_s.reserve(d);
    std::size_t overlap = 0;
    double weight = 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const bool has_r = i < r.size();
        const bool has_s = i < s.size();
        if (has_r && has_s && r[i].doc_id == s[i].doc_id) {
            ++overlap;
            seen_r.insert(r[i].doc_id);
            seen_s.insert(s[i].doc_id);
        } else {
            if (has_r) {
                if (seen_s.count(r[i].doc_id) != 0) ++overlap;
                seen_r.insert(r[i].doc_id);
            }
            if (has_s) {
                if (seen_r.count(s[i].doc_id) != 0) ++overlap;
                seen_s.insert(s[i].doc_id);
            }
        }
        sum += weight * static_cast<double>(overlap) / static_cast<double>(i + 1);
        weight *= params.phi;
    }
    return (1.0 - params.phi) * sum;
}

TopicMean mean_over_topics(const std::map<std::string, std::optional<double>, TopicLess>& per_topic) {
    TopicMean out;
    double sum = 0.0;
    for (const auto& [topic, value] : per_topic) {
        if (value) {
            sum += *value;
            ++out.used;
        } else {
            ++out.excluded;
        }
    }
    if (out.used == 0) {
        throw Error(ErrorCategory::Undefined,
                    fmt::format("mean over topics undefined: {} of {} topics degenerate", out.excluded,
                                per_topic.size()));
    }
    out.mean = sum / static_cast<double>(out.used);
    return out;
}

RankedView topic_prefix(const Run& run, const std::string& topic, std::size_t cutoff) {
    const RankedList* docs = run.find(topic);
    if (docs == nullptr) return {};
    return RankedView(*docs).first(std::min(cutoff, docs->size()));
}

std::map<std::size_t, OrderingAtCutoff> ordering_at_cutoffs(const Run& r, const Run& s,
                                                            const TopicSet& topics,
                                                            std::span<const std::size_t> cutoffs,
                                                            const RboParams& params) {
    params.validate();
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end()) ||
        std::adjacent_find(cutoffs.begin(), cutoffs.end()) != cutoffs.end()) {
        throw Error(ErrorCategory::Config, "cutoffs must be strictly ascending");
    }
    if (!cutoffs.empty() && cutoffs.front() == 0) throw Error(ErrorCategory::Config, "cutoffs must be >= 1");

    std::map<std::size_t, OrderingAtCutoff> out;
    for (const std::size_t k : cutoffs) {
        std::map<std::string, std::optional<double>, TopicLess> taus;
        double rbo_sum = 0.0;
        for (const auto& topic : topics) {
            const RankedView a = topic_prefix(r, topic, k);
            const RankedView b = topic_prefix(s, topic, k);
            taus[topic] = tau_union(a, b);
            rbo_sum += rbo(a, b, params);
        }
        OrderingAtCutoff entry;
        entry.rbo = rbo_sum / static_cast<double>(topics.size());
        std::size_t used = 0;
        double tau_sum = 0.0;
        for (const auto& [topic, tau] : taus) {
            if (tau) {
                tau_sum += *tau;
                ++used;
            }
        }
        entry.tau_excluded = taus.size() - used;
        if (used > 0) entry.tau_union = tau_sum / static_cast<double>(used);
        out.emplace(k, entry);
    }
    return out;
}

} // namespace repro
