#include "repro/effect.hpp"

#include "csv.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

namespace repro {
namespace {

double mean_of(std::span<const double> v) {
    if (v.empty()) throw Error(ErrorCategory::Input, "mean of empty vector");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_aligned(const TopicScoreVector& x, const TopicScoreVector& y) {
    if (x.topics() != y.topics()) {
        throw Error(ErrorCategory::Input,
                    fmt::format("runs {} and {} are not aligned on the same topics", x.run_tag(), y.run_tag()));
    }
    if (x.measure_id() != y.measure_id()) {
        throw Error(ErrorCategory::Input,
                    fmt::format("runs {} and {} scored with different measures", x.run_tag(), y.run_tag()));
    }
}

} // namespace

std::string_view mode_name(EffectMode mode) noexcept {
    return mode == EffectMode::Replicability ? "replicability" : "reproducibility";
}

EffectInput::EffectInput(EffectMode mode, TopicScoreVector b, TopicScoreVector a, TopicScoreVector b_prime,
                         TopicScoreVector a_prime)
    : mode_(mode), b_(std::move(b)), a_(std::move(a)), b_prime_(std::move(b_prime)), a_prime_(std::move(a_prime)) {
    require_aligned(b_, a_);
    require_aligned(b_prime_, a_prime_);
    if (b_.measure_id() != b_prime_.measure_id()) {
        throw Error(ErrorCategory::Input, "original and re-created experiments use different measures");
    }
    if (mode_ == EffectMode::Replicability && b_.topics() != b_prime_.topics()) {
        throw Error(ErrorCategory::Input, "replicability requires identical topic sets for both experiments");
    }
}

std::vector<double> per_topic_improvements(const TopicScoreVector& b, const TopicScoreVector& a) {
    require_aligned(b, a);
    std::vector<double> delta(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) delta[j] = a.scores()[j] - b.scores()[j];
    return delta;
}

double effect_ratio(std::span<const double> delta_orig, std::span<const double> delta_rep) {
    const double denom = mean_of(delta_orig);
    if (denom == 0.0) throw Error(ErrorCategory::Undefined, "undefined ER: original mean improvement is 0");
    return mean_of(delta_rep) / denom;
}

double effect_ratio(const EffectInput& input) {
    const auto d = per_topic_improvements(input.baseline(), input.advanced());
    const auto d_prime = per_topic_improvements(input.baseline_prime(), input.advanced_prime());
    return effect_ratio(d, d_prime);
}

double relative_improvement(const TopicScoreVector& b, const TopicScoreVector& a) {
    require_aligned(b, a);
    const double base = b.mean();
    if (!(base > 0.0)) {
        throw Error(ErrorCategory::Undefined,
                    fmt::format("RI undefined: baseline {} scores 0 on every topic (remove runs that do not have "
                                "any relevant document)",
                                b.run_tag()));
    }
    return (a.mean() - base) / base;
}

double delta_ri(const EffectInput& input) {
    return relative_improvement(input.baseline(), input.advanced()) -
           relative_improvement(input.baseline_prime(), input.advanced_prime());
}

std::string Region::label() const {
    return kind == Kind::Boundary ? std::string("boundary") : std::to_string(static_cast<int>(kind));
}

Region classify_region(double er, double delta_ri) {
    if (!std::isfinite(er) || !std::isfinite(delta_ri)) {
        throw Error(ErrorCategory::Input, "classify_region requires finite coordinates");
    }
    Region r;
    if (er > 0 && delta_ri > 0) r.kind = Region::Kind::R1;
    else if (er < 0 && delta_ri > 0) r.kind = Region::Kind::R2;
    else if (er < 0 && delta_ri < 0) r.kind = Region::Kind::R3;
    else if (er > 0 && delta_ri < 0) r.kind = Region::Kind::R4;
    else if (er == 0 && delta_ri == 0) r.adjacent = {1, 2, 3, 4};
    else if (er == 0) r.adjacent = delta_ri > 0 ? std::vector<int>{1, 2} : std::vector<int>{3, 4};
    else r.adjacent = er > 0 ? std::vector<int>{1, 4} : std::vector<int>{2, 3};
    return r;
}

double distance_to_ideal(double er, double delta_ri) { return std::hypot(er - 1.0, delta_ri); }

EffectSummary summarize_effect(const EffectInput& input, Warnings* warnings) {
    EffectSummary s;
    s.mode = input.mode();
    s.measure_id = input.baseline().measure_id();
    s.delta_orig = per_topic_improvements(input.baseline(), input.advanced());
    s.delta_rep = per_topic_improvements(input.baseline_prime(), input.advanced_prime());
    s.er = effect_ratio(s.delta_orig, s.delta_rep);
    s.ri = relative_improvement(input.baseline(), input.advanced());
    s.ri_prime = relative_improvement(input.baseline_prime(), input.advanced_prime());
    s.delta_ri = s.ri - s.ri_prime;
    s.region = classify_region(s.er, s.delta_ri);
    s.distance = distance_to_ideal(s.er, s.delta_ri);
    if (std::abs(s.delta_ri) > 1.0) {
        warn(warnings, fmt::format("{}: delta RI = {} lies outside [-1, 1]", s.measure_id, s.delta_ri));
    }
    return s;
}

std::vector<PlotRow> er_ri_plot_data(std::span<const LabeledSummary> summaries) {
    std::vector<PlotRow> rows;
    rows.reserve(summaries.size());
    for (const auto& [run, s] : summaries) {
        rows.push_back(PlotRow{run, s.measure_id, s.er, s.delta_ri, s.region.label(), s.distance});
    }
    return rows;
}

void write_plot_csv(std::ostream& out, std::span<const PlotRow> rows) {
    out << "run,measure,er,delta_ri,region,dist\n";
    for (const auto& r : rows) {
        out << detail::csv_field(r.run) << ',' << detail::csv_field(r.measure) << ',' << detail::csv_number(r.er)
            << ',' << detail::csv_number(r.delta_ri) << ',' << r.region << ',' << detail::csv_number(r.distance)
            << '\n';
    }
}

} // namespace repro
