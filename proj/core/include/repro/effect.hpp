//! \file
//! Replication of a baseline -> advanced improvement: per-topic deltas,
//! Effect Ratio, relative improvement and the ER / delta-RI plane.

#pragma once

#include "repro/effectiveness.hpp"
#include "repro/error.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repro {

enum class EffectMode {
    Replicability,   // re-created runs on the original collection; topics must coincide
    Reproducibility, // re-created runs on a new collection; only means cross over
};

std::string_view mode_name(EffectMode mode) noexcept;

/// Baseline (b) and advanced (a) scores for the original experiment and
/// the re-created one (b', a').
class EffectInput {
public:
    /// Validates topic alignment for `mode`; throws Error(Input) otherwise.
    EffectInput(EffectMode mode, TopicScoreVector b, TopicScoreVector a, TopicScoreVector b_prime,
                TopicScoreVector a_prime);

    EffectMode mode() const noexcept { return mode_; }
    const TopicScoreVector& baseline() const noexcept { return b_; }
    const TopicScoreVector& advanced() const noexcept { return a_; }
    const TopicScoreVector& baseline_prime() const noexcept { return b_prime_; }
    const TopicScoreVector& advanced_prime() const noexcept { return a_prime_; }

private:
    EffectMode mode_;
    TopicScoreVector b_;
    TopicScoreVector a_;
    TopicScoreVector b_prime_;
    TopicScoreVector a_prime_;
};

/// M_j(a) - M_j(b) for each topic; entries may be negative.
std::vector<double> per_topic_improvements(const TopicScoreVector& b, const TopicScoreVector& a);

/// mean(delta') / mean(delta). Throws Error(Undefined) if the original mean
/// improvement is zero.
double effect_ratio(std::span<const double> delta_orig, std::span<const double> delta_rep);
double effect_ratio(const EffectInput& input);

/// (mean(a) - mean(b)) / mean(b). Throws Error(Undefined) if mean(b) <= 0;
/// such a run scores 0 on every topic and should be dropped from the
/// comparison, like topics without relevant documents.
double relative_improvement(const TopicScoreVector& b, const TopicScoreVector& a);

/// RI - RI'. Positive when the re-created relative improvement is smaller.
double delta_ri(const EffectInput& input);

/// Quadrant of the ER / delta-RI plane. Points with an exact zero
/// coordinate are on a boundary and list the regions they separate.
struct Region {
    enum class Kind { R1 = 1, R2 = 2, R3 = 3, R4 = 4, Boundary = 0 };

    Kind kind = Kind::Boundary;
    std::vector<int> adjacent; // only for Boundary, ascending

    /// "1".."4" or "boundary".
    std::string label() const;
};

Region classify_region(double er, double delta_ri);

/// Euclidean distance from (er, delta_ri) to the ideal point (1, 0).
double distance_to_ideal(double er, double delta_ri);

struct EffectSummary {
    EffectMode mode = EffectMode::Replicability;
    std::string measure_id;
    std::vector<double> delta_orig;
    std::vector<double> delta_rep;
    double er = 0.0;
    double ri = 0.0;
    double ri_prime = 0.0;
    double delta_ri = 0.0;
    Region region;
    double distance = 0.0;
};

/// All effect measures at once. Out-of-range delta-RI (|delta-RI| > 1) is
/// reported through `warnings`, not rejected.
EffectSummary summarize_effect(const EffectInput& input, Warnings* warnings = nullptr);

struct PlotRow {
    std::string run;
    std::string measure;
    double er = 0.0;
    double delta_ri = 0.0;
    std::string region;
    double distance = 0.0;
};

struct LabeledSummary {
    std::string run;
    EffectSummary summary;
};

/// One row per summary, input order preserved.
std::vector<PlotRow> er_ri_plot_data(std::span<const LabeledSummary> summaries);

/// CSV with header `run,measure,er,delta_ri,region,dist`.
void write_plot_csv(std::ostream& out, std::span<const PlotRow> rows);

} // namespace repro
