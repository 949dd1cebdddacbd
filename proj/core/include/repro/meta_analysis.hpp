//! \file
//! Agreement between reproducibility measures: each measure ranks a set of
//! candidate runs, and Kendall's tau is computed between those rankings.

#pragma once

#include "repro/error.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repro {

/// How a measure's raw value relates to replication quality.
enum class MeasureFamily {
    Tau,         // higher is better
    Rbo,         // higher is better
    PValue,      // higher is better
    EffectRatio, // best at 1
    Rmse,        // lower is better
    DeltaArp,    // lower is better
};

/// Family of a measure id by prefix: "tau", "rbo", "p_value", "er",
/// "rmse", "delta_arp" (e.g. "rmse_AP", "p_value_P@10"). Throws
/// Error(Config) for anything else.
MeasureFamily family_of(std::string_view measure_id);

/// Maps a raw value onto a "badness" scale where lower means a better
/// replication: tau, RBO and p-values are negated, ER becomes |1 - ER|,
/// RMSE and delta-ARP pass through.
double consistency_transform(std::string_view measure_id, double raw);

struct MeasureRanking {
    std::string measure_id;
    std::vector<std::string> run_ids; // best first
    std::vector<double> badness;      // aligned with run_ids, non-decreasing
};

/// Ranks runs by transformed badness. Ties keep input order.
/// Throws Error(Input) on duplicate run ids or mismatched lengths.
MeasureRanking rank_runs(std::string_view measure_id, std::span<const std::string> run_ids,
                         std::span<const double> raw_values);

struct CorrelationMatrix {
    std::vector<std::string> measure_ids;
    std::vector<std::vector<double>> tau; // NaN where undefined (a measure ties every run)

    double at(std::string_view a, std::string_view b) const;
};

/// Kendall's tau (tie-corrected) between every pair of rankings, pairing
/// badness values by run id. The diagonal is 1. Throws Error(Input) if
/// fewer than two rankings are given or their run sets differ.
CorrelationMatrix correlation_matrix(std::span<const MeasureRanking> rankings);

enum class Agreement { Equivalent, Intermediate, Different, Undefined };

std::string_view agreement_name(Agreement a) noexcept;

/// > 0.9 equivalent, < 0.8 different, otherwise intermediate.
Agreement classify_agreement(double tau);

struct MeasurePairFlag {
    std::string first;
    std::string second;
    double tau = 0.0;
    Agreement agreement = Agreement::Undefined;
};

/// Upper-triangle pairs in matrix order.
std::vector<MeasurePairFlag> flag_equivalences(const CorrelationMatrix& matrix);

/// CSV: header row `measure,<id>...`, then one row per measure.
void write_matrix_csv(std::ostream& out, const CorrelationMatrix& matrix);

} // namespace repro
