//! \file
//! Comparison reports for replicability, reproducibility and measure
//! correlation, plus their JSON / CSV / table serializations.
//!
//! Fixed CSV headers:
//!
//!   replicability:
//!     mode,measure,run_original,run_replicated,topics,arp_original,arp_replicated,
//!     delta_arp,delta_arp_signed,rmse,t_stat,dof,p_value,tau_union,
//!     tau_intersection,tau_overlap,rbo,er,ri,ri_prime,delta_ri,region
//!
//!   reproducibility:
//!     mode,measure,baseline_original,advanced_original,baseline_reproduced,
//!     advanced_reproduced,topics_original,topics_reproduced,arp_baseline_original,
//!     arp_advanced_original,arp_baseline_reproduced,arp_advanced_reproduced,
//!     t_baseline,p_value_baseline,t_advanced,p_value_advanced,er,ri,ri_prime,
//!     delta_ri,region
//!
//! Cells that do not apply are left empty.

#pragma once

#include "repro/effect.hpp"
#include "repro/effectiveness.hpp"
#include "repro/error.hpp"
#include "repro/meta_analysis.hpp"
#include "repro/ordering.hpp"
#include "repro/score_agreement.hpp"
#include "repro/stat_tests.hpp"
#include "repro/trec_io.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repro {

extern const char* const kReplicabilityCsvHeader;
extern const char* const kReproducibilityCsvHeader;

/// P@10, AP and nDCG at depth 1000.
std::vector<MeasureConfig> default_measures();

struct ComparisonOptions {
    std::vector<MeasureConfig> measures = default_measures();
    std::vector<std::size_t> cutoffs; // optional sweep for ordering and RMSE
    RboParams rbo;
    bool strict = false;

    /// Rejects duplicate measures and invalid RBO / cutoff settings.
    void validate() const;
};

struct InputDigest {
    std::string role;
    std::string path;
    std::string sha256;
};

struct Provenance {
    std::vector<InputDigest> inputs;
    std::optional<std::string> generated_at; // only with --provenance
};

struct OrderingBlock {
    std::optional<double> tau_union;
    std::size_t tau_union_excluded = 0;
    std::optional<double> tau_intersection;
    double mean_overlap = 0.0;
    std::size_t tau_intersection_excluded = 0;
    double rbo = 0.0;
    std::map<std::size_t, OrderingAtCutoff> at_cutoffs;
};

struct EffectBlock {
    double arp_baseline_original = 0.0;
    double arp_advanced_original = 0.0;
    double arp_baseline_recreated = 0.0;
    double arp_advanced_recreated = 0.0;
    std::size_t topics_original = 0;
    std::size_t topics_recreated = 0;
    EffectSummary summary;
};

struct ReplicationMeasureBlock {
    std::string measure_id;
    double arp_original = 0.0;
    double arp_replicated = 0.0;
    ArpDelta delta;
    double rmse = 0.0;
    TestResult test;
    std::map<std::size_t, double> rmse_at_cutoffs;
    std::optional<EffectBlock> effect;
};

struct ReproductionMeasureBlock {
    std::string measure_id;
    double arp_baseline_original = 0.0;
    double arp_advanced_original = 0.0;
    double arp_baseline_reproduced = 0.0;
    double arp_advanced_reproduced = 0.0;
    TestResult baseline_test; // b vs b', unpaired
    TestResult advanced_test; // a vs a', unpaired
    std::optional<EffectBlock> effect; // absent when ER is undefined
};

struct ComparisonReport {
    EffectMode mode = EffectMode::Replicability;
    std::map<std::string, std::string> runs; // role -> run tag
    std::size_t topics = 0;                  // topics compared (original collection)
    std::size_t topics_reproduced = 0;       // reproducibility only
    std::optional<OrderingBlock> ordering;   // replicability only
    std::vector<ReplicationMeasureBlock> replication;
    std::vector<ReproductionMeasureBlock> reproduction;
    Warnings warnings;
    ComparisonOptions config;
    Provenance provenance;
};

struct ReplicateRequest {
    Run original;
    Run replicated;
    Qrels qrels;
    std::optional<Run> baseline_original;
    std::optional<Run> baseline_replicated;
};

/// Replicability suite. `original`/`replicated` play the advanced role in
/// the effect block, which is present only when both baselines are given.
ComparisonReport replicate(const ReplicateRequest& request, const ComparisonOptions& options);

struct ReproduceRequest {
    Run baseline_original;
    Run advanced_original;
    Qrels qrels_original;
    Run baseline_reproduced;
    Run advanced_reproduced;
    Qrels qrels_reproduced;
};

/// Reproducibility suite: effect measures and unpaired tests only.
ComparisonReport reproduce(const ReproduceRequest& request, const ComparisonOptions& options);

enum class OutputFormat { Json, Csv, Table };

OutputFormat parse_format(std::string_view text);

/// Deterministic serialization: sorted JSON keys, fixed CSV columns.
void emit(std::ostream& out, const ComparisonReport& report, OutputFormat format);

// ---------------------------------------------------------------------------
// Correlation between measures over a set of candidate runs.

struct EffectPaths {
    std::filesystem::path baseline;
    std::filesystem::path advanced;
};

/// Correlation manifest (JSON). Relative paths resolve against the
/// manifest's directory.
///
///     {
///       "mode": "replicability" | "reproducibility",
///       "qrels": "...", "qrels_reproduced": "...",
///       "original": "...",
///       "effect": {"baseline": "...", "advanced": "..."},
///       "measures": ["P@10", "AP", "nDCG"],
///       "runs": [{"id": "...", "run": "...", "effect": {...}}, ...]
///     }
struct Manifest {
    struct Candidate {
        std::string id;
        std::filesystem::path run;
        std::optional<EffectPaths> effect;
    };

    EffectMode mode = EffectMode::Replicability;
    std::filesystem::path qrels;
    std::optional<std::filesystem::path> qrels_reproduced;
    std::filesystem::path original;
    std::optional<EffectPaths> effect;
    std::vector<std::string> measures;
    std::vector<Candidate> runs;
};

Manifest parse_manifest(std::istream& input, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

struct CorrelateRequest {
    struct Candidate {
        std::string id;
        Run run;
        std::optional<Run> baseline;
        std::optional<Run> advanced;
    };

    EffectMode mode = EffectMode::Replicability;
    Qrels qrels;
    std::optional<Qrels> qrels_reproduced;
    Run original;
    std::optional<Run> original_baseline;
    std::optional<Run> original_advanced;
    std::vector<Candidate> candidates;
};

/// Loads every file named by the manifest. A missing or unreadable file
/// raises an error naming the manifest entry.
CorrelateRequest load_correlate_request(const Manifest& manifest, ParseMode mode, Warnings* warnings,
                                        std::vector<InputDigest>* digests = nullptr);

struct CorrelationReport {
    EffectMode mode = EffectMode::Replicability;
    std::vector<std::string> run_ids;
    std::vector<std::string> measure_ids;
    std::vector<std::vector<double>> raw; // [run][measure]
    std::vector<MeasureRanking> rankings;
    CorrelationMatrix matrix;
    std::vector<MeasurePairFlag> flags;
    std::vector<LabeledSummary> effects; // ER / delta-RI plot data, when available
    Warnings warnings;
    ComparisonOptions config;
    Provenance provenance;
};

/// Scores every candidate under each measure, ranks them after the
/// consistency transform and correlates the rankings. Needs >= 2 candidates.
CorrelationReport correlate(const CorrelateRequest& request, const ComparisonOptions& options);

/// csv: correlation matrix; json: everything; table: matrix and flags.
void emit(std::ostream& out, const CorrelationReport& report, OutputFormat format);

/// Fixed-width p-value formatting used by the table layout: scientific
/// with one significant digit below 1e-3 ("6E-06"), three decimals above.
std::string format_p_value(double p);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

} // namespace repro
