#include "repro/meta_analysis.hpp"

#include "csv.hpp"
#include "repro/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace repro {
namespace {

bool has_family_prefix(std::string_view id, std::string_view prefix) {
    if (id.substr(0, prefix.size()) != prefix) return false;
    return id.size() == prefix.size() || id[prefix.size()] == '_';
}

} // namespace

MeasureFamily family_of(std::string_view measure_id) {
    // longest prefixes first: "delta_arp" before anything shorter
    if (has_family_prefix(measure_id, "delta_arp")) return MeasureFamily::DeltaArp;
    if (has_family_prefix(measure_id, "p_value")) return MeasureFamily::PValue;
    if (has_family_prefix(measure_id, "rmse")) return MeasureFamily::Rmse;
    if (has_family_prefix(measure_id, "tau")) return MeasureFamily::Tau;
    if (has_family_prefix(measure_id, "rbo")) return MeasureFamily::Rbo;
    if (has_family_prefix(measure_id, "er")) return MeasureFamily::EffectRatio;
    throw Error(ErrorCategory::Config, fmt::format("unknown measure id '{}'", measure_id));
}

double consistency_transform(std::string_view measure_id, double raw) {
    const MeasureFamily family = family_of(measure_id);
    if (!std::isfinite(raw)) {
        throw Error(ErrorCategory::Input, fmt::format("{}: value {} is not finite", measure_id, raw));
    }
    switch (family) {
        case MeasureFamily::Tau:
        case MeasureFamily::Rbo:
        case MeasureFamily::PValue: return -raw;
        case MeasureFamily::EffectRatio: return std::abs(1.0 - raw);
        case MeasureFamily::Rmse:
        case MeasureFamily::DeltaArp: return raw;
    }
    return raw;
}

MeasureRanking rank_runs(std::string_view measure_id, std::span<const std::string> run_ids,
                         std::span<const double> raw_values) {
    if (run_ids.size() != raw_values.size()) {
        throw Error(ErrorCategory::Input, fmt::format("{}: {} run ids but {} values", measure_id, run_ids.size(),
                                                      raw_values.size()));
    }
    std::unordered_set<std::string_view> unique(run_ids.begin(), run_ids.end());
    if (unique.size() != run_ids.size()) {
        throw Error(ErrorCategory::Input, fmt::format("{}: duplicate run ids", measure_id));
    }

    std::vector<double> badness(raw_values.size());
    for (std::size_t i = 0; i < raw_values.size(); ++i) badness[i] = consistency_transform(measure_id, raw_values[i]);

    std::vector<std::size_t> order(run_ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return badness[a] < badness[b]; });

    MeasureRanking ranking;
    ranking.measure_id = std::string(measure_id);
    for (const std::size_t i : order) {
        ranking.run_ids.push_back(run_ids[i]);
        ranking.badness.push_back(badness[i]);
    }
    return ranking;
}

double CorrelationMatrix::at(std::string_view a, std::string_view b) const {
    const auto ia = std::find(measure_ids.begin(), measure_ids.end(), a);
    const auto ib = std::find(measure_ids.begin(), measure_ids.end(), b);
    if (ia == measure_ids.end() || ib == measure_ids.end()) {
        throw Error(ErrorCategory::Input, fmt::format("no correlation entry for ({}, {})", a, b));
    }
    return tau[static_cast<std::size_t>(ia - measure_ids.begin())][static_cast<std::size_t>(ib - measure_ids.begin())];
}

CorrelationMatrix correlation_matrix(std::span<const MeasureRanking> rankings) {
    if (rankings.size() < 2) throw Error(ErrorCategory::Input, "correlation matrix needs at least 2 measures");

    // Reference run order taken from the first ranking.
    const auto& reference = rankings.front().run_ids;
    std::unordered_map<std::string_view, std::size_t> slot;
    for (std::size_t i = 0; i < reference.size(); ++i) slot.emplace(reference[i], i);

    std::vector<std::vector<double>> aligned(rankings.size(), std::vector<double>(reference.size()));
    for (std::size_t m = 0; m < rankings.size(); ++m) {
        const auto& r = rankings[m];
        if (r.run_ids.size() != reference.size()) {
            throw Error(ErrorCategory::Input, fmt::format("measure {} ranks {} runs, expected {}", r.measure_id,
                                                          r.run_ids.size(), reference.size()));
        }
        std::vector<bool> filled(reference.size(), false);
        for (std::size_t i = 0; i < r.run_ids.size(); ++i) {
            const auto it = slot.find(r.run_ids[i]);
            if (it == slot.end() || filled[it->second]) {
                throw Error(ErrorCategory::Input,
                            fmt::format("measure {} ranks a different run set ('{}')", r.measure_id, r.run_ids[i]));
            }
            aligned[m][it->second] = r.badness[i];
            filled[it->second] = true;
        }
    }

    CorrelationMatrix out;
    const std::size_t k = rankings.size();
    out.tau.assign(k, std::vector<double>(k, 1.0));
    for (const auto& r : rankings) out.measure_ids.push_back(r.measure_id);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto tau = kendall_tau(std::span<const double>(aligned[i]), std::span<const double>(aligned[j]));
            const double v = tau.value_or(std::numeric_limits<double>::quiet_NaN());
            out.tau[i][j] = v;
            out.tau[j][i] = v;
        }
    }
    return out;
}

std::string_view agreement_name(Agreement a) noexcept {
    switch (a) {
        case Agreement::Equivalent: return "equivalent";
        case Agreement::Intermediate: return "intermediate";
        case Agreement::Different: return "different";
        case Agreement::Undefined: return "undefined";
    }
    return "undefined";
}

Agreement classify_agreement(double tau) {
    if (std::isnan(tau)) return Agreement::Undefined;
    if (tau > 0.9) return Agreement::Equivalent;
    if (tau < 0.8) return Agreement::Different;
    return Agreement::Intermediate;
}

std::vector<MeasurePairFlag> flag_equivalences(const CorrelationMatrix& matrix) {
    std::vector<MeasurePairFlag> flags;
    const std::size_t k = matrix.measure_ids.size();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double tau = matrix.tau[i][j];
            flags.push_back({matrix.measure_ids[i], matrix.measure_ids[j], tau, classify_agreement(tau)});
        }
    }
    return flags;
}

void write_matrix_csv(std::ostream& out, const CorrelationMatrix& matrix) {
    out << "measure";
    for (const auto& id : matrix.measure_ids) out << ',' << detail::csv_field(id);
    out << '\n';
    for (std::size_t i = 0; i < matrix.measure_ids.size(); ++i) {
        out << detail::csv_field(matrix.measure_ids[i]);
        for (const double v : matrix.tau[i]) out << ',' << detail::csv_number(v);
        out << '\n';
    }
}

} // namespace repro
