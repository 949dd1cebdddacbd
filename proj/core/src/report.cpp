#include "repro/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

namespace repro {
namespace {

ParseMode parse_mode(const ComparisonOptions& options) {
    return options.strict ? ParseMode::Strict : ParseMode::Lenient;
}

std::vector<std::string> judged_ids(const Run& run, const Qrels& qrels) {
    std::vector<std::string> ids;
    for (const auto& [topic, docs] : run.topics) {
        if (qrels.relevant_count(topic) > 0) ids.push_back(topic);
    }
    return ids;
}

// Topics judged relevant-bearing and present in every run. Strict mode
// requires the runs to cover exactly the same judged topics.
TopicSet common_topics(std::span<const Run* const> runs, const Qrels& qrels, bool strict, Warnings* warnings) {
    std::vector<std::string> common = judged_ids(*runs.front(), qrels);
    for (const Run* run : runs.subspan(1)) {
        std::erase_if(common, [&](const std::string& t) { return run->find(t) == nullptr; });
    }
    for (const Run* run : runs) {
        const auto ids = judged_ids(*run, qrels);
        if (ids.size() == common.size()) continue;
        const std::size_t dropped = ids.size() - common.size();
        if (strict) {
            throw Error(ErrorCategory::Input,
                        fmt::format("topic mismatch: run {} has {} judged topics not shared by all runs", run->tag,
                                    dropped));
        }
        warn(warnings, fmt::format("run {}: {} judged topics not shared by all runs were dropped", run->tag, dropped));
    }
    return TopicSet(std::move(common));
}

OrderingBlock compare_ordering(const Run& r, const Run& s, const TopicSet& topics, const ComparisonOptions& options,
                               Warnings* warnings) {
    const LengthPolicy policy = options.strict ? LengthPolicy::RequireEqual : LengthPolicy::CommonPrefix;
    std::map<std::string, std::optional<double>, TopicLess> unions;
    double overlap_sum = 0.0;
    double inter_sum = 0.0;
    std::size_t inter_used = 0;
    double rbo_sum = 0.0;
    for (const auto& topic : topics) {
        const RankedView a = topic_prefix(r, topic);
        const RankedView b = topic_prefix(s, topic);
        unions[topic] = tau_union(a, b, policy);
        try {
            const auto it = tau_intersection(a, b);
            inter_sum += it.tau;
            overlap_sum += static_cast<double>(it.overlap);
            ++inter_used;
        } catch (const Error& e) {
            if (e.category() != ErrorCategory::Undefined) throw;
        }
        rbo_sum += rbo(a, b, options.rbo);
    }

    OrderingBlock block;
    try {
        const TopicMean m = mean_over_topics(unions);
        block.tau_union = m.mean;
        block.tau_union_excluded = m.excluded;
    } catch (const Error& e) {
        if (e.category() != ErrorCategory::Undefined) throw;
        block.tau_union_excluded = unions.size();
    }
    if (block.tau_union_excluded > 0) {
        warn(warnings, fmt::format("tau union undefined on {} topics; excluded from the mean", block.tau_union_excluded));
    }
    if (inter_used > 0) {
        block.tau_intersection = inter_sum / static_cast<double>(inter_used);
        block.mean_overlap = overlap_sum / static_cast<double>(inter_used);
    }
    block.tau_intersection_excluded = topics.size() - inter_used;
    if (block.tau_intersection_excluded > 0) {
        warn(warnings, fmt::format("tau intersection undefined on {} topics (overlap < 2); excluded from the mean",
                                   block.tau_intersection_excluded));
    }
    block.rbo = rbo_sum / static_cast<double>(topics.size());
    if (!options.cutoffs.empty()) block.at_cutoffs = ordering_at_cutoffs(r, s, topics, options.cutoffs, options.rbo);
    return block;
}

void absorb_test_warning(const TestResult& t, std::string_view context, Warnings* warnings) {
    if (t.warning) warn(warnings, fmt::format("{}: {}", context, *t.warning));
}

std::optional<EffectBlock> effect_block(EffectInput input, Warnings* warnings) {
    EffectBlock block;
    block.arp_baseline_original = input.baseline().mean();
    block.arp_advanced_original = input.advanced().mean();
    block.arp_baseline_recreated = input.baseline_prime().mean();
    block.arp_advanced_recreated = input.advanced_prime().mean();
    block.topics_original = input.baseline().size();
    block.topics_recreated = input.baseline_prime().size();
    try {
        block.summary = summarize_effect(input, warnings);
    } catch (const Error& e) {
        if (e.category() != ErrorCategory::Undefined) throw;
        warn(warnings, fmt::format("{}: effect block omitted: {}", input.baseline().measure_id(), e.what()));
        return std::nullopt;
    }
    return block;
}

EffectMode parse_effect_mode(std::string_view text) {
    if (text == "replicability") return EffectMode::Replicability;
    if (text == "reproducibility") return EffectMode::Reproducibility;
    throw ParseError(0, fmt::format("manifest: unknown mode '{}'", text));
}

} // namespace

const char* const kReplicabilityCsvHeader =
    "mode,measure,run_original,run_replicated,topics,arp_original,arp_replicated,delta_arp,delta_arp_signed,rmse,"
    "t_stat,dof,p_value,tau_union,tau_intersection,tau_overlap,rbo,er,ri,ri_prime,delta_ri,region";

const char* const kReproducibilityCsvHeader =
    "mode,measure,baseline_original,advanced_original,baseline_reproduced,advanced_reproduced,topics_original,"
    "topics_reproduced,arp_baseline_original,arp_advanced_original,arp_baseline_reproduced,arp_advanced_reproduced,"
    "t_baseline,p_value_baseline,t_advanced,p_value_advanced,er,ri,ri_prime,delta_ri,region";

std::vector<MeasureConfig> default_measures() {
    return {MeasureConfig{Measure::Precision, 10}, MeasureConfig{Measure::AveragePrecision, 1000},
            MeasureConfig{Measure::Ndcg, 1000}};
}

void ComparisonOptions::validate() const {
    if (measures.empty()) throw Error(ErrorCategory::Config, "no measures requested");
    std::set<std::string> ids;
    for (const auto& m : measures) {
        if (m.cutoff == 0) throw Error(ErrorCategory::Config, "measure cutoff must be >= 1");
        if (!ids.insert(m.id()).second) throw Error(ErrorCategory::Config, fmt::format("measure {} requested twice", m.id()));
    }
    rbo.validate();
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] == 0) throw Error(ErrorCategory::Config, "cutoffs must be >= 1");
        if (i > 0 && cutoffs[i] <= cutoffs[i - 1]) throw Error(ErrorCategory::Config, "cutoffs must be strictly ascending");
    }
}

ComparisonReport replicate(const ReplicateRequest& request, const ComparisonOptions& options) {
    options.validate();
    if (request.baseline_original.has_value() != request.baseline_replicated.has_value()) {
        throw Error(ErrorCategory::Config, "effect block needs both baseline runs");
    }
    const bool with_effect = request.baseline_original.has_value();

    ComparisonReport report;
    report.mode = EffectMode::Replicability;
    report.config = options;
    report.runs["original"] = request.original.tag;
    report.runs["replicated"] = request.replicated.tag;
    if (with_effect) {
        report.runs["baseline_original"] = request.baseline_original->tag;
        report.runs["baseline_replicated"] = request.baseline_replicated->tag;
    }

    Warnings* w = &report.warnings;
    std::vector<const Run*> runs{&request.original, &request.replicated};
    if (with_effect) {
        runs.push_back(&*request.baseline_original);
        runs.push_back(&*request.baseline_replicated);
    }
    const TopicSet topics = common_topics(runs, request.qrels, options.strict, w);
    report.topics = topics.size();
    report.ordering = compare_ordering(request.original, request.replicated, topics, options, w);

    const ParseMode mode = parse_mode(options);
    for (const auto& cfg : options.measures) {
        ReplicationMeasureBlock block;
        block.measure_id = cfg.id();
        auto a = score_run(request.original, request.qrels, topics, cfg, mode, w);
        auto a_prime = score_run(request.replicated, request.qrels, topics, cfg, mode, w);
        block.arp_original = a.mean();
        block.arp_replicated = a_prime.mean();
        block.test = paired_t_test(a, a_prime);
        absorb_test_warning(block.test, block.measure_id, w);
        if (!options.cutoffs.empty()) {
            block.rmse_at_cutoffs = rmse_at_cutoffs(request.original, request.replicated, request.qrels, topics, cfg,
                                                    options.cutoffs);
        }
        if (with_effect) {
            auto b = score_run(*request.baseline_original, request.qrels, topics, cfg, mode, w);
            auto b_prime = score_run(*request.baseline_replicated, request.qrels, topics, cfg, mode, w);
            block.effect = effect_block(EffectInput(EffectMode::Replicability, std::move(b), a, std::move(b_prime), a_prime), w);
        }
        const ScorePair pair(std::move(a), std::move(a_prime));
        block.delta = delta_arp(pair);
        block.rmse = rmse(pair);
        report.replication.push_back(std::move(block));
    }
    return report;
}

ComparisonReport reproduce(const ReproduceRequest& request, const ComparisonOptions& options) {
    options.validate();
    ComparisonReport report;
    report.mode = EffectMode::Reproducibility;
    report.config = options;
    report.runs["baseline_original"] = request.baseline_original.tag;
    report.runs["advanced_original"] = request.advanced_original.tag;
    report.runs["baseline_reproduced"] = request.baseline_reproduced.tag;
    report.runs["advanced_reproduced"] = request.advanced_reproduced.tag;

    Warnings* w = &report.warnings;
    const std::vector<const Run*> on_c{&request.baseline_original, &request.advanced_original};
    const std::vector<const Run*> on_d{&request.baseline_reproduced, &request.advanced_reproduced};
    const TopicSet topics_c = common_topics(on_c, request.qrels_original, options.strict, w);
    const TopicSet topics_d = common_topics(on_d, request.qrels_reproduced, options.strict, w);
    report.topics = topics_c.size();
    report.topics_reproduced = topics_d.size();

    const ParseMode mode = parse_mode(options);
    for (const auto& cfg : options.measures) {
        ReproductionMeasureBlock block;
        block.measure_id = cfg.id();
        auto b = score_run(request.baseline_original, request.qrels_original, topics_c, cfg, mode, w);
        auto a = score_run(request.advanced_original, request.qrels_original, topics_c, cfg, mode, w);
        auto b_prime = score_run(request.baseline_reproduced, request.qrels_reproduced, topics_d, cfg, mode, w);
        auto a_prime = score_run(request.advanced_reproduced, request.qrels_reproduced, topics_d, cfg, mode, w);
        block.arp_baseline_original = b.mean();
        block.arp_advanced_original = a.mean();
        block.arp_baseline_reproduced = b_prime.mean();
        block.arp_advanced_reproduced = a_prime.mean();
        block.baseline_test = unpaired_t_test(b, b_prime);
        block.advanced_test = unpaired_t_test(a, a_prime);
        absorb_test_warning(block.baseline_test, block.measure_id + " baseline", w);
        absorb_test_warning(block.advanced_test, block.measure_id + " advanced", w);
        block.effect = effect_block(
            EffectInput(EffectMode::Reproducibility, std::move(b), std::move(a), std::move(b_prime), std::move(a_prime)), w);
        report.reproduction.push_back(std::move(block));
    }
    return report;
}

// ---------------------------------------------------------------------------

Manifest parse_manifest(std::istream& input, const std::filesystem::path& base_dir) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, fmt::format("manifest: {}", e.what()));
    }

    auto path_of = [&](const nlohmann::json& node, std::string_view key, std::string_view where) {
        if (!node.is_object() || !node.contains(key) || !node.at(std::string(key)).is_string()) {
            throw ParseError(0, fmt::format("manifest: {} needs a string field '{}'", where, key));
        }
        std::filesystem::path p = node.at(std::string(key)).get<std::string>();
        return p.is_absolute() ? p : base_dir / p;
    };
    auto effect_of = [&](const nlohmann::json& node, std::string_view where) -> std::optional<EffectPaths> {
        if (!node.contains("effect")) return std::nullopt;
        const auto& e = node.at("effect");
        return EffectPaths{path_of(e, "baseline", where), path_of(e, "advanced", where)};
    };

    try {
        Manifest m;
        if (!doc.is_object()) throw ParseError(0, "manifest: top level must be an object");
        if (doc.contains("mode")) m.mode = parse_effect_mode(doc.at("mode").get<std::string>());
        m.qrels = path_of(doc, "qrels", "top level");
        if (doc.contains("qrels_reproduced")) m.qrels_reproduced = path_of(doc, "qrels_reproduced", "top level");
        m.original = path_of(doc, "original", "top level");
        m.effect = effect_of(doc, "effect");
        if (doc.contains("measures")) m.measures = doc.at("measures").get<std::vector<std::string>>();
        if (!doc.contains("runs") || !doc.at("runs").is_array()) throw ParseError(0, "manifest: missing 'runs' array");

        std::set<std::string> ids;
        for (const auto& entry : doc.at("runs")) {
            Manifest::Candidate c;
            if (!entry.is_object() || !entry.contains("id") || !entry.at("id").is_string()) {
                throw ParseError(0, "manifest: every run needs a string 'id'");
            }
            c.id = entry.at("id").get<std::string>();
            if (!ids.insert(c.id).second) throw ParseError(0, fmt::format("manifest: duplicate run id '{}'", c.id));
            c.run = path_of(entry, "run", fmt::format("run '{}'", c.id));
            c.effect = effect_of(entry, fmt::format("run '{}'", c.id));
            m.runs.push_back(std::move(c));
        }
        if (m.runs.size() < 2) throw Error(ErrorCategory::Input, "manifest: correlation needs at least 2 runs");
        if (m.mode == EffectMode::Reproducibility && !m.qrels_reproduced) {
            throw ParseError(0, "manifest: reproducibility mode needs 'qrels_reproduced'");
        }
        if (m.effect) {
            for (const auto& c : m.runs) {
                if (!c.effect) throw ParseError(0, fmt::format("manifest: run '{}' lacks an 'effect' pair", c.id));
            }
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, fmt::format("manifest: {}", e.what()));
    }
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::Io, fmt::format("cannot open manifest '{}'", path.string()));
    return parse_manifest(in, path.parent_path());
}

CorrelateRequest load_correlate_request(const Manifest& manifest, ParseMode mode, Warnings* warnings,
                                        std::vector<InputDigest>* digests) {
    auto guarded = [&](const std::string& entry, const std::filesystem::path& path, auto&& load) {
        try {
            auto value = load(path);
            if (digests != nullptr) digests->push_back({entry, path.string(), sha256_file(path)});
            return value;
        } catch (const Error& e) {
            throw Error(e.category(), fmt::format("manifest entry '{}': {}", entry, e.what()));
        }
    };
    auto run_loader = [&](const std::filesystem::path& p) { return load_run(p, mode, warnings); };
    auto qrels_loader = [&](const std::filesystem::path& p) { return load_qrels(p, warnings); };

    CorrelateRequest req;
    req.mode = manifest.mode;
    req.qrels = guarded("qrels", manifest.qrels, qrels_loader);
    if (manifest.qrels_reproduced) req.qrels_reproduced = guarded("qrels_reproduced", *manifest.qrels_reproduced, qrels_loader);
    req.original = guarded("original", manifest.original, run_loader);
    if (manifest.effect) {
        req.original_baseline = guarded("effect.baseline", manifest.effect->baseline, run_loader);
        req.original_advanced = guarded("effect.advanced", manifest.effect->advanced, run_loader);
    }
    for (const auto& c : manifest.runs) {
        CorrelateRequest::Candidate cand;
        cand.id = c.id;
        cand.run = guarded(c.id, c.run, run_loader);
        if (c.effect) {
            cand.baseline = guarded(c.id + ".effect.baseline", c.effect->baseline, run_loader);
            cand.advanced = guarded(c.id + ".effect.advanced", c.effect->advanced, run_loader);
        }
        req.candidates.push_back(std::move(cand));
    }
    return req;
}

CorrelationReport correlate(const CorrelateRequest& request, const ComparisonOptions& options) {
    options.validate();
    if (request.candidates.size() < 2) throw Error(ErrorCategory::Input, "correlation needs at least 2 runs");
    const bool replicability = request.mode == EffectMode::Replicability;
    if (!replicability && !request.qrels_reproduced) {
        throw Error(ErrorCategory::Config, "reproducibility correlation needs qrels for the new collection");
    }
    const bool with_effect = request.original_baseline && request.original_advanced;
    if (with_effect) {
        for (const auto& c : request.candidates) {
            if (!c.baseline || !c.advanced) {
                throw Error(ErrorCategory::Input, fmt::format("run '{}' lacks a baseline/advanced pair", c.id));
            }
        }
    }

    CorrelationReport report;
    report.mode = request.mode;
    report.config = options;
    Warnings* w = &report.warnings;
    const ParseMode mode = parse_mode(options);

    const auto& ms = options.measures;
    if (replicability) {
        for (const auto& m : ms) report.measure_ids.push_back("delta_arp_" + m.id());
        report.measure_ids.push_back("tau_union");
        report.measure_ids.push_back("rbo");
        for (const auto& m : ms) report.measure_ids.push_back("rmse_" + m.id());
    }
    for (const auto& m : ms) report.measure_ids.push_back("p_value_" + m.id());
    if (with_effect) {
        for (const auto& m : ms) report.measure_ids.push_back("er_" + m.id());
    }

    const Qrels& qrels_new = replicability ? request.qrels : *request.qrels_reproduced;
    for (const auto& cand : request.candidates) {
        std::vector<double> row;
        Warnings local;
        try {
            if (replicability) {
                const std::vector<const Run*> pair{&request.original, &cand.run};
                const TopicSet topics = common_topics(pair, request.qrels, options.strict, &local);
                std::vector<double> rmses;
                std::vector<double> ps;
                for (const auto& cfg : ms) {
                    auto a = score_run(request.original, request.qrels, topics, cfg, mode, &local);
                    auto b = score_run(cand.run, request.qrels, topics, cfg, mode, &local);
                    const auto test = paired_t_test(a, b);
                    absorb_test_warning(test, cfg.id(), &local);
                    ps.push_back(test.p_value);
                    const ScorePair p(std::move(a), std::move(b));
                    row.push_back(delta_arp(p).absolute);
                    rmses.push_back(rmse(p));
                }
                ComparisonOptions ordering_options = options;
                ordering_options.cutoffs.clear();
                const OrderingBlock ordering = compare_ordering(request.original, cand.run, topics, ordering_options, &local);
                if (!ordering.tau_union) throw Error(ErrorCategory::Undefined, "tau union undefined on every topic");
                row.push_back(*ordering.tau_union);
                row.push_back(ordering.rbo);
                row.insert(row.end(), rmses.begin(), rmses.end());
                row.insert(row.end(), ps.begin(), ps.end());
            } else {
                const std::vector<const Run*> orig{&request.original};
                const std::vector<const Run*> rep{&cand.run};
                const TopicSet topics_c = common_topics(orig, request.qrels, options.strict, &local);
                const TopicSet topics_d = common_topics(rep, qrels_new, options.strict, &local);
                for (const auto& cfg : ms) {
                    const auto a = score_run(request.original, request.qrels, topics_c, cfg, mode, &local);
                    const auto b = score_run(cand.run, qrels_new, topics_d, cfg, mode, &local);
                    const auto test = unpaired_t_test(b, a);
                    absorb_test_warning(test, cfg.id(), &local);
                    row.push_back(test.p_value);
                }
            }

            if (with_effect) {
                const std::vector<const Run*> orig{&*request.original_baseline, &*request.original_advanced};
                const std::vector<const Run*> rep{&*cand.baseline, &*cand.advanced};
                std::vector<const Run*> all = orig;
                if (replicability) all.insert(all.end(), rep.begin(), rep.end());
                const TopicSet topics_c = common_topics(all, request.qrels, options.strict, &local);
                const TopicSet topics_d =
                    replicability ? topics_c : common_topics(rep, qrels_new, options.strict, &local);
                const EffectMode emode = request.mode;
                for (const auto& cfg : ms) {
                    auto b = score_run(*request.original_baseline, request.qrels, topics_c, cfg, mode, &local);
                    auto a = score_run(*request.original_advanced, request.qrels, topics_c, cfg, mode, &local);
                    auto b2 = score_run(*cand.baseline, qrels_new, topics_d, cfg, mode, &local);
                    auto a2 = score_run(*cand.advanced, qrels_new, topics_d, cfg, mode, &local);
                    EffectSummary s = summarize_effect(
                        EffectInput(emode, std::move(b), std::move(a), std::move(b2), std::move(a2)), &local);
                    row.push_back(s.er);
                    report.effects.push_back({cand.id, std::move(s)});
                }
            }
        } catch (const Error& e) {
            throw Error(e.category(), fmt::format("run '{}': {}", cand.id, e.what()));
        }
        for (const auto& msg : local.items()) w->add(fmt::format("run '{}': {}", cand.id, msg));
        report.run_ids.push_back(cand.id);
        report.raw.push_back(std::move(row));
    }

    for (std::size_t m = 0; m < report.measure_ids.size(); ++m) {
        std::vector<double> column;
        column.reserve(report.raw.size());
        for (const auto& row : report.raw) column.push_back(row[m]);
        report.rankings.push_back(rank_runs(report.measure_ids[m], report.run_ids, column));
    }
    report.matrix = correlation_matrix(report.rankings);
    report.flags = flag_equivalences(report.matrix);
    return report;
}

} // namespace repro
