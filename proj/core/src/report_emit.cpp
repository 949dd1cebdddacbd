#include "repro/report.hpp"

#include "csv.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

namespace repro {
namespace {

using nlohmann::json;

json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

json number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::string cell(double v) { return detail::csv_number(v); }
std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string(); }

json to_json(const TestResult& t) {
    json j;
    j["kind"] = std::string(kind_name(t.kind));
    j["t_stat"] = number(t.t_stat);
    j["dof"] = t.dof;
    j["p_value"] = number(t.p_value);
    return j;
}

json to_json(const EffectSummary& s) {
    json j;
    j["er"] = number(s.er);
    j["ri"] = number(s.ri);
    j["ri_prime"] = number(s.ri_prime);
    j["delta_ri"] = number(s.delta_ri);
    j["region"] = s.region.label();
    j["region_adjacent"] = s.region.adjacent;
    j["distance_to_ideal"] = number(s.distance);
    return j;
}

json to_json(const EffectBlock& e) {
    json j = to_json(e.summary);
    j["arp_baseline_original"] = number(e.arp_baseline_original);
    j["arp_advanced_original"] = number(e.arp_advanced_original);
    j["arp_baseline_recreated"] = number(e.arp_baseline_recreated);
    j["arp_advanced_recreated"] = number(e.arp_advanced_recreated);
    j["topics_original"] = e.topics_original;
    j["topics_recreated"] = e.topics_recreated;
    return j;
}

json effect_or_null(const std::optional<EffectBlock>& e) { return e ? to_json(*e) : json(nullptr); }

json to_json(const OrderingBlock& o) {
    json j;
    j["tau_union"] = number(o.tau_union);
    j["tau_union_excluded_topics"] = o.tau_union_excluded;
    j["tau_intersection"] = number(o.tau_intersection);
    j["tau_intersection_mean_overlap"] = number(o.mean_overlap);
    j["tau_intersection_excluded_topics"] = o.tau_intersection_excluded;
    j["rbo"] = number(o.rbo);
    json cut = json::object();
    for (const auto& [k, v] : o.at_cutoffs) {
        cut[std::to_string(k)] = {{"tau_union", number(v.tau_union)}, {"tau_union_excluded_topics", v.tau_excluded},
                                  {"rbo", number(v.rbo)}};
    }
    j["at_cutoffs"] = cut;
    return j;
}

json config_json(const ComparisonOptions& c) {
    json j;
    json ms = json::array();
    for (const auto& m : c.measures) ms.push_back(m.id());
    j["measures"] = ms;
    j["cutoffs"] = c.cutoffs;
    j["phi"] = c.rbo.phi;
    j["depth"] = c.rbo.depth;
    j["strict"] = c.strict;
    return j;
}

json provenance_json(const Provenance& p, const ComparisonOptions& c) {
    json j;
    json inputs = json::array();
    for (const auto& d : p.inputs) inputs.push_back({{"role", d.role}, {"path", d.path}, {"sha256", d.sha256}});
    j["inputs"] = inputs;
    j["config"] = config_json(c);
    if (p.generated_at) j["generated_at"] = *p.generated_at;
    return j;
}

json to_json(const ComparisonReport& r) {
    json j;
    j["mode"] = std::string(mode_name(r.mode));
    j["runs"] = r.runs;
    j["warnings"] = r.warnings.items();
    j["provenance"] = provenance_json(r.provenance, r.config);
    json measures = json::array();
    if (r.mode == EffectMode::Replicability) {
        j["topics"] = r.topics;
        j["ordering"] = r.ordering ? to_json(*r.ordering) : json(nullptr);
        for (const auto& b : r.replication) {
            json m;
            m["measure"] = b.measure_id;
            m["arp_original"] = number(b.arp_original);
            m["arp_replicated"] = number(b.arp_replicated);
            m["delta_arp"] = number(b.delta.absolute);
            m["delta_arp_signed"] = number(b.delta.signed_delta);
            m["rmse"] = number(b.rmse);
            json cut = json::object();
            for (const auto& [k, v] : b.rmse_at_cutoffs) cut[std::to_string(k)] = number(v);
            m["rmse_at_cutoffs"] = cut;
            m["t_test"] = to_json(b.test);
            m["effect"] = effect_or_null(b.effect);
            measures.push_back(std::move(m));
        }
    } else {
        j["topics_original"] = r.topics;
        j["topics_reproduced"] = r.topics_reproduced;
        for (const auto& b : r.reproduction) {
            json m;
            m["measure"] = b.measure_id;
            m["arp_baseline_original"] = number(b.arp_baseline_original);
            m["arp_advanced_original"] = number(b.arp_advanced_original);
            m["arp_baseline_reproduced"] = number(b.arp_baseline_reproduced);
            m["arp_advanced_reproduced"] = number(b.arp_advanced_reproduced);
            m["t_test_baseline"] = to_json(b.baseline_test);
            m["t_test_advanced"] = to_json(b.advanced_test);
            m["effect"] = effect_or_null(b.effect);
            measures.push_back(std::move(m));
        }
    }
    j["measures"] = measures;
    return j;
}

std::string role(const ComparisonReport& r, const std::string& key) {
    const auto it = r.runs.find(key);
    return it == r.runs.end() ? std::string() : it->second;
}

void effect_cells(std::vector<std::string>& row, const std::optional<EffectBlock>& e) {
    if (e) {
        row.push_back(cell(e->summary.er));
        row.push_back(cell(e->summary.ri));
        row.push_back(cell(e->summary.ri_prime));
        row.push_back(cell(e->summary.delta_ri));
        row.push_back(e->summary.region.label());
    } else {
        row.insert(row.end(), 5, std::string());
    }
}

void write_row(std::ostream& out, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out << ',';
        out << detail::csv_field(row[i]);
    }
    out << '\n';
}

void emit_csv(std::ostream& out, const ComparisonReport& r) {
    const std::string mode(mode_name(r.mode));
    if (r.mode == EffectMode::Replicability) {
        out << kReplicabilityCsvHeader << '\n';
        const OrderingBlock o = r.ordering.value_or(OrderingBlock{});
        for (const auto& b : r.replication) {
            std::vector<std::string> row{mode,
                                         b.measure_id,
                                         role(r, "original"),
                                         role(r, "replicated"),
                                         std::to_string(r.topics),
                                         cell(b.arp_original),
                                         cell(b.arp_replicated),
                                         cell(b.delta.absolute),
                                         cell(b.delta.signed_delta),
                                         cell(b.rmse),
                                         cell(b.test.t_stat),
                                         cell(b.test.dof),
                                         cell(b.test.p_value),
                                         cell(o.tau_union),
                                         cell(o.tau_intersection),
                                         o.tau_intersection ? cell(o.mean_overlap) : std::string(),
                                         cell(o.rbo)};
            effect_cells(row, b.effect);
            write_row(out, row);
        }
    } else {
        out << kReproducibilityCsvHeader << '\n';
        for (const auto& b : r.reproduction) {
            std::vector<std::string> row{mode,
                                         b.measure_id,
                                         role(r, "baseline_original"),
                                         role(r, "advanced_original"),
                                         role(r, "baseline_reproduced"),
                                         role(r, "advanced_reproduced"),
                                         std::to_string(r.topics),
                                         std::to_string(r.topics_reproduced),
                                         cell(b.arp_baseline_original),
                                         cell(b.arp_advanced_original),
                                         cell(b.arp_baseline_reproduced),
                                         cell(b.arp_advanced_reproduced),
                                         cell(b.baseline_test.t_stat),
                                         cell(b.baseline_test.p_value),
                                         cell(b.advanced_test.t_stat),
                                         cell(b.advanced_test.p_value)};
            effect_cells(row, b.effect);
            write_row(out, row);
        }
    }
}

std::string fixed4(double v) { return std::isfinite(v) ? fmt::format("{:.4f}", v) : fmt::format("{}", v); }
std::string fixed4(const std::optional<double>& v) { return v ? fixed4(*v) : std::string("-"); }

// Renders rows as left-aligned columns separated by two spaces.
void write_columns(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) line += "  ";
            line += row[i];
            if (i + 1 < row.size()) line.append(width[i] - row[i].size(), ' ');
        }
        out << line << '\n';
    }
}

void emit_warnings(std::ostream& out, const Warnings& w) {
    if (w.empty()) return;
    out << "\nwarnings:\n";
    for (const auto& msg : w.items()) out << "  - " << msg << '\n';
}

void emit_table(std::ostream& out, const ComparisonReport& r) {
    if (r.mode == EffectMode::Replicability) {
        out << fmt::format("replicability: {} vs {} ({} topics)\n\n", role(r, "original"), role(r, "replicated"),
                           r.topics);
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> group{"", "ARP"};
        std::vector<std::string> head{"run"};
        for (std::size_t i = 1; i < r.replication.size(); ++i) group.emplace_back();
        group.insert(group.end(), {"Correlation", ""});
        group.emplace_back("RMSE");
        for (std::size_t i = 1; i < r.replication.size(); ++i) group.emplace_back();
        group.emplace_back("p-value");
        for (const auto& b : r.replication) head.push_back(b.measure_id);
        head.insert(head.end(), {"tau", "RBO"});
        for (const auto& b : r.replication) head.push_back(b.measure_id);
        for (const auto& b : r.replication) head.push_back(b.measure_id);
        rows.push_back(group);
        rows.push_back(head);

        std::vector<std::string> orig{role(r, "original")};
        for (const auto& b : r.replication) orig.push_back(fixed4(b.arp_original));
        rows.push_back(orig);

        const OrderingBlock o = r.ordering.value_or(OrderingBlock{});
        std::vector<std::string> rpl{role(r, "replicated")};
        for (const auto& b : r.replication) rpl.push_back(fixed4(b.arp_replicated));
        rpl.push_back(fixed4(o.tau_union));
        rpl.push_back(fixed4(o.rbo));
        for (const auto& b : r.replication) rpl.push_back(fixed4(b.rmse));
        for (const auto& b : r.replication) rpl.push_back(format_p_value(b.test.p_value));
        rows.push_back(rpl);
        write_columns(out, rows);

        if (o.tau_intersection) {
            out << fmt::format("\ntau intersection: {} (mean overlap {:.1f})\n", fixed4(o.tau_intersection),
                               o.mean_overlap);
        }
        if (!o.at_cutoffs.empty()) {
            std::vector<std::vector<std::string>> cut{{"cutoff", "tau", "RBO"}};
            for (const auto& b : r.replication) cut.front().push_back("RMSE " + b.measure_id);
            for (const auto& [k, v] : o.at_cutoffs) {
                std::vector<std::string> row{std::to_string(k), fixed4(v.tau_union), fixed4(v.rbo)};
                for (const auto& b : r.replication) {
                    const auto it = b.rmse_at_cutoffs.find(k);
                    row.push_back(it == b.rmse_at_cutoffs.end() ? "-" : fixed4(it->second));
                }
                cut.push_back(std::move(row));
            }
            out << '\n';
            write_columns(out, cut);
        }
        bool any_effect = false;
        for (const auto& b : r.replication) any_effect = any_effect || b.effect.has_value();
        if (any_effect) {
            std::vector<std::vector<std::string>> eff{{"measure", "ER", "RI", "RI'", "dRI", "region"}};
            for (const auto& b : r.replication) {
                if (!b.effect) continue;
                const auto& s = b.effect->summary;
                eff.push_back({b.measure_id, fixed4(s.er), fixed4(s.ri), fixed4(s.ri_prime), fixed4(s.delta_ri),
                               s.region.label()});
            }
            out << '\n';
            write_columns(out, eff);
        }
    } else {
        out << fmt::format("reproducibility: {} / {} -> {} / {} ({} / {} topics)\n\n", role(r, "baseline_original"),
                           role(r, "advanced_original"), role(r, "baseline_reproduced"),
                           role(r, "advanced_reproduced"), r.topics, r.topics_reproduced);
        std::vector<std::vector<std::string>> rows{
            {"measure", "ARP b", "ARP a", "ARP b'", "ARP a'", "p(b)", "p(a)", "ER", "dRI", "region"}};
        for (const auto& b : r.reproduction) {
            std::vector<std::string> row{b.measure_id,
                                         fixed4(b.arp_baseline_original),
                                         fixed4(b.arp_advanced_original),
                                         fixed4(b.arp_baseline_reproduced),
                                         fixed4(b.arp_advanced_reproduced),
                                         format_p_value(b.baseline_test.p_value),
                                         format_p_value(b.advanced_test.p_value)};
            if (b.effect) {
                row.push_back(fixed4(b.effect->summary.er));
                row.push_back(fixed4(b.effect->summary.delta_ri));
                row.push_back(b.effect->summary.region.label());
            } else {
                row.insert(row.end(), {"-", "-", "-"});
            }
            rows.push_back(std::move(row));
        }
        write_columns(out, rows);
    }
    emit_warnings(out, r.warnings);
}

json to_json(const CorrelationReport& r) {
    json j;
    j["mode"] = std::string(mode_name(r.mode));
    j["runs"] = r.run_ids;
    j["measures"] = r.measure_ids;
    json raw = json::object();
    for (std::size_t i = 0; i < r.run_ids.size(); ++i) {
        json row = json::object();
        for (std::size_t m = 0; m < r.measure_ids.size(); ++m) row[r.measure_ids[m]] = number(r.raw[i][m]);
        raw[r.run_ids[i]] = row;
    }
    j["raw"] = raw;
    json rankings = json::object();
    for (const auto& k : r.rankings) rankings[k.measure_id] = k.run_ids;
    j["rankings"] = rankings;
    json matrix = json::array();
    for (const auto& row : r.matrix.tau) {
        json jr = json::array();
        for (const double v : row) jr.push_back(number(v));
        matrix.push_back(jr);
    }
    j["matrix"] = matrix;
    json flags = json::array();
    for (const auto& f : r.flags) {
        flags.push_back({{"first", f.first}, {"second", f.second}, {"tau", number(f.tau)},
                         {"agreement", std::string(agreement_name(f.agreement))}});
    }
    j["flags"] = flags;
    json effects = json::array();
    for (const auto& row : er_ri_plot_data(r.effects)) {
        effects.push_back({{"run", row.run}, {"measure", row.measure}, {"er", number(row.er)},
                           {"delta_ri", number(row.delta_ri)}, {"region", row.region},
                           {"dist", number(row.distance)}});
    }
    j["effects"] = effects;
    j["warnings"] = r.warnings.items();
    j["provenance"] = provenance_json(r.provenance, r.config);
    return j;
}

void emit_correlation_table(std::ostream& out, const CorrelationReport& r) {
    out << fmt::format("measure correlation over {} runs\n\n", r.run_ids.size());
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{""};
    head.insert(head.end(), r.matrix.measure_ids.begin(), r.matrix.measure_ids.end());
    rows.push_back(head);
    for (std::size_t i = 0; i < r.matrix.measure_ids.size(); ++i) {
        std::vector<std::string> row{r.matrix.measure_ids[i]};
        for (const double v : r.matrix.tau[i]) row.push_back(std::isnan(v) ? "-" : fmt::format("{:.4f}", v));
        rows.push_back(std::move(row));
    }
    write_columns(out, rows);
    out << '\n';
    std::vector<std::vector<std::string>> flags{{"first", "second", "tau", "agreement"}};
    for (const auto& f : r.flags) {
        flags.push_back({f.first, f.second, std::isnan(f.tau) ? "-" : fmt::format("{:.4f}", f.tau),
                         std::string(agreement_name(f.agreement))});
    }
    write_columns(out, flags);
    emit_warnings(out, r.warnings);
}

} // namespace

OutputFormat parse_format(std::string_view text) {
    if (text == "json") return OutputFormat::Json;
    if (text == "csv") return OutputFormat::Csv;
    if (text == "table") return OutputFormat::Table;
    throw Error(ErrorCategory::Config, fmt::format("unknown format '{}' (expected json, csv or table)", text));
}

void emit(std::ostream& out, const ComparisonReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: out << to_json(report).dump(2) << '\n'; break;
        case OutputFormat::Csv: emit_csv(out, report); break;
        case OutputFormat::Table: emit_table(out, report); break;
    }
}

void emit(std::ostream& out, const CorrelationReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: out << to_json(report).dump(2) << '\n'; break;
        case OutputFormat::Csv: write_matrix_csv(out, report.matrix); break;
        case OutputFormat::Table: emit_correlation_table(out, report); break;
    }
}

std::string format_p_value(double p) {
    if (std::isnan(p)) return "-";
    if (p == 0.0) return "0";
    if (p < 1e-3) return fmt::format("{:.0E}", p);
    return fmt::format("{:.3f}", p);
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::Io, fmt::format("cannot open '{}'", path.string()));
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCategory::Io, "sha256 initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

} // namespace repro
