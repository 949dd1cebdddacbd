// repro_eval: compare retrieval runs for replicability and reproducibility.

#include "repro/report.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <curl/curl.h>
#include <fmt/format.h>
#include <json.hpp>

namespace fs = std::filesystem;
using namespace repro;

namespace {

constexpr const char* kDefaultArchiveUrl =
    "https://github.com/irgroup/sigir2020-measure-reproducibility/archive/refs/heads/master.tar.gz";

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Parse: return 2;
        case ErrorCategory::Input: return 3;
        case ErrorCategory::Undefined: return 4;
        case ErrorCategory::Io: return 5;
        case ErrorCategory::Config: return 6;
    }
    return 1;
}

int fail(std::string_view category, std::string_view message, int code) {
    nlohmann::json j;
    j["error"] = {{"category", std::string(category)}, {"message", std::string(message)}};
    std::cerr << j.dump() << '\n';
    return code;
}

struct CommonFlags {
    std::string measures = "P@10,AP,nDCG";
    std::vector<std::size_t> cutoffs;
    double phi = 0.8;
    std::size_t depth = 1000;
    std::string format = "table";
    bool strict = false;
    bool provenance = false;
    std::string output;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--measures", f.measures, "Comma-separated measures (P@k, AP, nDCG, nDCG@k, nDCG_exp)")
        ->capture_default_str();
    cmd->add_option("--cutoffs", f.cutoffs, "Rank cutoffs for the ordering / RMSE sweep")->delimiter(',');
    cmd->add_option("--phi", f.phi, "RBO persistence")->capture_default_str();
    cmd->add_option("--depth", f.depth, "RBO evaluation depth")->capture_default_str();
    cmd->add_option("--format", f.format, "Output format: json, csv or table")->capture_default_str();
    cmd->add_flag("--strict", f.strict, "Reject malformed lines and topic mismatches instead of warning");
    cmd->add_flag("--provenance", f.provenance, "Add a generation timestamp to the provenance block");
    cmd->add_option("-o,--output", f.output, "Write the report to a file instead of stdout");
}

ComparisonOptions options_from(const CommonFlags& f) {
    ComparisonOptions o;
    o.measures.clear();
    std::stringstream ss(f.measures);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) o.measures.push_back(MeasureConfig::parse(item));
    }
    o.cutoffs = f.cutoffs;
    o.rbo.phi = f.phi;
    o.rbo.depth = f.depth;
    o.strict = f.strict;
    o.validate();
    return o;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Inputs {
public:
    Inputs(ParseMode mode, Warnings* warnings) : mode_(mode), warnings_(warnings) {}

    Run run(const std::string& role, const fs::path& path) {
        Run r = load_run(path, mode_, warnings_);
        digests_.push_back({role, path.string(), sha256_file(path)});
        return r;
    }

    Qrels qrels(const std::string& role, const fs::path& path) {
        Qrels q = load_qrels(path, warnings_);
        digests_.push_back({role, path.string(), sha256_file(path)});
        return q;
    }

    std::vector<InputDigest>& digests() { return digests_; }

private:
    ParseMode mode_;
    Warnings* warnings_;
    std::vector<InputDigest> digests_;
};

template <typename Report>
void write_report(const Report& report, const CommonFlags& f) {
    const OutputFormat format = parse_format(f.format);
    if (f.output.empty()) {
        emit(std::cout, report, format);
        return;
    }
    std::ofstream out(f.output);
    if (!out) throw Error(ErrorCategory::Io, fmt::format("cannot write '{}'", f.output));
    emit(out, report, format);
}

void finish(ComparisonReport& report, Warnings& load_warnings, Inputs& inputs, const CommonFlags& f) {
    Warnings merged = load_warnings;
    merged.append(report.warnings);
    report.warnings = std::move(merged);
    report.provenance.inputs = std::move(inputs.digests());
    if (f.provenance) report.provenance.generated_at = utc_now();
    write_report(report, f);
}

void write_plot(const std::string& path, std::span<const LabeledSummary> summaries) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw Error(ErrorCategory::Io, fmt::format("cannot write '{}'", path));
    write_plot_csv(out, er_ri_plot_data(summaries));
}

// --- fetch-dataset ---------------------------------------------------------

std::size_t write_to_file(char* data, std::size_t size, std::size_t n, void* stream) {
    return std::fwrite(data, size, n, static_cast<std::FILE*>(stream));
}

fs::path cache_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("REPRO_CACHE_DIR"); env != nullptr && *env != '\0') return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') return fs::path(xdg) / "repro_eval";
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
        return fs::path(home) / ".cache" / "repro_eval";
    }
    return fs::temp_directory_path() / "repro_eval";
}

void fetch_dataset(const std::string& url, const fs::path& dir, bool extract) {
    fs::create_directories(dir);
    const fs::path archive = dir / "runs.tar.gz";
    std::FILE* file = std::fopen(archive.c_str(), "wb");
    if (file == nullptr) throw Error(ErrorCategory::Io, fmt::format("cannot write '{}'", archive.string()));

    curl_global_init(CURL_GLOBAL_DEFAULT);
    CURL* curl = curl_easy_init();
    if (curl == nullptr) {
        std::fclose(file);
        throw Error(ErrorCategory::Io, "curl initialisation failed");
    }
    curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, write_to_file);
    curl_easy_setopt(curl, CURLOPT_WRITEDATA, file);
    const CURLcode rc = curl_easy_perform(curl);
    curl_easy_cleanup(curl);
    curl_global_cleanup();
    std::fclose(file);
    if (rc != CURLE_OK) {
        fs::remove(archive);
        throw Error(ErrorCategory::Io, fmt::format("download of {} failed: {}", url, curl_easy_strerror(rc)));
    }
    std::cerr << fmt::format("downloaded {} ({} bytes, sha256 {})\n", archive.string(), fs::file_size(archive),
                             sha256_file(archive));
    if (!extract) return;
    const std::string cmd = fmt::format("tar -xzf '{}' -C '{}'", archive.string(), dir.string());
    if (std::system(cmd.c_str()) != 0) throw Error(ErrorCategory::Io, "extracting the archive failed");
    std::cerr << fmt::format("extracted into {}\nqrels are not included; supply them with --qrels\n", dir.string());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Replicability and reproducibility measures for TREC-style retrieval runs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "repro_eval 1.0.0");

    CommonFlags rep_flags;
    std::string run_orig, run_rpl, qrels, run_b_orig, run_b_rpl, rep_plot;
    auto* rep = app.add_subcommand("replicate", "Compare a replicated run with the original on the same collection");
    rep->add_option("--run-orig", run_orig, "Original (advanced) run")->required();
    rep->add_option("--run-rpl", run_rpl, "Replicated (advanced) run")->required();
    rep->add_option("--qrels", qrels, "Relevance judgments")->required();
    auto* b_orig = rep->add_option("--run-b-orig", run_b_orig, "Original baseline run");
    auto* b_rpl = rep->add_option("--run-b-rpl", run_b_rpl, "Replicated baseline run");
    b_orig->needs(b_rpl);
    b_rpl->needs(b_orig);
    rep->add_option("--plot-out", rep_plot, "Write ER / delta-RI plot data (CSV)");
    add_common(rep, rep_flags);

    CommonFlags rpd_flags;
    std::string b_c, a_c, qrels_c, b_d, a_d, qrels_d, rpd_plot;
    auto* rpd = app.add_subcommand("reproduce", "Compare an effect re-created on a different collection");
    rpd->add_option("--run-b-orig", b_c, "Original baseline run")->required();
    rpd->add_option("--run-a-orig", a_c, "Original advanced run")->required();
    rpd->add_option("--qrels-orig", qrels_c, "Qrels of the original collection")->required();
    rpd->add_option("--run-b-rpd", b_d, "Reproduced baseline run")->required();
    rpd->add_option("--run-a-rpd", a_d, "Reproduced advanced run")->required();
    rpd->add_option("--qrels-rpd", qrels_d, "Qrels of the new collection")->required();
    rpd->add_option("--plot-out", rpd_plot, "Write ER / delta-RI plot data (CSV)");
    add_common(rpd, rpd_flags);

    CommonFlags cor_flags;
    std::string manifest, cor_plot;
    auto* cor = app.add_subcommand("correlate", "Correlate reproducibility measures over a set of runs");
    cor->add_option("--manifest", manifest, "JSON manifest listing the original and candidate runs")->required();
    cor->add_option("--plot-out", cor_plot, "Write ER / delta-RI plot data (CSV)");
    cor_flags.format = "csv";
    add_common(cor, cor_flags);

    std::string url = kDefaultArchiveUrl, dest;
    bool no_extract = false;
    auto* fetch = app.add_subcommand("fetch-dataset", "Download the public companion run archive");
    fetch->add_option("--url", url, "Archive URL")->capture_default_str();
    fetch->add_option("--dest", dest, "Target directory (default: $REPRO_CACHE_DIR)");
    fetch->add_flag("--no-extract", no_extract, "Keep the archive packed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("config", e.what(), exit_code(ErrorCategory::Config));
    }

    try {
        if (*rep) {
            const ComparisonOptions options = options_from(rep_flags);
            Warnings load_warnings;
            Inputs in(options.strict ? ParseMode::Strict : ParseMode::Lenient, &load_warnings);
            ReplicateRequest req{in.run("original", run_orig), in.run("replicated", run_rpl), in.qrels("qrels", qrels),
                                 std::nullopt, std::nullopt};
            if (!run_b_orig.empty()) {
                req.baseline_original = in.run("baseline_original", run_b_orig);
                req.baseline_replicated = in.run("baseline_replicated", run_b_rpl);
            }
            ComparisonReport report = replicate(req, options);
            std::vector<LabeledSummary> plot;
            for (const auto& b : report.replication) {
                if (b.effect) plot.push_back({report.runs["replicated"], b.effect->summary});
            }
            write_plot(rep_plot, plot);
            finish(report, load_warnings, in, rep_flags);
        } else if (*rpd) {
            const ComparisonOptions options = options_from(rpd_flags);
            Warnings load_warnings;
            Inputs in(options.strict ? ParseMode::Strict : ParseMode::Lenient, &load_warnings);
            ReproduceRequest req{in.run("baseline_original", b_c),   in.run("advanced_original", a_c),
                                 in.qrels("qrels_original", qrels_c), in.run("baseline_reproduced", b_d),
                                 in.run("advanced_reproduced", a_d),  in.qrels("qrels_reproduced", qrels_d)};
            ComparisonReport report = reproduce(req, options);
            std::vector<LabeledSummary> plot;
            for (const auto& b : report.reproduction) {
                if (b.effect) plot.push_back({report.runs["advanced_reproduced"], b.effect->summary});
            }
            write_plot(rpd_plot, plot);
            finish(report, load_warnings, in, rpd_flags);
        } else if (*cor) {
            ComparisonOptions options = options_from(cor_flags);
            const Manifest m = load_manifest(manifest);
            if (!m.measures.empty()) {
                options.measures.clear();
                for (const auto& id : m.measures) options.measures.push_back(MeasureConfig::parse(id));
                options.validate();
            }
            Warnings load_warnings;
            std::vector<InputDigest> digests;
            const CorrelateRequest req = load_correlate_request(
                m, options.strict ? ParseMode::Strict : ParseMode::Lenient, &load_warnings, &digests);
            CorrelationReport report = correlate(req, options);
            Warnings merged = load_warnings;
            merged.append(report.warnings);
            report.warnings = std::move(merged);
            report.provenance.inputs = std::move(digests);
            if (cor_flags.provenance) report.provenance.generated_at = utc_now();
            write_plot(cor_plot, report.effects);
            write_report(report, cor_flags);
        } else if (*fetch) {
            fetch_dataset(url, cache_dir(dest), !no_extract);
        }
    } catch (const Error& e) {
        return fail(category_name(e.category()), e.what(), exit_code(e.category()));
    } catch (const fs::filesystem_error& e) {
        return fail("io", e.what(), exit_code(ErrorCategory::Io));
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
    return 0;
}
