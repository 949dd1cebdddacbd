#include "repro/report.hpp"

#include "synthetic.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace repro;

namespace {

struct Fixture {
    synth::Collection c;
    repro::Run orig;
    repro::Run rpl;
    repro::Run base;
};

Fixture make(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Fixture f;
    f.c = synth::make_collection(rng, 8, 40);
    f.orig = synth::make_run(rng, f.c, 30, "orig");
    f.rpl = synth::perturb(f.orig, rng, 6, "rpl");
    f.base = synth::make_run(rng, f.c, 30, "base");
    return f;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string emitted(const ComparisonReport& r, OutputFormat f) {
    std::ostringstream out;
    emit(out, r, f);
    return out.str();
}

} // namespace

TEST(Replicate, SelfComparison) {
    const Fixture f = make(1);
    ReplicateRequest req{f.orig, f.orig, f.c.qrels, f.base, f.base};
    ComparisonOptions opt;
    opt.cutoffs = {5, 10};
    const auto r = replicate(req, opt);
    ASSERT_TRUE(r.ordering);
    EXPECT_DOUBLE_EQ(*r.ordering->tau_union, 1.0);
    EXPECT_NEAR(r.ordering->rbo, 1.0 - std::pow(0.8, 30.0), 1e-12);
    ASSERT_EQ(r.replication.size(), 3u);
    for (const auto& b : r.replication) {
        EXPECT_DOUBLE_EQ(b.rmse, 0.0);
        EXPECT_DOUBLE_EQ(b.delta.absolute, 0.0);
        EXPECT_DOUBLE_EQ(b.test.p_value, 1.0);
        ASSERT_TRUE(b.effect) << b.measure_id;
        EXPECT_DOUBLE_EQ(b.effect->summary.er, 1.0);
        EXPECT_DOUBLE_EQ(b.effect->summary.delta_ri, 0.0);
        for (const auto& [k, v] : b.rmse_at_cutoffs) EXPECT_DOUBLE_EQ(v, 0.0);
    }
}

TEST(Replicate, MeasureFilter) {
    const Fixture f = make(2);
    ComparisonOptions opt;
    opt.measures = {MeasureConfig::parse("P@10")};
    const auto r = replicate({f.orig, f.rpl, f.c.qrels, std::nullopt, std::nullopt}, opt);
    ASSERT_EQ(r.replication.size(), 1u);
    EXPECT_EQ(r.replication[0].measure_id, "P@10");
    EXPECT_FALSE(r.replication[0].effect);
}

TEST(Replicate, StrictTopicMismatch) {
    Fixture f = make(3);
    f.rpl.topics.erase(f.rpl.topics.begin());
    ComparisonOptions opt;
    const auto lenient = replicate({f.orig, f.rpl, f.c.qrels, std::nullopt, std::nullopt}, opt);
    EXPECT_EQ(lenient.topics, 7u);
    EXPECT_FALSE(lenient.warnings.empty());
    opt.strict = true;
    EXPECT_THROW(replicate({f.orig, f.rpl, f.c.qrels, std::nullopt, std::nullopt}, opt), Error);
}

TEST(Replicate, UndefinedErDropsEffectBlockWithWarning) {
    const Fixture f = make(4);
    ComparisonOptions opt;
    opt.measures = {MeasureConfig{}};
    // baseline == advanced in the original: mean improvement 0.
    const auto r = replicate({f.orig, f.rpl, f.c.qrels, f.orig, f.base}, opt);
    EXPECT_FALSE(r.replication[0].effect);
    bool found = false;
    for (const auto& w : r.warnings.items()) found = found || w.find("undefined ER") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(Reproduce, SameCollectionSameRuns) {
    const Fixture f = make(5);
    const auto r = reproduce({f.base, f.orig, f.c.qrels, f.base, f.orig, f.c.qrels}, ComparisonOptions{});
    EXPECT_FALSE(r.ordering);
    EXPECT_TRUE(r.replication.empty());
    ASSERT_EQ(r.reproduction.size(), 3u);
    for (const auto& b : r.reproduction) {
        EXPECT_DOUBLE_EQ(b.baseline_test.p_value, 1.0);
        EXPECT_DOUBLE_EQ(b.advanced_test.p_value, 1.0);
        ASSERT_TRUE(b.effect);
        EXPECT_DOUBLE_EQ(b.effect->summary.er, 1.0);
        EXPECT_DOUBLE_EQ(b.effect->summary.delta_ri, 0.0);
    }
}

TEST(Reproduce, MismatchedCollectionIsError) {
    const Fixture f = make(6);
    const Qrels other = parse_qrels("999 0 X 1\n");
    try {
        reproduce({f.base, f.orig, f.c.qrels, f.base, f.orig, other}, ComparisonOptions{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Input);
    }
}

TEST(Emit, DeterministicAndParsable) {
    const Fixture f = make(7);
    ComparisonOptions opt;
    opt.cutoffs = {1, 10};
    const auto r = replicate({f.orig, f.rpl, f.c.qrels, f.base, f.base}, opt);
    for (const auto fmt : {OutputFormat::Json, OutputFormat::Csv, OutputFormat::Table}) {
        EXPECT_EQ(emitted(r, fmt), emitted(r, fmt));
    }
    const std::string json = emitted(r, OutputFormat::Json);
    const auto doc = nlohmann::json::parse(json);
    EXPECT_EQ(doc.dump(2) + "\n", json);
    EXPECT_EQ(doc["measures"].size(), 3u);
    EXPECT_EQ(doc["mode"], "replicability");
    EXPECT_FALSE(doc["provenance"].contains("generated_at"));
    EXPECT_EQ(first_line(emitted(r, OutputFormat::Csv)), kReplicabilityCsvHeader);

    const auto rp = reproduce({f.base, f.orig, f.c.qrels, f.base, f.rpl, f.c.qrels}, ComparisonOptions{});
    EXPECT_EQ(first_line(emitted(rp, OutputFormat::Csv)), kReproducibilityCsvHeader);
}

TEST(Emit, CsvRowsHaveHeaderWidth) {
    const Fixture f = make(8);
    const auto r = replicate({f.orig, f.rpl, f.c.qrels, f.base, f.base}, ComparisonOptions{});
    std::istringstream in(emitted(r, OutputFormat::Csv));
    std::string line;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        const auto cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
        if (width == 0) width = cols;
        EXPECT_EQ(cols, width);
    }
}

TEST(Emit, UnknownFormat) {
    EXPECT_THROW(parse_format("xml"), Error);
    EXPECT_EQ(parse_format("table"), OutputFormat::Table);
}

TEST(Format, PValues) {
    EXPECT_EQ(format_p_value(6e-6), "6E-06");
    EXPECT_EQ(format_p_value(8e-19), "8E-19");
    EXPECT_EQ(format_p_value(0.551), "0.551");
    EXPECT_EQ(format_p_value(0.0772), "0.077");
    EXPECT_EQ(format_p_value(1.0), "1.000");
    EXPECT_EQ(format_p_value(0.0), "0");
}

TEST(Options, Validation) {
    ComparisonOptions opt;
    opt.measures = {MeasureConfig{}, MeasureConfig{}};
    EXPECT_THROW(opt.validate(), Error);
    opt.measures = {};
    EXPECT_THROW(opt.validate(), Error);
    opt = ComparisonOptions{};
    opt.cutoffs = {10, 5};
    EXPECT_THROW(opt.validate(), Error);
    opt.cutoffs = {};
    opt.rbo.phi = 1.5;
    EXPECT_THROW(opt.validate(), Error);
}

TEST(Manifest, ParsesAndResolvesPaths) {
    std::istringstream in(R"({"qrels": "q.txt", "original": "o.run",
        "runs": [{"id": "x", "run": "x.run"}, {"id": "y", "run": "/abs/y.run"}]})");
    const Manifest m = parse_manifest(in, "/base");
    EXPECT_EQ(m.mode, EffectMode::Replicability);
    EXPECT_EQ(m.qrels, std::filesystem::path("/base/q.txt"));
    EXPECT_EQ(m.runs.size(), 2u);
    EXPECT_EQ(m.runs[1].run, std::filesystem::path("/abs/y.run"));
}

TEST(Manifest, Errors) {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_manifest(in, ".");
    };
    EXPECT_THROW(parse("{"), Error);
    EXPECT_THROW(parse(R"({"qrels": "q", "original": "o", "runs": [{"id": "x", "run": "x"}]})"), Error);
    EXPECT_THROW(parse(R"({"qrels": "q", "original": "o", "runs": [{"id": "x", "run": "x"}, {"id": "x", "run": "y"}]})"),
                 Error);
    EXPECT_THROW(parse(R"({"original": "o", "runs": []})"), Error);
}

TEST(Manifest, MissingFileNamesEntry) {
    Manifest m;
    m.qrels = "/nonexistent/q.txt";
    m.original = "/nonexistent/o.run";
    m.runs = {{"cand_a", "/nonexistent/a.run", std::nullopt}, {"cand_b", "/nonexistent/b.run", std::nullopt}};
    try {
        load_correlate_request(m, ParseMode::Lenient, nullptr);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Io);
        EXPECT_NE(std::string(e.what()).find("'qrels'"), std::string::npos);
    }
}

TEST(Correlate, AgreeingMeasuresAndStructure) {
    const Fixture f = make(9);
    std::mt19937_64 rng(99);
    CorrelateRequest req;
    req.qrels = f.c.qrels;
    req.original = f.orig;
    for (int i = 0; i < 20; ++i) {
        req.candidates.push_back({"c" + std::to_string(i), synth::perturb(f.orig, rng, i + 1, "c"), std::nullopt,
                                  std::nullopt});
    }
    const auto r = correlate(req, ComparisonOptions{});
    const std::size_t k = r.measure_ids.size();
    EXPECT_EQ(k, 3u + 2u + 3u + 3u);
    for (std::size_t i = 0; i < k; ++i) {
        EXPECT_DOUBLE_EQ(r.matrix.tau[i][i], 1.0);
        for (std::size_t j = 0; j < k; ++j) {
            const double a = r.matrix.tau[i][j];
            const double b = r.matrix.tau[j][i];
            EXPECT_TRUE((std::isnan(a) && std::isnan(b)) || a == b);
        }
    }
    EXPECT_EQ(r.flags.size(), k * (k - 1) / 2);

    CorrelateRequest tiny;
    tiny.qrels = f.c.qrels;
    tiny.original = f.orig;
    tiny.candidates = {req.candidates[0]};
    EXPECT_THROW(correlate(tiny, ComparisonOptions{}), Error);
}

TEST(Correlate, TwoRunsTwoAgreeingMeasures) {
    const Fixture f = make(10);
    std::mt19937_64 rng(1);
    CorrelateRequest req;
    req.qrels = f.c.qrels;
    req.original = f.orig;
    req.candidates.push_back({"close", f.orig, std::nullopt, std::nullopt});
    req.candidates.push_back({"far", synth::make_run(rng, f.c, 30, "far"), std::nullopt, std::nullopt});
    ComparisonOptions opt;
    opt.measures = {MeasureConfig{}};
    const auto r = correlate(req, opt);
    EXPECT_DOUBLE_EQ(r.matrix.at("tau_union", "rbo"), 1.0);
}
