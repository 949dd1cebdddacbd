#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string data(const std::string& name) { return (fs::path(REPRO_TEST_DATA_DIR) / name).string(); }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("repro_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Result run(const std::string& args) {
        const fs::path out = dir_ / "stdout";
        const fs::path err = dir_ / "stderr";
        const std::string cmd =
            std::string("'") + REPRO_EVAL_BIN + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
        const int status = std::system(cmd.c_str());
        Result r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    std::string replicate_args() const {
        return "replicate --run-orig " + data("orig.run") + " --run-rpl " + data("rpl.run") + " --qrels " +
               data("qrels_orig.txt");
    }

    std::string reproduce_args(const std::string& qrels_rpd) const {
        return "reproduce --run-b-orig " + data("base_orig.run") + " --run-a-orig " + data("orig.run") +
               " --qrels-orig " + data("qrels_orig.txt") + " --run-b-rpd " + data("base_rpd.run") + " --run-a-rpd " +
               data("adv_rpd.run") + " --qrels-rpd " + data(qrels_rpd);
    }

    fs::path dir_;
};

void expect_error(const Result& r, int code, const std::string& category) {
    EXPECT_EQ(r.code, code) << r.err;
    const auto doc = nlohmann::json::parse(r.err);
    EXPECT_EQ(doc["error"]["category"], category);
    EXPECT_TRUE(doc["error"]["message"].is_string());
}

} // namespace

TEST_F(Cli, ReplicateJsonHasThreeMeasures) {
    const auto r = run(replicate_args() + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["mode"], "replicability");
    EXPECT_EQ(doc["measures"].size(), 3u);
    EXPECT_TRUE(doc["ordering"].contains("rbo"));
}

TEST_F(Cli, MeasureFilterGivesOneBlock) {
    const auto r = run(replicate_args() + " --format json --measures P@10");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    ASSERT_EQ(doc["measures"].size(), 1u);
    EXPECT_EQ(doc["measures"][0]["measure"], "P@10");
}

TEST_F(Cli, OutputIsByteIdentical) {
    for (const char* fmt : {"json", "csv", "table"}) {
        const auto a = run(replicate_args() + " --format " + fmt + " --cutoffs 5,10");
        const auto b = run(replicate_args() + " --format " + fmt + " --cutoffs 5,10");
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out) << fmt;
    }
}

TEST_F(Cli, CsvHeader) {
    const auto r = run(replicate_args() + " --format csv");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
              "mode,measure,run_original,run_replicated,topics,arp_original,arp_replicated,delta_arp,"
              "delta_arp_signed,rmse,t_stat,dof,p_value,tau_union,tau_intersection,tau_overlap,rbo,er,ri,"
              "ri_prime,delta_ri,region");
}

TEST_F(Cli, EffectBlockWithBaselines) {
    const auto r = run(replicate_args() + " --run-b-orig " + data("base_orig.run") + " --run-b-rpl " +
                       data("base_rpl.run") + " --format json --plot-out " + (dir_ / "plot.csv").string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    for (const auto& m : doc["measures"]) {
        ASSERT_TRUE(m["effect"].is_object()) << m["measure"];
        EXPECT_TRUE(m["effect"].contains("er"));
    }
    const std::string plot = slurp(dir_ / "plot.csv");
    EXPECT_EQ(plot.substr(0, plot.find('\n')), "run,measure,er,delta_ri,region,dist");
}

TEST_F(Cli, BaselineNeedsItsPair) {
    const auto r = run(replicate_args() + " --run-b-orig " + data("base_orig.run"));
    EXPECT_NE(r.code, 0);
}

TEST_F(Cli, OutputFile) {
    const fs::path out = dir_ / "report.json";
    const auto r = run(replicate_args() + " --format json -o " + out.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(nlohmann::json::accept(slurp(out)));
}

TEST_F(Cli, MissingFileIsIoError) {
    const auto r = run("replicate --run-orig " + data("nope.run") + " --run-rpl " + data("rpl.run") + " --qrels " +
                       data("qrels_orig.txt"));
    expect_error(r, 5, "io");
}

TEST_F(Cli, MalformedRunIsParseErrorInStrictMode) {
    std::ofstream(dir_ / "bad.run") << "301 Q0 DOC001 1 not_a_number tag\n";
    const auto r = run("replicate --strict --run-orig " + (dir_ / "bad.run").string() + " --run-rpl " +
                       data("rpl.run") + " --qrels " + data("qrels_orig.txt"));
    expect_error(r, 2, "parse");
}

TEST_F(Cli, UnknownMeasureIsConfigError) {
    const auto r = run(replicate_args() + " --measures MRR");
    expect_error(r, 6, "config");
}

TEST_F(Cli, ReproduceJson) {
    const auto r = run(reproduce_args("qrels_rpd.txt") + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["mode"], "reproducibility");
    EXPECT_EQ(doc["measures"].size(), 3u);
    EXPECT_EQ(doc["topics_original"], 6);
    EXPECT_EQ(doc["topics_reproduced"], 5);
}

TEST_F(Cli, ReproduceWithMismatchedCollection) {
    // Reproduced runs scored against the original judgments share no topics.
    const auto r = run(reproduce_args("qrels_orig.txt"));
    expect_error(r, 3, "input");
}

TEST_F(Cli, CorrelateManifest) {
    const auto r = run("correlate --manifest " + data("manifest.json") + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["runs"].size(), 4u);
    const auto k = doc["measures"].size();
    EXPECT_EQ(doc["matrix"].size(), k);
    const auto csv = run("correlate --manifest " + data("manifest.json"));
    ASSERT_EQ(csv.code, 0) << csv.err;
    EXPECT_EQ(csv.out.rfind("measure,", 0), 0u);
}

TEST_F(Cli, CorrelateMissingRunNamesEntry) {
    const auto r = run("correlate --manifest " + data("manifest_missing.json"));
    expect_error(r, 5, "io");
    EXPECT_NE(r.err.find("cand_3"), std::string::npos) << r.err;
}

TEST_F(Cli, HelpListsSubcommands) {
    const auto r = run("--help");
    EXPECT_EQ(r.code, 0);
    for (const char* sub : {"replicate", "reproduce", "correlate", "fetch-dataset"}) {
        EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
    }
}
