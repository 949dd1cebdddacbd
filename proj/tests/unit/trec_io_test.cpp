#include "repro/trec_io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace repro;

TEST(ParseRun, SingleRecord) {
    const repro::Run run = parse_run("301 Q0 NYT1 1 12.5 sys\n");
    EXPECT_EQ(run.tag, "sys");
    ASSERT_EQ(run.topics.size(), 1u);
    const auto* list = run.find("301");
    ASSERT_NE(list, nullptr);
    ASSERT_EQ(list->size(), 1u);
    EXPECT_EQ((*list)[0], (RankedDoc{"NYT1", 1, 12.5}));
}

TEST(ParseRun, ScoreOrderOverridesFileRanks) {
    const repro::Run run = parse_run("301 Q0 A 1 1.0 sys\n301 Q0 B 2 2.0 sys\n");
    const auto& list = *run.find("301");
    EXPECT_EQ(list[0].doc_id, "B");
    EXPECT_EQ(list[0].rank, 1);
    EXPECT_EQ(list[1].doc_id, "A");
    EXPECT_EQ(list[1].rank, 2);
}

TEST(ParseRun, TiesBreakByDocIdDescending) {
    const repro::Run run = parse_run("1 Q0 A 1 5 s\n1 Q0 C 2 5 s\n1 Q0 B 3 5 s\n");
    const auto& list = *run.find("1");
    EXPECT_EQ(list[0].doc_id, "C");
    EXPECT_EQ(list[1].doc_id, "B");
    EXPECT_EQ(list[2].doc_id, "A");
}

TEST(ParseRun, StrictDuplicateNamesLine) {
    try {
        parse_run("301 Q0 A 1 2.0 s\n301 Q0 B 2 1.0 s\n301 Q0 A 3 0.5 s\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
        EXPECT_EQ(e.category(), ErrorCategory::Parse);
    }
}

TEST(ParseRun, LenientKeepsHigherScoredDuplicate) {
    Warnings w;
    const repro::Run run = parse_run("301 Q0 A 1 0.5 s\n301 Q0 A 2 3.0 s\n301 Q0 B 3 1.0 s\n", ParseMode::Lenient, &w);
    const auto& list = *run.find("301");
    ASSERT_EQ(list.size(), 2u);
    EXPECT_EQ(list[0].doc_id, "A");
    EXPECT_DOUBLE_EQ(list[0].score, 3.0);
    EXPECT_FALSE(w.empty());
}

TEST(ParseRun, StrictRejectsMalformedLines) {
    EXPECT_THROW(parse_run("301 Q0 A 1 s\n"), ParseError);
    EXPECT_THROW(parse_run("301 Q0 A 1 abc s\n"), ParseError);
    EXPECT_THROW(parse_run("301 Q0 A x 1.0 s\n"), ParseError);
    EXPECT_THROW(parse_run("301 Q0 A 1 nan s\n"), ParseError);
}

TEST(ParseRun, LenientSkipsMalformedLines) {
    Warnings w;
    const repro::Run run = parse_run("301 Q0 A 1 s\n301 Q0 B 1 1.0 s\n", ParseMode::Lenient, &w);
    EXPECT_EQ(run.find("301")->size(), 1u);
    EXPECT_EQ(w.size(), 1u);
}

TEST(ParseRun, EmptyInputIsError) {
    EXPECT_THROW(parse_run(""), ParseError);
    EXPECT_THROW(parse_run("\n\n", ParseMode::Lenient), ParseError);
}

TEST(ParseRun, RoundTripIsIdempotent) {
    const std::string text = "302 Q0 X 9 0.25 t\n301 Q0 B 1 1.5 t\n301 Q0 A 2 1.5 t\n301 Q0 C 3 1e-3 t\n";
    const repro::Run first = parse_run(text);
    std::ostringstream out1;
    write_run(out1, first);
    const repro::Run second = parse_run(out1.str());
    std::ostringstream out2;
    write_run(out2, second);
    EXPECT_EQ(first, second);
    EXPECT_EQ(out1.str(), out2.str());
}

TEST(ParseRun, LinePermutationDoesNotChangeRun) {
    std::vector<std::string> lines;
    for (int t = 0; t < 3; ++t) {
        for (int d = 0; d < 8; ++d) {
            lines.push_back(std::to_string(400 + t) + " Q0 doc" + std::to_string(d) + " 0 " +
                            std::to_string(d % 3) + " r");
        }
    }
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& l : v) s += l + "\n";
        return s;
    };
    const repro::Run reference = parse_run(join(lines));
    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        std::shuffle(lines.begin(), lines.end(), rng);
        EXPECT_EQ(parse_run(join(lines)), reference);
    }
}

TEST(ParseRun, LoadRunPrefixesPathAndKeepsLine) {
    const auto path = std::filesystem::temp_directory_path() / "repro_trec_io_bad.run";
    {
        std::ofstream f(path);
        f << "1 Q0 A 1 1.0 s\n1 Q0 B 2 oops s\n";
    }
    try {
        load_run(path);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
    }
    std::filesystem::remove(path);
    EXPECT_THROW(load_run(path), Error);
}

TEST(TopicOrder, NumericBeforeLexicographic) {
    TopicLess less;
    EXPECT_TRUE(less("9", "10"));
    EXPECT_FALSE(less("10", "9"));
    EXPECT_TRUE(less("301", "abc"));
    EXPECT_TRUE(less("a1", "b0"));
}

TEST(ParseQrels, GradeLookup) {
    const Qrels q = parse_qrels("301 0 NYT1 2\n");
    EXPECT_EQ(q.grade("301", "NYT1"), 2);
    EXPECT_EQ(q.grade("301", "NYT9"), 0);
    EXPECT_EQ(q.grade("999", "NYT1"), 0);
}

TEST(ParseQrels, NegativeGradeClampsWithWarning) {
    Warnings w;
    const Qrels q = parse_qrels("301 0 NYT1 -1\n", &w);
    EXPECT_EQ(q.grade("301", "NYT1"), 0);
    EXPECT_EQ(w.size(), 1u);
}

TEST(ParseQrels, RepeatedJudgmentKeepsLast) {
    Warnings w;
    const Qrels q = parse_qrels("1 0 A 1\n1 0 A 3\n", &w);
    EXPECT_EQ(q.grade("1", "A"), 3);
    EXPECT_EQ(w.size(), 1u);
}

TEST(ParseQrels, Malformed) {
    EXPECT_THROW(parse_qrels("1 0 A\n"), ParseError);
    EXPECT_THROW(parse_qrels("1 0 A x\n"), ParseError);
    EXPECT_THROW(parse_qrels(""), ParseError);
}

TEST(TopicIntersection, KeepsOnlyTopicsWithRelevantDocs) {
    const repro::Run a = parse_run("301 Q0 A 1 1 s\n302 Q0 B 1 1 s\n");
    const repro::Run b = parse_run("301 Q0 A 1 1 t\n302 Q0 B 1 1 t\n");
    const Qrels q = parse_qrels("301 0 A 1\n302 0 B 0\n");
    EXPECT_EQ(topic_intersection(a, b, q).ids(), std::vector<std::string>{"301"});
}

TEST(TopicIntersection, IdenticalRunsFullQrels) {
    const repro::Run a = parse_run("301 Q0 A 1 1 s\n302 Q0 B 1 1 s\n");
    const Qrels q = parse_qrels("301 0 A 1\n302 0 B 1\n");
    EXPECT_EQ(topic_intersection(a, a, q).ids(), (std::vector<std::string>{"301", "302"}));
}

TEST(TopicIntersection, DisjointTopicsIsError) {
    const repro::Run a = parse_run("301 Q0 A 1 1 s\n");
    const repro::Run b = parse_run("302 Q0 A 1 1 s\n");
    const Qrels q = parse_qrels("301 0 A 1\n302 0 A 1\n");
    try {
        topic_intersection(a, b, q);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Input);
    }
}
