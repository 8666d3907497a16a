// Copyright 2026 The subkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subkit/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "subkit/report_json.hpp"
#include "support/generators.hpp"

using namespace subkit;

namespace {

std::vector<AnnotatedSentence> corpus(std::initializer_list<const char*> lines) {
    std::vector<AnnotatedSentence> out;
    for (const char* l : lines) {
        out.push_back(AnnotatedSentence::from_string(l));
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kFixture = std::string(SUBKIT_TEST_DATA_DIR) + "/fixture20/";

} // namespace

// ---------------------------------------------------------------------------
// BLEU

TEST(BleuTest, IdentityIsHundred) {
    const auto c = corpus({"a b c d <eob>", "the quick brown fox jumps <eol> over <eob>"});
    EXPECT_DOUBLE_EQ(bleu(c, c, true), 100.0);
    EXPECT_DOUBLE_EQ(bleu(c, c, false), 100.0);
}

TEST(BleuTest, HandCountedToyCorpus) {
    const auto hyp = corpus({"the cat sat down", "a dog ran", "hello"});
    const auto ref = corpus({"the cat sat down", "a dog runs", "hello there"});
    // 1-grams 7/8, 2-grams 4/5, 3-grams 2/3, 4-grams 1/1; lengths 8 vs 9.
    const double expected = 100.0 * std::exp(1.0 - 9.0 / 8.0) * std::pow(7.0 / 8.0 * 4.0 / 5.0 * 2.0 / 3.0, 0.25);
    EXPECT_NEAR(bleu(hyp, ref, true), expected, 1e-9);
    const auto stats = bleu_stats(hyp, ref, true);
    EXPECT_EQ(stats.matches, (std::array<std::size_t, 4>{7, 4, 2, 1}));
    EXPECT_EQ(stats.totals, (std::array<std::size_t, 4>{8, 5, 3, 1}));
}

TEST(BleuTest, ClipsRepeatedNgrams) {
    const auto stats = bleu_stats(corpus({"the the the"}), corpus({"the cat"}), true);
    EXPECT_EQ(stats.matches[0], 1u);
    EXPECT_EQ(stats.totals[0], 3u);
}

TEST(BleuTest, NoMatchingOrderGivesZero) {
    EXPECT_EQ(bleu(corpus({"a b c d"}), corpus({"d c b a"}), true), 0.0);
}

TEST(BleuTest, WrongBreakScoresLowerWithBreaks) {
    const auto ref = corpus({"one two three four <eol> five six seven eight <eob>"});
    const auto hyp = corpus({"one two three four <eob> five six seven eight <eob>"});
    EXPECT_LT(bleu(hyp, ref, true), bleu(hyp, ref, false));
    EXPECT_DOUBLE_EQ(bleu(hyp, ref, false), 100.0);
}

TEST(BleuTest, CountMismatchIsAnError) {
    EXPECT_THROW(bleu(corpus({"a"}), corpus({"a", "b"}), true), MismatchError);
}

TEST(BleuPropertyTest, HundredIffEqualAndNobIgnoresBreaks) {
    gen::Random r(31);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<AnnotatedSentence> ref, rebroken;
        for (std::size_t i = r.uniform(1, 4); i > 0; --i) {
            ref.push_back(r.sentence(r.uniform(4, 12)));
            // Same words, fresh breaks.
            std::vector<Item> items;
            const auto words = strip_breaks(ref.back());
            for (std::size_t k = 0; k < words.size(); ++k) {
                items.emplace_back(Token{words[k]});
                if (k + 1 < words.size() && r.chance(0.3)) {
                    items.emplace_back(r.chance(0.5) ? BreakSymbol::LineBreak : BreakSymbol::BlockBreak);
                }
            }
            rebroken.push_back(AnnotatedSentence::from_items(std::move(items)));
        }
        EXPECT_DOUBLE_EQ(bleu(ref, ref, true), 100.0);
        EXPECT_NEAR(bleu(rebroken, ref, false), 100.0, 1e-9);
        const bool same = rebroken == ref;
        EXPECT_EQ(std::fabs(bleu(rebroken, ref, true) - 100.0) < 1e-9, same);
    }
}

// ---------------------------------------------------------------------------
// Conformity

TEST(CplTest, FortySixCharacterLineFails) {
    const auto c = corpus({"Un cadre d'une autre entreprise aime expliquer <eob>"});
    const auto blocks = blocks_from_annotated(c[0]);
    EXPECT_EQ(line_chars(blocks[0][0]), 46u);
    EXPECT_FALSE(block_conforms(blocks[0], Constraints{}));
    EXPECT_DOUBLE_EQ(cpl_conformity(c).percentage(), 0.0);
}

TEST(CplTest, Examples) {
    EXPECT_DOUBLE_EQ(cpl_conformity(corpus({"hi"})).percentage(), 100.0);
    const auto c = corpus({"abcdefghij abcdefghij abcdefghij abcdefghij <eob> short <eob>"});
    EXPECT_EQ(line_chars(blocks_from_annotated(c[0])[0][0]), 43u);
    EXPECT_DOUBLE_EQ(cpl_conformity(c).percentage(), 50.0);
    EXPECT_DOUBLE_EQ(cpl_conformity(corpus({"a <eol> b <eol> c <eob>"})).percentage(), 0.0);
}

TEST(CpsTest, BoundaryIsInclusive) {
    const std::string forty_two = "abcdefghij abcdefghij abcdefghij abcdefghi";
    const std::string forty_three = forty_two + "j";
    ASSERT_EQ(char_count(forty_two), 42u);
    const auto c = corpus({forty_two.c_str(), forty_three.c_str()});
    DurationMap d;
    d.emplace(0, SentenceDuration(2.0));
    d.emplace(1, SentenceDuration(2.0));
    const auto conf = cps_conformity(c, d);
    EXPECT_EQ(conf.conforming, 1u);
    EXPECT_DOUBLE_EQ(conf.percentage(), 50.0);
}

TEST(CpsTest, BreaksDoNotCount) {
    DurationMap d;
    d.emplace(0, SentenceDuration(1.0));
    Constraints c;
    c.max_chars_per_second = 3.0;
    EXPECT_DOUBLE_EQ(cps_conformity(corpus({"a <eol> b <eob>"}), d, c).percentage(), 100.0);
}

TEST(CpsTest, Errors) {
    EXPECT_THROW(cps_conformity({}, DurationMap{}), MismatchError);
    try {
        cps_conformity(corpus({"a", "b"}), DurationMap{{0, SentenceDuration(1.0)}});
        FAIL();
    } catch (const MismatchError& e) {
        EXPECT_NE(std::string(e.what()).find("sentence 1"), std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// Break accuracy

TEST(BreakAccuracyTest, Examples) {
    EXPECT_EQ(break_type_accuracy(corpus({"a <eol> b <eob>"}), corpus({"x <eol> y <eob>"})).accuracy, 100.0);
    EXPECT_EQ(break_type_accuracy(corpus({"a <eol> b <eob>"}), corpus({"x <eob> y <eob>"})).accuracy, 50.0);
    const auto one = break_type_accuracy(corpus({"a <eob>"}), corpus({"a <eob>"}));
    EXPECT_FALSE(one.accuracy.has_value());
    EXPECT_EQ(one.filtered_count, 0u);
}

TEST(BreakAccuracyTest, FilterDropsShortAndUnequalPairs) {
    const auto hyp = corpus({"a <eol> b <eob>", "a <eob>", "a <eol> b <eob> c <eob>", "a b <eob>"});
    const auto ref = corpus({"a <eob> b <eob>", "a <eol> b <eob>", "a <eol> b <eob>", "a <eob> b <eob>"});
    const auto acc = break_type_accuracy(hyp, ref);
    EXPECT_EQ(acc.filtered_count, 1u);
    EXPECT_EQ(acc.total, 2u);
    EXPECT_EQ(acc.accuracy, 50.0);
}

// ---------------------------------------------------------------------------
// Report

TEST(EvaluateTest, IdentityAndMissingDurations) {
    const auto c = corpus({"a b <eol> c <eob>", "d e <eob> f <eob>"});
    const auto r = evaluate(c, c);
    EXPECT_DOUBLE_EQ(r.bleu, 100.0);
    EXPECT_DOUBLE_EQ(r.ter_br, 0.0);
    EXPECT_EQ(r.break_acc, 100.0);
    EXPECT_FALSE(r.cps.has_value());
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings[0].find("cps"), std::string::npos);
    EXPECT_EQ(r.counts.sentences, 2u);
    EXPECT_EQ(r.counts.blocks, 3u);
}

TEST(EvaluateTest, JsonHasExactlyTheReportKeys) {
    const auto c = corpus({"a <eob>"});
    const auto doc = to_json(evaluate(c, c));
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items()) {
        keys.push_back(k);
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"bleu", "bleu_nob", "break_acc", "counts", "cpl", "cps", "ter_br",
                                              "warnings"}));
    EXPECT_TRUE(doc["cps"].is_null());
    EXPECT_TRUE(doc["break_acc"].is_null());
}

TEST(EvaluateTest, TwentySentenceFixtureMatchesOracle) {
    const auto hyp = parse_annotated_corpus(slurp(kFixture + "hyp.txt")).sentences;
    const auto ref = parse_annotated_corpus(slurp(kFixture + "ref.txt")).sentences;
    const auto durations = parse_durations(slurp(kFixture + "durations.tsv"));
    const auto expected = nlohmann::json::parse(slurp(kFixture + "expected.json"));
    const auto r = evaluate(hyp, ref, &durations);
    EXPECT_NEAR(r.bleu, expected["bleu"].get<double>(), 1e-9);
    EXPECT_NEAR(r.bleu_nob, expected["bleu_nob"].get<double>(), 1e-9);
    EXPECT_DOUBLE_EQ(r.cpl, expected["cpl"].get<double>());
    EXPECT_DOUBLE_EQ(*r.cps, expected["cps"].get<double>());
    EXPECT_DOUBLE_EQ(r.ter_br, expected["ter_br"].get<double>());
    EXPECT_DOUBLE_EQ(*r.break_acc, expected["break_acc"].get<double>());
    EXPECT_EQ(r.counts.sentences, expected["counts"]["sentences"].get<std::size_t>());
    EXPECT_EQ(r.counts.blocks, expected["counts"]["blocks"].get<std::size_t>());
    EXPECT_EQ(r.counts.filtered_pairs, expected["counts"]["filtered_pairs"].get<std::size_t>());
}

TEST(EvaluatePropertyTest, PercentagesAreScaleFree) {
    gen::Random r(37);
    std::vector<AnnotatedSentence> hyp, ref;
    DurationMap d, d2;
    for (int i = 0; i < 12; ++i) {
        hyp.push_back(r.sentence(r.uniform(2, 14)));
        ref.push_back(r.sentence(r.uniform(2, 14)));
        d.emplace(i, SentenceDuration(r.real(0.5, 5.0)));
    }
    auto hyp2 = hyp, ref2 = ref;
    hyp2.insert(hyp2.end(), hyp.begin(), hyp.end());
    ref2.insert(ref2.end(), ref.begin(), ref.end());
    for (int i = 0; i < 24; ++i) {
        d2.emplace(i, d.at(i % 12));
    }
    const auto a = evaluate(hyp, ref, &d);
    const auto b = evaluate(hyp2, ref2, &d2);
    EXPECT_DOUBLE_EQ(a.cpl, b.cpl);
    EXPECT_DOUBLE_EQ(*a.cps, *b.cps);
    EXPECT_DOUBLE_EQ(a.ter_br, b.ter_br);
    EXPECT_EQ(a.break_acc.has_value(), b.break_acc.has_value());
    if (a.break_acc) {
        EXPECT_DOUBLE_EQ(*a.break_acc, *b.break_acc);
    }
    for (double v : {a.bleu, a.bleu_nob, a.cpl, *a.cps, a.ter_br}) {
        EXPECT_GE(v, 0.0);
    }
    EXPECT_LE(a.bleu, 100.0);
    EXPECT_LE(a.cpl, 100.0);
}
