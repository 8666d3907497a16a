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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const kHarassment =
    "This kind of harassment keeps women <eol> from accessing the internet -- <eob> essentially, knowledge. <eob>";

const char* const kPackedSrt = "10\n"
                               "00:00:31,066 --> 00:00:34,390\n"
                               "This kind of harassment keeps women\n"
                               "from accessing the internet --\n"
                               "11\n"
                               "00:00:34,414 --> 00:00:36,191\n"
                               "essentially, knowledge.\n";

const char* const kCanonicalSrt = "10\n"
                                  "00:00:31,066 --> 00:00:34,390\n"
                                  "This kind of harassment keeps women\n"
                                  "from accessing the internet --\n"
                                  "\n"
                                  "11\n"
                                  "00:00:34,414 --> 00:00:36,191\n"
                                  "essentially, knowledge.\n";

// Word gaps of 10 ms except 24 ms between "internet" and "essentially".
const char* const kHarassmentWords = "0\tThis\t31.066\t31.300\n"
                                     "0\tkind\t31.310\t31.560\n"
                                     "0\tof\t31.570\t31.650\n"
                                     "0\tharassment\t31.660\t32.300\n"
                                     "0\tkeeps\t32.310\t32.700\n"
                                     "0\twomen\t32.710\t33.200\n"
                                     "0\tfrom\t33.210\t33.450\n"
                                     "0\taccessing\t33.460\t33.900\n"
                                     "0\tthe\t33.910\t34.000\n"
                                     "0\tinternet\t34.010\t34.390\n"
                                     "0\tessentially\t34.414\t35.300\n"
                                     "0\tknowledge\t35.310\t36.191\n";

struct Result {
    int code;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               ("subkit_cli_" + std::to_string(::getpid()) + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& content) const {
        const auto p = dir_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    Result run(const std::string& args, const std::string& env = "") const {
        const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const std::string cmd =
            env + " " + SUBKIT_CLI_PATH + " " + args + " > " + out.string() + " 2> " + err.string();
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    }

    static std::string data(const std::string& rel) { return std::string(SUBKIT_TEST_DATA_DIR) + "/" + rel; }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, EvaluateIdentityIsPerfect) {
    const auto ref = data("fixture20/ref.txt");
    const auto r = run("evaluate " + ref + " " + ref + " --durations " + data("fixture20/durations.tsv"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_DOUBLE_EQ(doc["bleu"].get<double>(), 100.0);
    EXPECT_DOUBLE_EQ(doc["ter_br"].get<double>(), 0.0);
    EXPECT_DOUBLE_EQ(doc["break_acc"].get<double>(), 100.0);
    EXPECT_EQ(doc["schema"], 1);
    EXPECT_TRUE(doc["config"].is_object());
}

TEST_F(CliTest, EvaluateFixtureMatchesIndependentComputation) {
    const auto r = run("evaluate " + data("fixture20/hyp.txt") + " " + data("fixture20/ref.txt") +
                       " --durations " + data("fixture20/durations.tsv") + " -o " + path("report.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    const auto got = json::parse(slurp(path("report.json")));
    const auto want = json::parse(slurp(data("fixture20/expected.json")));
    for (const char* key : {"bleu", "bleu_nob", "cpl", "cps", "ter_br", "break_acc"}) {
        EXPECT_NEAR(got[key].get<double>(), want[key].get<double>(), 1e-9) << key;
    }
    EXPECT_EQ(got["counts"], want["counts"]);
}

TEST_F(CliTest, EvaluateWithoutDurationsOmitsCps) {
    const auto ref = data("fixture20/ref.txt");
    const auto r = run("evaluate " + ref + " " + ref);
    ASSERT_EQ(r.code, 0);
    const auto doc = json::parse(r.out);
    EXPECT_TRUE(doc["cps"].is_null());
    EXPECT_NE(r.err.find("cps omitted"), std::string::npos);
}

TEST_F(CliTest, EvaluateErrorsMapToExitCodes) {
    const auto one = file("one.txt", "a b <eob>\n");
    const auto two = file("two.txt", "a b <eob>\nc <eob>\n");
    EXPECT_EQ(run("evaluate " + one + " " + two).code, 3);
    const auto bad = file("bad.txt", "a <eob>\n<eol> b\n");
    const auto r = run("evaluate " + bad + " " + bad);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bad.txt"), std::string::npos);
    EXPECT_EQ(run("evaluate " + bad + " " + bad + " --lenient").code, 0);
    EXPECT_EQ(run("evaluate " + one + " " + path("missing.txt")).code, 2);
    EXPECT_EQ(run("evaluate " + one).code, 64);
    EXPECT_EQ(run("frobnicate").code, 64);
}

TEST_F(CliTest, AnalyzeEngineeredMeans) {
    const auto corpus = file("c.txt", "a b c <eol> d e <eob> f g <eol> h <eob> i <eob>\nsolo <eob>\n");
    const auto timings = file("w.tsv", "0\ta\t100.0\t100.2\n"
                                       "0\tb\t100.23\t100.4\n"
                                       "0\tc\t100.43\t100.6\n"
                                       "0\td\t100.67\t100.8\n"
                                       "0\te\t100.83\t101.0\n"
                                       "0\tf\t101.55\t101.7\n"
                                       "0\tg\t101.73\t101.9\n"
                                       "0\th\t101.97\t102.1\n"
                                       "0\ti\t102.65\t102.8\n"
                                       "1\tsolo\t5.0\t5.5\n");
    const auto r = run("analyze " + corpus + " " + timings + " --pauses-tsv " + path("p.tsv"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_EQ(doc["records"], 8);
    EXPECT_EQ(doc["skipped"], 0);
    EXPECT_NEAR(doc["categories"]["none"]["mean"].get<double>(), 0.03, 1e-9);
    EXPECT_NEAR(doc["categories"]["eol"]["mean"].get<double>(), 0.07, 1e-9);
    EXPECT_NEAR(doc["categories"]["eob"]["mean"].get<double>(), 0.55, 1e-9);
    EXPECT_NEAR(doc["threshold"].get<double>(), 0.55, 1e-9);
    EXPECT_EQ(doc["threshold_source"], "derived");
    const auto tsv = slurp(path("p.tsv"));
    EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 9);
}

TEST_F(CliTest, AnalyzeFallsBackToDefaultThreshold) {
    const auto corpus = file("c.txt", "a b <eob>\n");
    const auto timings = file("w.tsv", "0\ta\t0.0\t0.2\n0\tb\t0.5\t0.7\n");
    const auto r = run("analyze " + corpus + " " + timings);
    ASSERT_EQ(r.code, 0);
    const auto doc = json::parse(r.out);
    EXPECT_TRUE(doc["threshold"].is_null());
    EXPECT_EQ(doc["threshold_source"], "default");
}

TEST_F(CliTest, AnalyzeAllMismatchedFails) {
    const auto corpus = file("c.txt", "a b c <eob>\n");
    const auto timings = file("w.tsv", "0\ta\t0.0\t0.2\n0\tb\t0.5\t0.7\n");
    EXPECT_EQ(run("analyze " + corpus + " " + timings).code, 3);
}

TEST_F(CliTest, SegmentReproducesRenderedSrt) {
    const auto input = file("in.txt", "This kind of harassment keeps women from accessing the internet -- "
                                      "essentially, knowledge.\n");
    const auto words = file("w.tsv", kHarassmentWords);
    const auto r = run("segment " + input + " --timings " + words + " --eob-pause-threshold 0.02 --first-index 10" +
                       " --out-srt " + path("out.srt") + " --out-annotated " + path("out.txt"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(slurp(path("out.srt")), kCanonicalSrt);
    EXPECT_EQ(slurp(path("out.txt")), std::string(kHarassment) + "\n");
    EXPECT_NE(r.err.find("forced_eob=1"), std::string::npos);
    EXPECT_NE(r.err.find("timing=alignment"), std::string::npos);
}

TEST_F(CliTest, SegmentWithoutTimingsIsProportional) {
    const auto input = file("in.txt", "Thank you so much.\nI grew up in a small town in the north of the country.\n");
    const auto r = run("segment " + input + " --out-srt " + path("out.srt"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("timing=proportional"), std::string::npos);
    EXPECT_NE(r.err.find("cpl=100%"), std::string::npos);
    const auto plain = run("segment " + input);
    ASSERT_EQ(plain.code, 0);
    EXPECT_EQ(plain.out, "Thank you so much. <eob>\nI grew up in a small town <eol> in the north of the country. <eob>\n");
}

TEST_F(CliTest, SegmentInputErrors) {
    EXPECT_EQ(run("segment " + file("empty.txt", "")).code, 2);
    const auto annotated = file("a.txt", std::string(kHarassment) + "\n");
    const auto r = run("segment " + annotated);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--resegment"), std::string::npos);
    const auto again = run("segment " + annotated + " --resegment");
    EXPECT_EQ(again.code, 0);
    EXPECT_EQ(run("segment " + annotated + " --max-chars-per-line 0").code, 64);
}

TEST_F(CliTest, ConvertPackedSrtToAnnotated) {
    const auto srt = file("in.srt", kPackedSrt);
    const auto r = run("convert " + srt + " --from srt --to annotated");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, std::string(kHarassment) + "\n");
}

TEST_F(CliTest, ConvertRoundTripWithSidecarIsByteIdentical) {
    const auto srt = file("in.srt", kCanonicalSrt);
    ASSERT_EQ(run("convert " + srt + " --from srt --to annotated -o " + path("a.txt") + " --timings-out " +
                  path("t.tsv"))
                  .code,
              0);
    const auto back = run("convert " + path("a.txt") + " --from annotated --to srt --block-timings " + path("t.tsv"));
    ASSERT_EQ(back.code, 0) << back.err;
    EXPECT_EQ(back.out, kCanonicalSrt);
    const auto json_out = run("convert " + srt + " --from srt --to blocks-json");
    ASSERT_EQ(json_out.code, 0);
    const auto doc = json::parse(json_out.out);
    EXPECT_EQ(doc["sentences"][0]["blocks"][1]["index"], 11);
    EXPECT_EQ(doc["sentences"][0]["blocks"][0]["lines"][1], "from accessing the internet --");
}

TEST_F(CliTest, ConvertUsageErrors) {
    const auto srt = file("in.srt", kCanonicalSrt);
    EXPECT_EQ(run("convert " + srt + " --from vtt --to srt").code, 64);
    EXPECT_EQ(run("convert " + srt + " --from srt").code, 64);
    EXPECT_EQ(run("convert " + file("bad.srt", "1\nnot a time\nx\n") + " --from srt --to annotated").code, 2);
}

TEST_F(CliTest, ConfigFileAndEnvironment) {
    const auto config = file("k.conf", "max_chars_per_line = 20\n");
    const auto input = file("in.txt", "Thank you so much for having me here.\n");
    const auto via_flag = run("segment " + input + " --config " + config);
    ASSERT_EQ(via_flag.code, 0) << via_flag.err;
    EXPECT_NE(via_flag.out.find("<eol>"), std::string::npos);
    const auto via_env = run("segment " + input, "SUBKIT_CONFIG=" + config);
    EXPECT_EQ(via_env.out, via_flag.out);
    const auto overridden = run("segment " + input + " --max-chars-per-line 42", "SUBKIT_CONFIG=" + config);
    EXPECT_EQ(overridden.out, "Thank you so much for having me here. <eob>\n");
    EXPECT_EQ(run("segment " + input + " --config " + file("bad.conf", "nope = 1\n")).code, 2);
}
