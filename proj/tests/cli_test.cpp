#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "duraseg/io.hpp"
#include "test_util.hpp"

namespace duraseg {
namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(DURASEG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::fresh_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
  }
  fs::path dir_;
};

TEST_F(Cli, SimulateSegmentEvalRoundTrip) {
  io::write_text(dir_ / "config.json", R"({"n_phrases": 4, "jitter_sigma": 0.1})");
  ASSERT_EQ(run("simulate --config " + quoted(dir_ / "config.json") + " --out " + quoted(dir_ / "sim")), 0);
  ASSERT_EQ(run("segment --odf " + quoted(dir_ / "sim/odf") + " --teacher " + quoted(dir_ / "sim/teacher") +
                " --out " + quoted(dir_ / "seg")),
            0);
  ASSERT_EQ(run("eval --ref " + quoted(dir_ / "sim/student") + " --det " + quoted(dir_ / "seg") + " --out " +
                quoted(dir_ / "report.json")),
            0);
  const auto report = io::read_text(dir_ / "report.json");
  EXPECT_NE(report.find("\"f1\": 1.0"), std::string::npos) << report;
  EXPECT_NE(report.find("\"n_phrases\": 4"), std::string::npos) << report;
  EXPECT_EQ(report.find("\"f1\": 0"), std::string::npos) << report;

  ASSERT_EQ(run("--jobs 3 align --emissions " + quoted(dir_ / "sim/emissions") + " --teacher " +
                quoted(dir_ / "sim/teacher") + " --out " + quoted(dir_ / "aligned")),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "aligned/phrase_0003.json"));
}

TEST_F(Cli, OutputsAreByteStable) {
  ASSERT_EQ(run("--seed 9 simulate --out " + quoted(dir_ / "a")), 0);
  ASSERT_EQ(run("--seed 9 simulate --out " + quoted(dir_ / "b")), 0);
  for (const char* f : {"manifest.json", "odf/phrase_0000.json", "emissions/phrase_0009.csv", "teacher/phrase_0005.json"})
    EXPECT_EQ(io::read_text(dir_ / "a" / f), io::read_text(dir_ / "b" / f)) << f;
  ASSERT_EQ(run("--seed 10 simulate --out " + quoted(dir_ / "c")), 0);
  EXPECT_NE(io::read_text(dir_ / "a/odf/phrase_0000.json"), io::read_text(dir_ / "c/odf/phrase_0000.json"));

  const std::string seg = "segment --odf " + quoted(dir_ / "a/odf/phrase_0001.json") + " --teacher " +
                          quoted(dir_ / "a/teacher/phrase_0001.json") + " --out ";
  ASSERT_EQ(run(seg + quoted(dir_ / "r1.json")), 0);
  ASSERT_EQ(run("--jobs 4 " + seg + quoted(dir_ / "r2.json")), 0);
  EXPECT_EQ(io::read_text(dir_ / "r1.json"), io::read_text(dir_ / "r2.json"));
}

TEST_F(Cli, IdenticalDirectoriesScorePerfectly) {
  ASSERT_EQ(run("simulate --out " + quoted(dir_ / "sim")), 0);
  ASSERT_EQ(run("eval --level phoneme --ref " + quoted(dir_ / "sim/teacher") + " --det " +
                quoted(dir_ / "sim/teacher") + " --out " + quoted(dir_ / "r.json")),
            0);
  const auto report = io::read_text(dir_ / "r.json");
  EXPECT_EQ(report,
            "{\n  \"phoneme\": {\n    \"precision\": 1.0,\n    \"recall\": 1.0,\n    \"f1\": 1.0,\n"
            "    \"segmentation\": 1.0\n  },\n  \"n_phrases\": 10,\n  \"pooling\": \"micro\"\n}\n");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("segment --odf x.json"), 1);
  EXPECT_EQ(run("segment --odf " + quoted(dir_ / "missing.json") + " --teacher t.json --out o.json"), 1);
  io::write_text(dir_ / "bad.json", "{oops");
  EXPECT_EQ(run("eval --ref " + quoted(dir_ / "bad.json") + " --det " + quoted(dir_ / "bad.json") + " --out " +
                quoted(dir_ / "r.json")),
            1);
  EXPECT_EQ(run("eval --level word --ref a --det b --out c"), 1);

  // Four phonemes cannot fit into the three frames left for the second syllable.
  io::write_text(dir_ / "teacher.json", R"({"syllables": [
    {"label": "a", "onset": 0, "offset": 0.02, "phonemes": [{"label": "a", "onset": 0, "offset": 0.02}]},
    {"label": "b", "onset": 0.02, "offset": 0.10, "phonemes": [
      {"label": "p", "onset": 0.02, "offset": 0.04}, {"label": "q", "onset": 0.04, "offset": 0.06},
      {"label": "r", "onset": 0.06, "offset": 0.08}, {"label": "s", "onset": 0.08, "offset": 0.10}]}]})");
  io::write_text(dir_ / "odf.json", R"({"hop_seconds": 0.01, "syllable": [0.01, 0.01, 1, 0.01, 0.01, 0.01],
    "phoneme": [0.5, 0.5, 0.5, 0.5, 0.5, 0.5]})");
  EXPECT_EQ(run("segment --odf " + quoted(dir_ / "odf.json") + " --teacher " + quoted(dir_ / "teacher.json") +
                " --out " + quoted(dir_ / "out.json")),
            2);
  EXPECT_FALSE(fs::exists(dir_ / "out.json"));
}

TEST_F(Cli, TargetsAndPlotData) {
  io::write_text(dir_ / "a.json", R"({"syllables": [
    {"label": "a", "onset": 0, "offset": 0.1, "phonemes": [{"label": "a", "onset": 0, "offset": 0.1}]},
    {"label": "b", "onset": 0.1, "offset": 0.3, "phonemes": [{"label": "b", "onset": 0.1, "offset": 0.3}]}]})");
  ASSERT_EQ(run("targets --annotation " + quoted(dir_ / "a.json") + " --out " + quoted(dir_ / "t.csv")), 0);
  const auto csv = io::read_text(dir_ / "t.csv");
  EXPECT_NE(csv.find("\n9,1,0.25,1,0.25\n10,1,1,1,1\n11,1,0.25,1,0.25\n12,0,1,0,1\n"), std::string::npos);
  EXPECT_EQ(run("--hop-ms 10 targets --frames 5 --annotation " + quoted(dir_ / "a.json") + " --out " +
                quoted(dir_ / "t2.csv")),
            1);

  ASSERT_EQ(run("simulate --out " + quoted(dir_ / "sim")), 0);
  ASSERT_EQ(run("segment --odf " + quoted(dir_ / "sim/odf/phrase_0000.json") + " --teacher " +
                quoted(dir_ / "sim/teacher/phrase_0000.json") + " --out " + quoted(dir_ / "r.json")),
            0);
  ASSERT_EQ(run("plot-data --odf " + quoted(dir_ / "sim/odf/phrase_0000.json") + " --result " +
                quoted(dir_ / "r.json") + " --out " + quoted(dir_ / "plot.csv")),
            0);
  const auto plot = io::read_text(dir_ / "plot.csv");
  EXPECT_EQ(plot.rfind("frame,time,syllable_odf,phoneme_odf,syllable_onset,phoneme_onset\n0,0,1,1,1,1\n", 0), 0u);
}

TEST_F(Cli, BenchWritesTable) {
  ASSERT_EQ(run("bench --t 40,80 --n 3 --repeats 1 --out " + quoted(dir_ / "b.csv")), 0);
  const auto csv = io::read_text(dir_ / "b.csv");
  EXPECT_EQ(csv.rfind("T,N,decoder_seconds,hsmm_seconds,hsmm_over_decoder\n40,3,", 0), 0u);
  EXPECT_NE(csv.find("\n80,3,"), std::string::npos);
  EXPECT_EQ(run("bench --t 40,x --n 3 --out " + quoted(dir_ / "c.csv")), 1);
}

}  // namespace
}  // namespace duraseg
