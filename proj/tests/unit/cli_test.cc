#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ciqa/cli/cli.h"
#include "ciqa/common/csv.h"
#include "cli_pipeline.h"
#include "json.hpp"
#include "procedural.h"

namespace ciqa {
namespace {

using testing::RunCliArgs;

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, UsageErrorsExitOne) {
  const std::string dir = testing::TempDir("cli_usage");
  const std::string log = dir + "/runs.jsonl";
  EXPECT_EQ(RunCliArgs({"--run-log", log}), kExitUsage);
  EXPECT_EQ(RunCliArgs({"--run-log", log, "no-such-command"}), kExitUsage);
  EXPECT_EQ(RunCliArgs({"--run-log", log, "mos", "--out", dir + "/x.csv"}), kExitUsage);
  EXPECT_EQ(RunCliArgs({"--run-log", log, "score", "--manifest", "m.csv", "--out", "o.csv", "--metrics", "vif"}),
            kExitUsage);
  EXPECT_EQ(RunCliArgs({"--run-log", log, "synth-cfiqa", "--refs", dir, "--out", dir + "/o", "--alpha", "-1"}),
            kExitUsage);
  EXPECT_EQ(RunCliArgs({"--run-log", log, "--help"}), kExitOk);
  // Every invocation leaves one log line.
  std::ifstream in(log);
  int lines = 0;
  for (std::string line; std::getline(in, line);) {
    EXPECT_TRUE(nlohmann::json::accept(line)) << line;
    ++lines;
  }
  EXPECT_GE(lines, 5);
}

TEST(Cli, MosZeroVarianceSubjectExitsTwo) {
  const std::string dir = testing::TempDir("cli_mos");
  {
    std::ofstream f(dir + "/r.csv");
    f << "subject_id,stimulus_id,rating\n";
    for (int j = 0; j < 4; ++j) {
      f << "flat," << "x" << j << ",5\n";
      f << "ok," << "x" << j << "," << j + 1 << "\n";
      f << "ok2," << "x" << j << "," << 2 * j + 1 << "\n";
    }
  }
  ::testing::internal::CaptureStderr();
  const int code = RunCliArgs({"--run-log", "", "mos", "--ratings", dir + "/r.csv", "--out", dir + "/m.csv"});
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_EQ(code, kExitData);
  EXPECT_NE(err.find("flat"), std::string::npos) << err;
  EXPECT_EQ(RunCliArgs({"--run-log", "", "mos", "--ratings", dir + "/missing.csv", "--out", dir + "/m.csv"}),
            kExitData);
}

class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new std::string(testing::TempDir("cli_pipeline"));
    setenv("CONFUSION_IQA_CACHE", (*root_ + "/cache").c_str(), 1);
    steps_ = new std::vector<testing::CliStep>(testing::PrepareCliPipeline(*root_, 5));
    codes_ = new std::vector<int>;
    for (const auto& s : *steps_) {
      if (s.before) s.before();
      codes_->push_back(RunCliArgs(s.args));
    }
  }
  static void TearDownTestSuite() {
    delete root_;
    delete steps_;
    delete codes_;
  }
  static std::string* root_;
  static std::vector<testing::CliStep>* steps_;
  static std::vector<int>* codes_;
};

std::string* CliPipeline::root_ = nullptr;
std::vector<testing::CliStep>* CliPipeline::steps_ = nullptr;
std::vector<int>* CliPipeline::codes_ = nullptr;

TEST_F(CliPipeline, EveryStepSucceeds) {
  for (size_t i = 0; i < steps_->size(); ++i) EXPECT_EQ((*codes_)[i], kExitOk) << (*steps_)[i].subcommand;
}

TEST_F(CliPipeline, OutputFormats) {
  const std::string r = *root_ + "/";
  const CsvTable scores = ReadCsv(r + "cf_scores.csv");
  EXPECT_EQ(scores.header, (std::vector<std::string>{"stimulus_id", "metric", "target", "score"}));
  EXPECT_EQ(scores.rows.size(), 8u * 7u * 2u);
  EXPECT_EQ(ReadCsv(r + "cf_mos.csv").header, (std::vector<std::string>{"stimulus_id", "mos", "std", "n_valid"}));
  EXPECT_EQ(ReadCsv(r + "var.csv").header,
            (std::vector<std::string>{"stimulus_id", "metric", "type1", "type2", "type3_f1", "type3_f2"}));
  const auto eval = nlohmann::json::parse(Slurp(r + "cf_eval.json"));
  EXPECT_EQ(eval["metrics"].size(), 7u);
  const auto roc = nlohmann::json::parse(Slurp(r + "cf_roc.json"));
  EXPECT_TRUE(roc["metrics"][0].contains("better_worse"));
  const auto svr = nlohmann::json::parse(Slurp(r + "svr.json"));
  EXPECT_EQ(svr["folds"], 10);
  EXPECT_TRUE(svr["scene_disjoint"].get<bool>());
  const CsvTable pred = ReadCsv(r + "cf_pred.csv");
  EXPECT_EQ(pred.rows.size(), 16u);
  EXPECT_EQ(pred.rows[0][1], "cfiqa");
  EXPECT_EQ(ReadCsv(r + "cf_history.csv").rows.size(), 5u);
}

TEST_F(CliPipeline, ScoringHeldOutIdsOnly) {
  const std::string r = *root_ + "/";
  EXPECT_EQ(RunCliArgs({"--run-log", "", "evaluate", "--scores", r + "cf_pred.csv", "--mos", r + "cf_mos.csv", "--out",
                        r + "held_eval.json", "--ids", r + "held.csv"}),
            kExitOk);
  const auto j = nlohmann::json::parse(Slurp(r + "held_eval.json"));
  EXPECT_EQ(j["num_stimuli"], 8);  // 4 held-out stimuli x 2 layers
}

TEST_F(CliPipeline, SvrModelFillsTypeThree) {
  const std::string r = *root_ + "/";
  ASSERT_EQ(RunCliArgs({"--run-log", "", "ariqa-variants", "--manifest", r + "arset/manifest.csv", "--out",
                        r + "var3.csv", "--metrics", "ssim", "--svr-model", r + "svr_model.json"}),
            kExitOk);
  const CsvTable t = ReadCsv(r + "var3.csv");
  ASSERT_EQ(t.header.back(), "type3");
  for (const auto& row : t.rows) EXPECT_FALSE(row.back().empty());
}

}  // namespace
}  // namespace ciqa
