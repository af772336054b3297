#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "bbmh/learn.hpp"
#include "bbmh/pipeline.hpp"

#ifndef BBMH_CLI_PATH
#error "BBMH_CLI_PATH must name the bbmh executable"
#endif

namespace fs = std::filesystem;
using namespace bbmh;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("bbmh_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(BBMH_CLI_PATH) + " " + args + " >" + path("stdout.txt") + " 2>" +
                            path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  fs::path dir_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_F(Cli, OracleTableAtD20) {
  ASSERT_EQ(run("oracle --D 20 --b 1 --out " + path("fig.csv")), 0) << read("stderr.txt");
  const auto rows = csv_rows(read("fig.csv"));
  ASSERT_GT(rows.size(), 100u);
  EXPECT_EQ(read("fig.csv").substr(0, read("fig.csv").find('\n')), "D,f1,f2,a,b,Pb_formula,Pb_exact,abs_error");
  double worst = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double err = std::stod(rows[i][7]);
    worst = std::max(worst, err);
    // f1 = 16 of 20 peaks at 1.02e-2; smaller sets stay under 1e-2.
    if (std::stoi(rows[i][1]) <= 10) EXPECT_LT(err, 0.01) << i;
  }
  EXPECT_LT(worst, 0.0103);
}

TEST_F(Cli, AnalyzeEmitsRatiosAboveOne) {
  ASSERT_EQ(run("analyze --b 8 --bits 32 --a-steps 10 --out " + path("g.csv")), 0) << read("stderr.txt");
  const auto rows = csv_rows(read("g.csv"));
  ASSERT_GT(rows.size(), 100u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"D", "f1", "f2", "a", "b", "bits", "G_vw"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(std::stod(rows[i][6]), 1.0);
}

TEST_F(Cli, HashExpandTrainMatchesInMemory) {
  pipeline::AnalogConfig ac;
  ac.records = 120;
  ac.dim = 1 << 14;
  ac.nonzeros = 200;
  const learn::Dataset data = pipeline::generate_analog(ac);
  pipeline::write_dataset(path("data.txt"), data);

  ASSERT_EQ(run("hash " + path("data.txt") + " -o " + path("d.bbmh") + " -k 50 -b 4 --seed 9"), 0)
      << read("stderr.txt");
  ASSERT_EQ(run("expand " + path("d.bbmh") + " --emit-text " + path("e.txt") + " --labels-from " + path("data.txt")),
            0)
      << read("stderr.txt");
  ASSERT_EQ(run("train " + path("e.txt") + " -m " + path("model.txt") + " --dim 800 --loss logistic"), 0)
      << read("stderr.txt");
  ASSERT_EQ(run("predict " + path("e.txt") + " -m " + path("model.txt") + " -o " + path("pred.txt")), 0)
      << read("stderr.txt");

  const auto sigs = pipeline::minhash_dataset(data, 50, 9, hashcore::PermutationMode::hashed_permutation);
  std::vector<int> labels;
  for (const auto& ex : data.records) labels.push_back(ex.label);
  learn::Dataset expanded = pipeline::expanded_dataset(sigs, labels, 50, 4);
  const learn::LinearModel direct = learn::train(expanded, learn::Loss::logistic, 1.0);
  const learn::LinearModel from_cli = learn::load_model(path("model.txt"));
  EXPECT_EQ(from_cli.weights, direct.weights);

  std::istringstream pred(read("pred.txt"));
  std::size_t correct = 0;
  std::string p;
  for (const auto& ex : expanded.records) {
    ASSERT_TRUE(std::getline(pred, p));
    correct += (p == "+1" ? 1 : -1) == ex.label ? 1 : 0;
  }
  EXPECT_DOUBLE_EQ(static_cast<double>(correct) / static_cast<double>(expanded.size()),
                   learn::accuracy(direct, expanded));
}

TEST_F(Cli, ConfigFileIsOverriddenByFlags) {
  write("d.txt", "+1 0:1 3:1\n-1 1:1 2:1\n");
  write("c.cfg", "k = 16\nb = 2\nseed = 4\n");
  ASSERT_EQ(run("hash " + path("d.txt") + " -o " + path("a.bbmh") + " --config " + path("c.cfg")), 0);
  EXPECT_NE(read("stdout.txt").find("payload_bytes 8"), std::string::npos) << read("stdout.txt");
  ASSERT_EQ(run("hash " + path("d.txt") + " -o " + path("b.bbmh") + " --config " + path("c.cfg") + " -b 8"), 0);
  EXPECT_NE(read("stdout.txt").find("payload_bytes 32"), std::string::npos) << read("stdout.txt");
  ASSERT_EQ(run("hash " + path("d.txt") + " -o " + path("c.bbmh") + " -k 16 -b 2 --seed 4"), 0);
  EXPECT_EQ(read("a.bbmh"), read("c.bbmh"));
}

TEST_F(Cli, EveryCommandAcceptsSeedAndConfig) {
  write("empty.cfg", "# nothing\n");
  for (const char* cmd : {"hash", "expand", "sketch", "train", "predict", "experiment", "oracle", "analyze",
                          "generate"}) {
    EXPECT_EQ(run(std::string(cmd) + " --help --seed 3 --config " + path("empty.cfg")), 0) << cmd;
  }
}

TEST_F(Cli, ErrorsExitNonzeroWithDiagnostics) {
  write("d.txt", "+1 0:1\n");
  EXPECT_NE(run("hash " + path("d.txt") + " -o " + path("x.bbmh") + " --bogus"), 0);
  EXPECT_NE(run("frobnicate"), 0);
  EXPECT_NE(run("train " + path("missing.txt") + " -m " + path("m.txt")), 0);
  EXPECT_NE(read("stderr.txt").find("missing.txt"), std::string::npos);
  write("bad.txt", "+1 0:1\n-1 5:1 2:1\n");
  EXPECT_NE(run("train " + path("bad.txt") + " -m " + path("m.txt")), 0);
  EXPECT_NE(read("stderr.txt").find("line 2"), std::string::npos) << read("stderr.txt");
  EXPECT_NE(run("hash " + path("d.txt")), 0);  // no output path
}
