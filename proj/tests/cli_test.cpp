#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "advconf/classifier.hpp"
#include "advconf/cli.hpp"
#include "advconf/csv.hpp"

using namespace advconf;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("advconf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
  }

  // Labeled band2d sample plus a classifier trained on it.
  void band2d_classifier() {
    ASSERT_EQ(run({"sample", "--scenario", "band2d", "--seed", "3", "--n", "150", "--out", path("s.csv")}), 0)
        << err_.str();
    ASSERT_EQ(run({"label", "--scenario", "band2d", "--dataset", path("s.csv"), "--out", path("l.csv")}), 0)
        << err_.str();
    ASSERT_EQ(run({"train", "--scenario", "band2d", "--dataset", path("l.csv"), "--gamma", "10", "--C", "10",
                   "--out", path("svm.json")}),
              0)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, LoopWritesOneRowPerRoundPlusBaseline) {
  ASSERT_EQ(run({"loop", "--scenario", "band2d", "--seed", "42", "--rounds", "20", "--labeling", "oracle", "--out",
                 path("report.csv")}),
            0)
      << err_.str();
  const auto rows = lines(read_file(path("report.csv")));
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[0], "round,train_size,disagreement,mean_abs_g,crossed,valid_adv,oracle_queries");
}

TEST_F(Cli, NegativeRoundsIsUsageError) {
  EXPECT_EQ(run({"loop", "--rounds", "-1"}), 2);
  EXPECT_FALSE(err_.str().empty());
}

TEST_F(Cli, UnknownSubcommandOrFlag) {
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({"loop", "--scenario", "band2d", "--bogus"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_NE(err_.str().find("Usage"), std::string::npos);
}

TEST_F(Cli, RuntimeErrorsExitOne) {
  EXPECT_EQ(run({"gen-model", "--scenario", "nosuch"}), 1);
  EXPECT_EQ(run({"train", "--model", path("missing.json"), "--dataset", path("missing.csv")}), 1);
}

TEST_F(Cli, BoundaryMapGrid) {
  band2d_classifier();
  ASSERT_EQ(run({"boundary-map", "--classifier", path("svm.json"), "--grid", "3", "--out", path("map.csv")}), 0)
      << err_.str();
  const auto rows = lines(read_file(path("map.csv")));
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], "x0,x1,g");
  const SvmModel m = parse_svm(read_file(path("svm.json")));
  const double coords[] = {0.0, 0.5, 1.0};
  for (std::size_t i = 0; i < 9; ++i) {
    double x0, x1, g;
    ASSERT_EQ(std::sscanf(rows[i + 1].c_str(), "%lf,%lf,%lf", &x0, &x1, &g), 3);
    EXPECT_EQ(x0, coords[i / 3]);
    EXPECT_EQ(x1, coords[i % 3]);
    EXPECT_EQ(g, m.decision(std::vector<double>{x0, x1}));
  }
}

TEST_F(Cli, BoundaryMapZeroGridIsUsageError) {
  band2d_classifier();
  EXPECT_EQ(run({"boundary-map", "--classifier", path("svm.json"), "--grid", "0"}), 2);
}

TEST_F(Cli, BoundaryMapNeedsTwoDimensions) {
  ASSERT_EQ(run({"gen-model", "--scenario", "motivlike80", "--seed", "1", "--out", path("m.json")}), 0);
  ASSERT_EQ(run({"sample", "--model", path("m.json"), "--n", "60", "--out", path("s.csv")}), 0);
  ASSERT_EQ(run({"label", "--scenario", "motivlike80", "--seed", "1", "--dataset", path("s.csv"), "--out",
                 path("l.csv")}),
            0);
  ASSERT_EQ(run({"train", "--model", path("m.json"), "--dataset", path("l.csv"), "--out", path("svm.json")}), 0)
      << err_.str();
  EXPECT_EQ(run({"boundary-map", "--classifier", path("svm.json")}), 1);
}

TEST_F(Cli, ReproducibleOutputs) {
  const std::vector<std::string> a{"loop",   "--scenario", "band2d",          "--seed", "5", "--rounds", "3",
                                   "--json", path("a.json"), "--out", path("a.csv")};
  std::vector<std::string> b{"loop",   "--scenario", "band2d",          "--seed",    "5", "--rounds", "3",
                             "--json", path("a.json"), "--out", path("a.csv"), "--threads", "2"};
  ASSERT_EQ(run(a), 0);
  const auto csv = read_file(path("a.csv")), json = read_file(path("a.json"));
  ASSERT_EQ(run(b), 0);
  EXPECT_EQ(read_file(path("a.csv")), csv);
  EXPECT_EQ(read_file(path("a.json")), json);

  const auto j = nlohmann::json::parse(json);
  EXPECT_EQ(j["manifest"]["command"], "loop");
  EXPECT_EQ(j["manifest"]["version"], kVersion);
  EXPECT_FALSE(j["manifest"].contains("duration_ms"));
  EXPECT_EQ(j["rows"].size(), 4u);
}

TEST_F(Cli, TimingAddsDuration) {
  ASSERT_EQ(run({"loop", "--scenario", "band2d", "--rounds", "1", "--timing", "--out", path("r.json")}), 0);
  const auto j = nlohmann::json::parse(read_file(path("r.json")));
  EXPECT_TRUE(j["manifest"].contains("duration_ms"));
}

TEST_F(Cli, RandomLoopAndEvaluate) {
  ASSERT_EQ(run({"random-loop", "--scenario", "band2d", "--seed", "2", "--rounds", "4", "--out", path("r.csv")}), 0);
  EXPECT_EQ(lines(read_file(path("r.csv"))).size(), 6u);
  band2d_classifier();
  ASSERT_EQ(run({"evaluate", "--scenario", "band2d", "--dataset", path("l.csv"), "--classifier", path("svm.json"),
                 "--out", path("e.json")}),
            0);
  const auto j = nlohmann::json::parse(read_file(path("e.json")));
  EXPECT_GE(j["error_rate"].get<double>(), 0.0);
  EXPECT_LE(j["error_rate"].get<double>(), 0.2);
}

TEST_F(Cli, AttackTracesAndEndpoints) {
  band2d_classifier();
  ASSERT_EQ(run({"sample", "--scenario", "band2d", "--seed", "9", "--n", "4", "--out", path("src.csv")}), 0);
  ASSERT_EQ(run({"attack", "--scenario", "band2d", "--dataset", path("src.csv"), "--classifier", path("svm.json"),
                 "--iterations", "10", "--freeze", "1", "--out", path("t.csv"), "--endpoints", path("end.csv")}),
            0)
      << err_.str();
  const auto t = lines(read_file(path("t.csv")));
  EXPECT_EQ(t[0], "iter,g,coord_0,coord_1");
  EXPECT_EQ(t.size(), 1u + 4u * 11u);
  EXPECT_EQ(lines(read_file(path("end.csv"))).size(), 5u);
}

TEST_F(Cli, DistillThenInject) {
  band2d_classifier();
  ASSERT_EQ(run({"gen-model", "--scenario", "band2d", "--out", path("m.json")}), 0);
  ASSERT_EQ(run({"distill", "--model", path("m.json"), "--classifier", path("svm.json"), "--max-depth", "3",
                 "--out", path("tree.txt"), "--constraints", path("c.txt"), "--json", path("d.json")}),
            0)
      << err_.str();
  const auto d = nlohmann::json::parse(read_file(path("d.json")));
  ASSERT_EQ(run({"inject", "--model", path("m.json"), "--constraints", path("c.txt"), "--out", path("m2.json")}), 0)
      << err_.str();
  const auto m2 = nlohmann::json::parse(read_file(path("m2.json")));
  EXPECT_EQ(m2["constraints"].size(), d["constraints"].size());
  EXPECT_EQ(d["manifest"]["command"], "distill");
}
