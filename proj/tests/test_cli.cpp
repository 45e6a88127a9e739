#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fquant_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args, const std::string& tag = "run") {
    const std::string cmd = std::string(FQUANT_CLI) + " " + args + " >" + (dir_ / (tag + ".out")).string() + " 2>" +
                            (dir_ / (tag + ".err")).string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string slurp(const fs::path& p) const {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::string out(const std::string& tag = "run") const { return slurp(dir_ / (tag + ".out")); }
  std::string err(const std::string& tag = "run") const { return slurp(dir_ / (tag + ".err")); }
  nlohmann::json json(const std::string& tag = "run") const { return nlohmann::json::parse(out(tag)); }

  fs::path dir_;
};

std::string data(const std::string& name) { return std::string(FQUANT_DATA_DIR) + "/" + name; }

}  // namespace

TEST_F(Cli, KappaFromSpecFile) {
  ASSERT_EQ(run("kappa --spec " + data("example2.json")), 0) << err();
  EXPECT_NEAR(json()["kappa"].get<double>(), 0.430677, 5e-7);
}

TEST_F(Cli, KappaHalvingSystem) {
  std::ofstream(dir_ / "halving.json") << R"({"dimension": 1, "ambient": {"lo": [0], "hi": [1]},
  "components": [{"maps": [{"ratio": 0.5, "translation": [0]}, {"ratio": 0.5, "translation": [0.5]}],
                  "probs": [0.5, 0.5]}],
  "zeta": [1], "r": 1})";
  ASSERT_EQ(run("kappa --spec " + (dir_ / "halving.json").string()), 0) << err();
  EXPECT_NEAR(json()["kappa"].get<double>(), 1.0, 1e-10);
}

TEST_F(Cli, InvalidSpecExitsTwo) {
  std::string text = slurp(data("example1.json"));
  const auto pos = text.find("[0.3, 0.7]");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 10, "[0.3, 0.6]");
  std::ofstream(dir_ / "bad.json") << text;
  EXPECT_EQ(run("kappa --spec " + (dir_ / "bad.json").string()), 2);
  EXPECT_NE(err().find("component 2"), std::string::npos) << err();
  EXPECT_NE(err().find("line "), std::string::npos) << err();
  EXPECT_EQ(run("kappa --spec " + (dir_ / "missing.json").string()), 2);
  EXPECT_EQ(run("kappa --example 9"), 2);
}

TEST_F(Cli, BudgetExceededExitsThree) {
  EXPECT_EQ(run("measure --example 1 --depth 40"), 3);
  EXPECT_NE(err().find("budget"), std::string::npos) << err();
}

TEST_F(Cli, QuantizeCsvIsByteIdentical) {
  const std::string a = (dir_ / "a").string(), b = (dir_ / "b").string();
  ASSERT_EQ(run("quantize --example 3 --seed 5 --depth 8 --n-max 12 --out " + a, "a"), 0) << err("a");
  ASSERT_EQ(run("quantize --example 3 --seed 5 --depth 8 --n-max 12 --out " + b, "b"), 0) << err("b");
  const std::string csv = slurp(fs::path(a) / "quantize.csv");
  EXPECT_EQ(csv.substr(0, 19), "n;V;method;centers\n");
  EXPECT_EQ(csv, slurp(fs::path(b) / "quantize.csv"));
  EXPECT_EQ(out("a"), out("b"));
}

TEST_F(Cli, MeasureAndGammaCsvAreByteIdentical) {
  for (const std::string cmd : {"measure --example 1 --seed 2 --depth 7", "gamma --example 3 --seed 2 --n 300"}) {
    const std::string a = (dir_ / "a").string(), b = (dir_ / "b").string();
    fs::remove_all(a);
    fs::remove_all(b);
    ASSERT_EQ(run(cmd + " --out " + a, "a"), 0) << err("a");
    ASSERT_EQ(run(cmd + " --out " + b, "b"), 0) << err("b");
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      EXPECT_EQ(slurp(entry.path()), slurp(fs::path(b) / entry.path().filename())) << entry.path();
      ++files;
    }
    EXPECT_GE(files, 2u);
  }
}

TEST_F(Cli, PipelineExample2) {
  const std::string o = (dir_ / "p").string();
  ASSERT_EQ(run("pipeline --example 2 --out " + o), 0) << err();
  const auto j = json();
  EXPECT_LE(j["abs_error"].get<double>(), 0.05);
  EXPECT_TRUE(j["depth_rule_ok"].get<bool>());
  std::ifstream csv(fs::path(o) / "pipeline.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "n;V;e_n");
  EXPECT_EQ(nlohmann::json::parse(slurp(fs::path(o) / "pipeline.json"))["kappa"], j["kappa"]);
}

TEST_F(Cli, PipelineWarnsWhenDepthTooSmall) {
  ASSERT_EQ(run("pipeline --example 1 --depth 8"), 0) << err();
  EXPECT_FALSE(json()["depth_rule_ok"].get<bool>());
  EXPECT_NE(err().find("resolution rule"), std::string::npos) << err();
}

TEST_F(Cli, ReproduceExample1) {
  ASSERT_EQ(run("reproduce --example 1"), 0) << err();
  const auto j = json();
  EXPECT_TRUE(j["holds_uessc"].get<bool>());
  EXPECT_TRUE(j["holds_suosc"].get<bool>());
  EXPECT_NEAR(j["beta_max"].get<double>(), 2.0 / 3.0, 1e-12);
}

TEST_F(Cli, ReproduceExample2) {
  ASSERT_EQ(run("reproduce --example 2"), 0) << err();
  const auto j = json();
  EXPECT_TRUE(j["all_products_one"].get<bool>());
  EXPECT_LE(std::abs(j["max_log_product"].get<double>()), 1e-12);
  EXPECT_EQ(j["verdict"], "consistent with Omega'");
}

TEST_F(Cli, ReproduceExample3) {
  ASSERT_EQ(run("reproduce --example 3"), 0) << err();
  const auto j = json();
  EXPECT_EQ(j["verdict"], "inconsistent with Omega'");
  EXPECT_LE(j["identity_max_error"].get<double>(), 1e-9);
  EXPECT_GE(j["seeds_inconsistent"].get<int>(), 95);
}

TEST_F(Cli, WindowsAndSeedDefault) {
  ASSERT_EQ(run("windows --example 2 --n-max 50 --nprime-max 50", "a"), 0) << err("a");
  ASSERT_EQ(run("windows --example 2 --n-max 50 --nprime-max 50 --seed 0", "b"), 0) << err("b");
  EXPECT_EQ(out("a"), out("b"));
}
