#include "support.hpp"

#include <fsnet/cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <sys/wait.h>

using namespace fsnet;
namespace fs = std::filesystem;

namespace
{

struct Result
{
  int code;
  std::string out;
  std::string err;
};

auto run(std::vector<std::string> args) -> Result
{
  auto out = std::ostringstream{};
  auto err = std::ostringstream{};
  const auto code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

auto slurp(const fs::path& p) -> std::string
{
  auto in = std::ifstream{p};
  return {std::istreambuf_iterator<char>{in}, {}};
}

auto spit(const fs::path& p, const std::string& text) -> void
{
  auto out = std::ofstream{p};
  out << text;
}

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string{"fsnet_cli_"} + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  void TearDown() override { fs::remove_all(dir_); }

  auto path(const std::string& name) const -> std::string { return (dir_ / name).string(); }

  auto ingest(const std::string& dataset, bool labeled = true) -> std::string
  {
    const auto fsn = path(dataset + ".fsn");
    auto args = std::vector<std::string>{"ingest", test::data_path(dataset), "-o", fsn};
    if (labeled)
      args.insert(args.end(), {"--label-column", "class"});
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return fsn;
  }

  auto write_network(const std::string& name, const test::dense_rows& rows) -> std::string
  {
    const auto fsn = path(name);
    spit(fsn, to_fsn_string(test::network_from_rows(rows)));
    return fsn;
  }

  fs::path dir_;
};

} // namespace

TEST_F(Cli, IngestIris)
{
  const auto fsn = path("iris.fsn");
  const auto r = run({"ingest", test::data_path("iris"), "--label-column", "class", "-o", fsn});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("samples: 150\n"), std::string::npos);
  EXPECT_NE(r.out.find("features: 12\n"), std::string::npos);
  EXPECT_NE(r.out.find("edges: 600\n"), std::string::npos);
  EXPECT_NE(r.out.find("binning: equal-width, 3 bins\n"), std::string::npos);
  EXPECT_NE(r.out.find("labels: yes\n"), std::string::npos);
  EXPECT_NE(r.out.find("degree histogram: 4:150\n"), std::string::npos);
  EXPECT_NE(r.out.find("possible and-features: 4083\n"), std::string::npos);
  auto in = std::ifstream{fsn};
  const auto g = read_fsn(in);
  EXPECT_EQ(g.n_samples(), 150u);
  EXPECT_EQ(g.n_features(), 12u);
  EXPECT_EQ(to_fsn_string(g), to_fsn_string(test::load_network("iris")));
}

TEST_F(Cli, IngestToStdoutPutsSummaryOnStderr)
{
  const auto r = run({"ingest", test::data_path("wine"), "--label-column", "class"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, to_fsn_string(test::load_network("wine")));
  EXPECT_NE(r.err.find("features: 39\n"), std::string::npos);
  EXPECT_NE(r.err.find("possible and-features: 549755813848\n"), std::string::npos);
}

TEST_F(Cli, IngestErrors)
{
  auto r = run({"ingest", test::data_path("iris"), "--label-column", "nope"});
  EXPECT_EQ(r.code, cli::exit_config);
  EXPECT_NE(r.err.find("label column 'nope'"), std::string::npos);
  r = run({"ingest", path("missing.csv")});
  EXPECT_EQ(r.code, cli::exit_data);
  r = run({"ingest", test::data_path("iris"), "--binning", "k-means"});
  EXPECT_EQ(r.code, cli::exit_config);
  r = run({"ingest"});
  EXPECT_EQ(r.code, cli::exit_config);
}

TEST_F(Cli, HelpAndUsage)
{
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"enhance", "--help"}).code, 0);
  EXPECT_EQ(run({}).code, cli::exit_config);
  EXPECT_EQ(run({"frobnicate"}).code, cli::exit_config);
}

TEST_F(Cli, EnhanceRejectsElitismAbovePopulation)
{
  const auto fsn = ingest("iris");
  const auto r = run({"enhance", fsn, "--population", "10", "--elitism", "100"});
  EXPECT_EQ(r.code, cli::exit_config);
  EXPECT_NE(r.err.find("config error"), std::string::npos);
  EXPECT_EQ(run({"enhance", fsn, "--strategy", "nsga"}).code, cli::exit_config);
  EXPECT_EQ(run({"enhance", fsn, "--pick", "random"}).code, cli::exit_config);
}

TEST_F(Cli, EnhanceIsReproducible)
{
  const auto fsn = ingest("iris");
  const auto base = std::vector<std::string>{"enhance", fsn,      "--strategy",    "spea2",
                                             "--seed",  "5",      "--population",  "30",
                                             "--archive", "8",    "--generations", "10"};
  auto first = base;
  first.insert(first.end(), {"--report", path("a.json"), "-o", path("a.afs")});
  auto second = base;
  second.insert(second.end(), {"--report", path("b.json"), "--threads", "3"});
  ASSERT_EQ(run(first).code, 0);
  ASSERT_EQ(run(second).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));

  const auto j = nlohmann::json::parse(slurp(path("a.json")));
  EXPECT_EQ(j["strategy"], "spea2");
  EXPECT_EQ(j["seed"], 5);
  EXPECT_FALSE(j.contains("wall_time_seconds"));
  EXPECT_EQ(j["archive_nondominated_count"].size(), 10u);

  // The AFS file holds the best-count solution of the report.
  auto afs = std::ifstream{path("a.afs")};
  const auto features = read_afs(afs, 12);
  EXPECT_EQ(features.size(), j["final_set"][0]["and_features"].size());
}

TEST_F(Cli, EnhanceToStdoutWithWallTime)
{
  const auto fsn = ingest("iris");
  const auto r = run({"enhance", fsn, "--population", "20", "--elitism", "4", "--generations",
                      "3", "--wall-time", "--pick", "lowest-disproportion", "-o", path("x.afs")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["strategy"], "lga");
  EXPECT_TRUE(j.contains("wall_time_seconds"));
  EXPECT_NE(r.err.find("finished 3 generations"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("x.afs")));
}

TEST_F(Cli, ConfigFileAndFlagPrecedence)
{
  const auto fsn = ingest("iris");
  spit(path("run.json"),
       R"({"population": 20, "elitism": 4, "generations": 5, "seed": 2, "mu": 8.0})");
  auto r = run({"enhance", fsn, "--config", path("run.json"), "--generations", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["population"], 20);
  EXPECT_EQ(j["config"]["generations"], 2);
  EXPECT_EQ(j["seed"], 2);
  EXPECT_EQ(j["generations"]["tracked"].size(), 2u);

  spit(path("bad.json"), R"({"population": 20, "populaton": 30})");
  r = run({"enhance", fsn, "--config", path("bad.json")});
  EXPECT_EQ(r.code, cli::exit_config);
  EXPECT_NE(r.err.find("unknown config key 'populaton'"), std::string::npos);

  spit(path("type.json"), R"({"population": "many"})");
  EXPECT_EQ(run({"enhance", fsn, "--config", path("type.json")}).code, cli::exit_config);
  spit(path("broken.json"), "{");
  EXPECT_EQ(run({"enhance", fsn, "--config", path("broken.json")}).code, cli::exit_config);
}

TEST_F(Cli, EvaluateNoneEqualsEmptySet)
{
  const auto fsn = ingest("iris");
  spit(path("empty.afs"), "");
  const auto a = run({"evaluate", fsn, "none", "--repeats", "3", "--k-max", "5"});
  const auto b = run({"evaluate", fsn, path("empty.afs"), "--repeats", "3", "--k-max", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, 19), "fraction,k,mean,sd\n");
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 11);
}

TEST_F(Cli, EvaluateWithAndFeaturesAndReport)
{
  const auto fsn = ingest("iris");
  ASSERT_EQ(run({"oracle", fsn, "--dump", path("all.afs")}).code, 0);
  const auto r = run({"evaluate", fsn, path("all.afs"), "--repeats", "2", "--fractions", "0.5",
                      "--report", path("eval.json"), "-o", path("eval.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("eval.json")));
  EXPECT_EQ(j["and_features"], 122);
  EXPECT_EQ(j["config"]["fractions"].size(), 1u);
  EXPECT_EQ(j["accuracy"]["best"].size(), 1u);
  EXPECT_EQ(slurp(path("eval.csv")).substr(0, 19), "fraction,k,mean,sd\n");
}

TEST_F(Cli, EvaluateDropsUnconnectedAndFeatures)
{
  const auto fsn = ingest("iris");
  // Features 0 and 1 are bins of the same attribute, so {0, 1} connects nothing.
  spit(path("mixed.afs"), "0 1\n");
  const auto r = run({"evaluate", fsn, path("mixed.afs"), "--repeats", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(r.out, run({"evaluate", fsn, "none", "--repeats", "2"}).out);
}

TEST_F(Cli, EvaluateErrors)
{
  const auto unlabeled = ingest("iris", false);
  EXPECT_EQ(run({"evaluate", unlabeled, "none"}).code, cli::exit_data);
  const auto fsn = ingest("iris");
  spit(path("bad.afs"), "0 99\n");
  const auto r = run({"evaluate", fsn, path("bad.afs")});
  EXPECT_EQ(r.code, cli::exit_data);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
  EXPECT_EQ(run({"evaluate", fsn, "none", "--fractions", "1.5"}).code, cli::exit_config);
}

TEST_F(Cli, Oracle)
{
  const auto fsn = ingest("iris");
  auto r = run({"oracle", fsn});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "122\n");

  r = run({"oracle", write_network("toy.fsn", {{1, 1, 1, 1}})});
  EXPECT_EQ(r.out, "11\n");

  r = run({"oracle", write_network("dense.fsn", {std::vector<std::uint8_t>(40, 1)})});
  EXPECT_EQ(r.code, cli::exit_budget);
  EXPECT_NE(r.err.find("1099511627776"), std::string::npos);

  r = run({"oracle", fsn, "--budget", "100"});
  EXPECT_EQ(r.code, cli::exit_budget);
}

TEST_F(Cli, Dot)
{
  const auto fsn = write_network("toy.fsn", {{1, 1, 0}, {0, 1, 1}});
  spit(path("one.afs"), "0 1\n");
  const auto r = run({"dot", fsn, path("one.afs")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("graph", 0), 0u);
  EXPECT_NE(r.out.find("a0 [shape=box"), std::string::npos);
  EXPECT_NE(r.out.find("s0 -- a0;"), std::string::npos);
  EXPECT_EQ(r.out.find("s1 -- a0;"), std::string::npos);
}

TEST_F(Cli, MalformedFsnIsADataError)
{
  spit(path("broken.fsn"), "FSN 1\nnot a network\n");
  const auto r = run({"oracle", path("broken.fsn")});
  EXPECT_EQ(r.code, cli::exit_data);
}

TEST_F(Cli, BinaryExitCodes)
{
  const auto fsn = ingest("iris");
  const auto command = std::string{FSNET_CLI_PATH} + " oracle " + fsn + " > " + path("count.txt");
  const auto status = std::system(command.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_EQ(slurp(path("count.txt")), "122\n");

  const auto bad = std::string{FSNET_CLI_PATH} + " enhance " + fsn +
                   " --population 10 --elitism 100 2> " + path("err.txt");
  const auto bad_status = std::system(bad.c_str());
  ASSERT_TRUE(WIFEXITED(bad_status));
  EXPECT_EQ(WEXITSTATUS(bad_status), cli::exit_config);
}
