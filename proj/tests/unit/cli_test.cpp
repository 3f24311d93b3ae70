#include "commands.hpp"
#include "json_io.hpp"

#include "ef1po/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ef1po::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ef1po_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, GenSingleAgentNoChores) {
  GenArgs args;
  args.agents = 1;
  args.chores = 0;
  EXPECT_EQ(cmd_gen(args, out_, err_), kCertified);
  EXPECT_EQ(out_.str(), "{\"n\":1,\"m\":0,\"costs\":[[]]}\n");
}

TEST_F(CliTest, GenIsDeterministicAndInRange) {
  GenArgs args;
  args.agents = 2;
  args.chores = 3;
  args.max_cost = 5;
  args.seed = 7;
  std::ostringstream again;
  ASSERT_EQ(cmd_gen(args, out_, err_), kCertified);
  ASSERT_EQ(cmd_gen(args, again, err_), kCertified);
  EXPECT_EQ(out_.str(), again.str());
  const auto doc = Json::parse(out_.str());
  ASSERT_EQ(doc["costs"].size(), 2u);
  for (const auto& row : doc["costs"]) {
    ASSERT_EQ(row.size(), 3u);
    for (const auto& c : row) {
      EXPECT_GE(c.get<int>(), 1);
      EXPECT_LE(c.get<int>(), 5);
    }
  }
}

TEST_F(CliTest, GenRejectsBadRanges) {
  GenArgs args;
  args.agents = 0;
  EXPECT_EQ(cmd_gen(args, out_, err_), kUsage);
  EXPECT_NE(err_.str().find("--agents"), std::string::npos);
  EXPECT_EQ(Json::parse(out_.str())["error"]["kind"], "input");
}

TEST_F(CliTest, SolveSwapInstance) {
  SolveArgs args;
  args.file = write("swap.json", R"({"n":2,"m":2,"costs":[[1,2],[2,1]]})");
  ASSERT_EQ(cmd_solve(args, out_, err_), kCertified);
  const auto doc = Json::parse(out_.str());
  EXPECT_EQ(doc["bundles"], Json::parse("[[1],[2]]"));
  const auto& checks = doc["certificate"]["checks"];
  for (const char* key : {"ef1", "pef1", "fpo_perturbed", "po_original"}) EXPECT_TRUE(checks[key].get<bool>()) << key;
  EXPECT_EQ(doc["certificate"]["method"], "paper");
  // default_tau of the perturbed instance sits just off 1/16.
  const Rat tau = rat_from_json(doc["certificate"]["tau"]);
  EXPECT_GT(tau, parse_rat("1/17"));
  EXPECT_LT(tau, parse_rat("1/15"));
}

TEST_F(CliTest, SolveBruteforceAgreesOnVerdicts) {
  const auto file = write("swap.json", R"({"n":2,"m":2,"costs":[[1,2],[2,1]]})");
  SolveArgs paper;
  paper.file = file;
  SolveArgs brute = paper;
  brute.method = "bruteforce";
  std::ostringstream other;
  ASSERT_EQ(cmd_solve(paper, out_, err_), kCertified);
  ASSERT_EQ(cmd_solve(brute, other, err_), kCertified);
  const auto a = Json::parse(out_.str())["certificate"]["checks"];
  const auto b = Json::parse(other.str())["certificate"]["checks"];
  EXPECT_EQ(a["ef1"], b["ef1"]);
  EXPECT_EQ(a["po_original"], b["po_original"]);
  EXPECT_EQ(a["fpo_perturbed"], b["fpo_perturbed"]);
}

TEST_F(CliTest, SolveEmptyInstance) {
  SolveArgs args;
  args.file = write("empty.json", R"({"n":3,"m":0,"costs":[[],[],[]]})");
  ASSERT_EQ(cmd_solve(args, out_, err_), kCertified);
  EXPECT_EQ(Json::parse(out_.str())["bundles"], Json::parse("[[],[],[]]"));
}

TEST_F(CliTest, SolveTraceGoesToStderr) {
  SolveArgs args;
  args.file = write("swap.json", R"({"n":2,"m":2,"costs":[[1,2],[2,1]]})");
  args.trace = true;
  ASSERT_EQ(cmd_solve(args, out_, err_), kCertified);
  EXPECT_EQ(err_.str(), "");  // this instance needs no transfers
}

TEST_F(CliTest, SolveErrors) {
  SolveArgs args;
  args.file = write("broken.json", "{\"n\":2,");
  EXPECT_EQ(cmd_solve(args, out_, err_), kUsage);
  EXPECT_EQ(Json::parse(out_.str())["error"]["kind"], "input");

  std::ostringstream out2;
  args.file = write("float.json", R"({"n":1,"m":1,"costs":[[1.5]]})");
  EXPECT_EQ(cmd_solve(args, out2, err_), kUsage);

  std::ostringstream out3;
  args.file = write("zero.json", R"({"n":2,"m":2,"costs":[[0,1],[1,1]]})");
  EXPECT_EQ(cmd_solve(args, out3, err_), kUsage);
  std::ostringstream out4;
  args.allow_zero = true;
  EXPECT_EQ(cmd_solve(args, out4, err_), kCertified);

  std::ostringstream out5;
  SolveArgs budget;
  budget.file = write("wide.json", R"({"n":3,"m":5,"costs":[[1,2,3,4,5],[5,4,3,2,1],[2,2,2,2,2]]})");
  budget.method = "bruteforce";
  budget.budget = 10;
  EXPECT_EQ(cmd_solve(budget, out5, err_), kBudget);
  EXPECT_EQ(Json::parse(out5.str())["error"]["kind"], "budget");
}

TEST_F(CliTest, CheckPoAndDominatedWitness) {
  CheckArgs args;
  args.file = write("swap.json", R"({"n":2,"m":2,"costs":[[1,2],[2,1]]})");
  args.allocation = write("good.json", R"({"bundles":[[1],[2]]})");
  args.properties = {"po", "fpo", "ef1"};
  EXPECT_EQ(cmd_check(args, out_, err_), kCertified);

  std::ostringstream bad;
  args.allocation = write("bad.json", R"({"bundles":[[2],[1]]})");
  args.properties = {"po"};
  EXPECT_EQ(cmd_check(args, bad, err_), kCertificationFailure);
  const auto report = Json::parse(bad.str());
  EXPECT_FALSE(report["verdict"].get<bool>());
  EXPECT_EQ(report["witness"]["bundles"], Json::parse("[[1],[2]]"));
}

TEST_F(CliTest, CheckSingleAgentPassesEverything) {
  CheckArgs args;
  args.file = write("one.json", R"({"n":1,"m":3,"costs":[[1,2,3]]})");
  args.allocation = write("x.json", R"({"bundles":[[1,2,3]]})");
  args.properties = {"ef1", "wef1", "po", "fpo"};
  EXPECT_EQ(cmd_check(args, out_, err_), kCertified);
  std::istringstream lines(out_.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_TRUE(Json::parse(line)["verdict"].get<bool>());
    ++count;
  }
  EXPECT_EQ(count, 4);
}

TEST_F(CliTest, CheckPef1NeedsACertificate) {
  CheckArgs args;
  args.file = write("swap.json", R"({"n":2,"m":2,"costs":[[1,2],[2,1]]})");
  args.allocation = write("x.json", R"({"bundles":[[1],[2]]})");
  args.properties = {"pef1"};
  EXPECT_EQ(cmd_check(args, out_, err_), kUsage);
  EXPECT_NE(err_.str().find("certificate"), std::string::npos);
}

TEST_F(CliTest, CheckPef1FromASolveResult) {
  SolveArgs solve_args;
  solve_args.file = write("inst.json", R"({"n":3,"m":4,"costs":[[4,2,7,1],[3,3,2,6],[5,1,4,4]],"entitlements":[1,2,1]})");
  solve_args.seed = 3;
  ASSERT_EQ(cmd_solve(solve_args, out_, err_), kCertified);
  CheckArgs args;
  args.file = solve_args.file;
  args.allocation = write("result.json", out_.str());
  args.properties = {"pef1", "wef1"};
  std::ostringstream out;
  EXPECT_EQ(cmd_check(args, out, err_), kCertified) << out.str();
}

TEST_F(CliTest, PerturbInfoSwapInstance) {
  PerturbArgs args;
  args.file = write("swap.json", R"({"n":2,"m":2,"costs":[[1,2],[2,1]]})");
  args.info = true;
  ASSERT_EQ(cmd_perturb(args, out_, err_), kCertified);
  const auto doc = Json::parse(out_.str());
  EXPECT_EQ(doc["delta"], 1);
  EXPECT_EQ(doc["delta_prime"], 3);
  EXPECT_EQ(doc["eta"], "1/32");
  EXPECT_EQ(doc["primes"], Json::parse("[[2,3],[5,7]]"));
}

TEST_F(CliTest, PerturbInfoUniformAndSingleAgent) {
  PerturbArgs args;
  args.file = write("flat.json", R"({"n":2,"m":2,"costs":[[1,1],[1,1]]})");
  args.info = true;
  ASSERT_EQ(cmd_perturb(args, out_, err_), kCertified);
  EXPECT_EQ(Json::parse(out_.str())["delta_prime"], "no cycle with pi != 1");

  std::ostringstream single;
  args.file = write("one.json", R"({"n":1,"m":2,"costs":[[1,2]]})");
  ASSERT_EQ(cmd_perturb(args, single, err_), kCertified);
  EXPECT_EQ(Json::parse(single.str())["delta"], 1);
}

TEST_F(CliTest, PerturbWritesACertifiedInstance) {
  PerturbArgs args;
  args.file = write("flat.json", R"({"n":2,"m":2,"costs":[[1,1],[1,1]]})");
  args.seed = 4;
  ASSERT_EQ(cmd_perturb(args, out_, err_), kCertified);
  const Instance perturbed = parse_instance(Json::parse(out_.str()));
  EXPECT_TRUE(is_nondegenerate(perturbed).verdict);
}

TEST_F(CliTest, BenchSingleTrial) {
  BenchArgs args;
  args.trials = 1;
  args.agents = "1";
  args.chores = "0..3";
  ASSERT_EQ(cmd_bench(args, out_, err_), kCertified);
  std::istringstream lines(out_.str());
  std::string header;
  std::string row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "trial,n,m,seed,method,iterations,phi_start,ef1,pef1,fpo_perturbed,po_original,fallback");
  EXPECT_EQ(row.rfind("0,1,", 0), 0u);
  EXPECT_NE(row.find(",paper,0,"), std::string::npos);
  EXPECT_EQ(err_.str(), "fallback_rate 0/1\n");
}

TEST_F(CliTest, BenchIsDeterministicAcrossJobCounts) {
  BenchArgs args;
  args.trials = 12;
  args.seed = 9;
  args.entitlements = true;
  std::ostringstream parallel;
  ASSERT_EQ(cmd_bench(args, out_, err_), kCertified);
  args.jobs = 4;
  ASSERT_EQ(cmd_bench(args, parallel, err_), kCertified);
  EXPECT_EQ(out_.str(), parallel.str());
  std::istringstream lines(out_.str());
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::vector<std::string> cols;
    std::istringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cols.push_back(cell);
    ASSERT_EQ(cols.size(), 12u);
    EXPECT_EQ(cols[7], "true");   // ef1
    EXPECT_EQ(cols[10], "true");  // po_original
  }
}

TEST(ParseRange, Forms) {
  EXPECT_EQ(parse_range("2..5"), (std::pair<std::int64_t, std::int64_t>{2, 5}));
  EXPECT_EQ(parse_range("3"), (std::pair<std::int64_t, std::int64_t>{3, 3}));
  EXPECT_THROW(parse_range("5..2"), InvalidInput);
  EXPECT_THROW(parse_range("a..b"), InvalidInput);
  EXPECT_THROW(parse_range(""), InvalidInput);
}

TEST(JsonIo, RationalEncoding) {
  EXPECT_EQ(rat_to_json(Rat(5)), 5);
  EXPECT_EQ(rat_to_json(parse_rat("-3/4")), "-3/4");
  const Rat huge = parse_rat("123456789012345678901234567890");
  EXPECT_EQ(rat_from_json(rat_to_json(huge)), huge);
  EXPECT_EQ(rat_from_json(Json("7/14")), parse_rat("1/2"));
  EXPECT_THROW(rat_from_json(Json(0.5)), InvalidInput);
  EXPECT_THROW(rat_from_json(Json("1/0")), InvalidInput);
}

TEST(JsonIo, InstanceValidation) {
  EXPECT_THROW(parse_instance(Json::parse(R"({"n":2,"m":1,"costs":[[1]]})")), InvalidInput);
  EXPECT_THROW(parse_instance(Json::parse(R"({"n":1,"m":2,"costs":[[1]]})")), InvalidInput);
  EXPECT_THROW(parse_instance(Json::parse(R"({"n":1,"m":1,"costs":[[-1]]})"), true), InvalidInput);
  EXPECT_THROW(parse_instance(Json::parse(R"({"n":2,"m":1,"costs":[[1],[1]],"entitlements":[1,0]})")),
               InvalidInput);
  EXPECT_THROW(parse_bundles(Json::parse(R"({"bundles":[[1],[1]]})"), 2, 1), InvalidInput);
  EXPECT_THROW(parse_bundles(Json::parse(R"({"bundles":[[3]]})"), 1, 2), InvalidInput);
}

TEST(JsonIo, InstanceRoundTrip) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 100; ++t) {
    const auto base = testing::random_instance(rng, 1 + rng() % 4, rng() % 6, 1000, t % 2 == 1);
    CostMatrix c = base.costs();
    if (!c.empty() && !c[0].empty()) c[0][0] = parse_rat("7/3");
    const Instance inst = base.chores() == 0 ? base
                                            : Instance(c, {base.entitlements().begin(), base.entitlements().end()});
    EXPECT_EQ(parse_instance(Json::parse(instance_to_json(inst).dump())), inst);
    const Allocation x = Allocation::from_owners(inst.agents(), std::vector<Index>(inst.chores(), inst.agents() - 1));
    EXPECT_EQ(parse_bundles(Json{{"bundles", bundles_to_json(x)}}, inst.agents(), inst.chores()), x);
  }
}

}  // namespace
}  // namespace ef1po::cli
