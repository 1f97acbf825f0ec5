#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "gsynch/experiments.hpp"

using namespace gsynch;
namespace fs = std::filesystem;

namespace {

std::string config_error_message(const json& cfg) {
  try {
    run(cfg);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config_error) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "config accepted: " << cfg.dump();
  return {};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gsynch_test_experiments";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GSYNCH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, TableUsesCrlfAndRejectsRaggedRows) {
  Table t;
  t.columns = {"a", "b"};
  t.add({"1", "x,y"});
  EXPECT_EQ(t.to_csv(), "a,b\r\n1,\"x,y\"\r\n");
  EXPECT_THROW(t.add({"only one"}), Error);
}

TEST(Csv, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 2.1666666666666665, 1e-300, 12345678.9}) EXPECT_EQ(std::stod(format_number(x)), x);
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(Csv, AtomicWriteReplacesFile) {
  const auto p = scratch("atomic/sub/out.csv");
  write_file_atomic(p.string(), "first");
  write_file_atomic(p.string(), "second");
  EXPECT_EQ(slurp(p), "second");
  for (const auto& e : fs::directory_iterator(p.parent_path()))
    EXPECT_EQ(e.path().filename(), "out.csv") << "leftover temp file";
}

TEST(Markers, KnownValues) {
  EXPECT_NEAR(stat_lower_marker(3), std::sqrt(4.0 * std::log(2.0) / 3.0), 1e-15);
  EXPECT_GE(stat_upper_marker(10), 1.0);
  EXPECT_LT(stat_upper_marker(11), 1.0);
  EXPECT_THROW(stat_lower_marker(2), Error);
}

TEST(Config, MissingKindAndSeed) {
  EXPECT_NE(config_error_message({{"seed", 1}}).find("kind"), std::string::npos);
  EXPECT_NE(config_error_message({{"kind", "oracle-suite"}}).find("seed"), std::string::npos);
  EXPECT_NE(config_error_message({{"kind", "no-such"}, {"seed", 1}}).find("kind"), std::string::npos);
}

TEST(Config, ErrorsCarryFieldPath) {
  const auto empty = config_error_message({{"kind", "ldlr-sweep"}, {"seed", 1}, {"grid", {{"n", json::array()}}}});
  EXPECT_NE(empty.find("grid.n"), std::string::npos) << empty;
  const auto typed = config_error_message({{"kind", "ldlr-sweep"}, {"seed", 1}, {"grid", {{"lambda", "big"}}}});
  EXPECT_NE(typed.find("grid.lambda"), std::string::npos) << typed;
  const auto method = config_error_message({{"kind", "ldlr-sweep"}, {"seed", 1}, {"grid", {{"method", "guess"}}}});
  EXPECT_NE(method.find("grid.method"), std::string::npos) << method;
  const auto budget = config_error_message({{"kind", "oracle-suite"}, {"seed", 1}, {"budgets", {{"tuples", -1}}}});
  EXPECT_NE(budget.find("budgets.tuples"), std::string::npos) << budget;
  const auto drule = config_error_message({{"kind", "ldlr-sweep"}, {"seed", 1}, {"grid", {{"D", {{"c", 0.5}}}}}});
  EXPECT_NE(drule.find("grid.D"), std::string::npos) << drule;
}

TEST(Config, HashIgnoresOutputPaths) {
  auto a = resolve_config({{"kind", "ldlr-sweep"}, {"seed", 2}});
  auto b = resolve_config({{"kind", "ldlr-sweep"}, {"seed", 2}, {"output", {{"csv", "elsewhere.csv"}}}});
  auto c = resolve_config({{"kind", "ldlr-sweep"}, {"seed", 3}});
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
}

TEST(Sweep, RationalLdlrIsReproducible) {
  const json cfg = {{"kind", "ldlr-sweep"}, {"seed", 4}, {"grid", {{"rational", true}, {"n", {4, 6}}}}};
  const auto a = run(cfg);
  const auto b = run(cfg);
  EXPECT_EQ(a.exit_code, exit_ok);
  EXPECT_EQ(a.table.to_csv(), b.table.to_csv());
  EXPECT_EQ(a.table.rows.size(), 6u);
  EXPECT_NE(std::find(a.table.columns.begin(), a.table.columns.end(), "seed"), a.table.columns.end());
  for (const auto& col : a.table.columns) EXPECT_EQ(col.find("time"), std::string::npos) << col;
}

TEST(Sweep, ResourceLimitRowsAreReported) {
  const json cfg = {{"kind", "ldlr-sweep"},
                    {"seed", 1},
                    {"budgets", {{"enumeration", 50}}},
                    {"grid", {{"L", {6}}, {"n", {30}}, {"lambda", {0.5}}}}};
  const auto r = run(cfg);
  EXPECT_EQ(r.exit_code, exit_assertion);
  ASSERT_EQ(r.table.rows.size(), 1u);
  const auto status = std::find(r.table.columns.begin(), r.table.columns.end(), "status") - r.table.columns.begin();
  EXPECT_NE(r.table.rows[0][status].find("resource-limit"), std::string::npos);
}

TEST(PhaseDiagram, MarkersAndLdlrColumns) {
  PhaseDiagramOptions po;
  po.L = {2, 3, 11};
  po.lambda = {0.0, 0.8};
  po.n = {12};
  po.d_rule.fixed = 3;
  const auto t = phase_diagram(po);
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.rows[0][5], "1");  // lambda = 0
  EXPECT_EQ(t.rows[0][10], "");  // no lower marker at L = 2
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("md-count --prior circle --L 3 --n 4 --d 1"), 0);
  EXPECT_EQ(run_cli("ldlr --method exact --model cyclic --L 3 --n 4 --lambda 0.5 --D 3 --rational"), 0);
  EXPECT_EQ(run_cli("ldlr --method exact --model cyclic --L 1 --n 4 --lambda 0.5 --D 3"), 2);
  EXPECT_EQ(run_cli("bounds polylog --L 3 --lambda 1.2 --D 4"), 0);
  EXPECT_EQ(run_cli("bounds polylog --L 3 --lambda 1.2 --D 4 --limit"), 1);  // divergent series
  const auto cfg = scratch("bad.json");
  std::ofstream(cfg) << R"({"kind": "ldlr-sweep", "seed": 1, "grid": {"n": []}})";
  EXPECT_EQ(run_cli("suite --config " + cfg.string() + " --out " + scratch("bad.csv").string()), 2);
  const auto out = scratch("ok.csv");
  EXPECT_EQ(run_cli("suite --kind ldlr-sweep --seed 3 --set grid.n=[5] --out " + out.string() + " --manifest " +
                    scratch("ok.json").string()),
            0);
  EXPECT_NE(slurp(out).find("\r\n"), std::string::npos);
}
