#include <gtest/gtest.h>

#include <cmath>

#include "campaign.hpp"
#include "subrv/errors.hpp"

using namespace subrv;
using namespace subrv::cli;

namespace {

std::string config_with(const std::string& extra) { return R"({"schema_version": 1)" + extra + "}"; }

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const TaskRecord& only(const Report& r) {
  EXPECT_EQ(r.tasks.size(), 1u);
  return r.tasks.front();
}

}  // namespace

TEST(CliConfig, MinimalDocumentFillsDefaults) {
  const auto c = parse_config(config_with(""));
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.lambdas.size(), 5u);
  EXPECT_EQ(c.L_grid, default_L_grid());
  EXPECT_EQ(c.tol.lemma1, 1e-10);
  EXPECT_TRUE(c.tasks.empty());
  EXPECT_FALSE(c.report_path.has_value());
}

TEST(CliConfig, ScalarsAndArraysAccepted) {
  const auto c = parse_config(config_with(R"(, "bcv": {"lambda": 1, "tau": [1, 2], "L": 2}, "seed": 7)"));
  EXPECT_EQ(c.lambdas, std::vector<double>{1.0});
  EXPECT_EQ(c.taus, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(c.seed, 7u);
}

TEST(CliConfig, NegativeToleranceRejected) {
  const auto msg = error_of(config_with(R"(, "tolerances": {"gauss": -1e-8})"));
  EXPECT_NE(msg.find("tolerances > 0"), std::string::npos) << msg;
  EXPECT_NE(msg.find("gauss"), std::string::npos) << msg;
}

TEST(CliConfig, UnknownKeysNamed) {
  EXPECT_NE(error_of(config_with(R"(, "foo": 1)")).find("'foo'"), std::string::npos);
  EXPECT_NE(error_of(config_with(R"(, "bcv": {"foo": 1})")).find("bcv.foo"), std::string::npos);
  EXPECT_NE(error_of(config_with(R"(, "referee": {"nodes": {"extra": 2}})")).find("referee.nodes.extra"),
            std::string::npos);
}

TEST(CliConfig, ParseErrorsCarryPosition) {
  const auto msg = error_of("{\"schema_version\": 1,\n  \"seed\": }");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(CliConfig, ValidationErrors) {
  EXPECT_NE(error_of("{}").find("schema_version"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema_version": 2})").find("schema_version"), std::string::npos);
  EXPECT_NE(error_of(config_with(R"(, "L_grid": [1e2, 1e4, 1e3, 1e6, 1e7])")).find("strictly increasing"),
            std::string::npos);
  EXPECT_NE(error_of(config_with(R"(, "surface": {"presets": ["sphere"]})")).find("sphere"), std::string::npos);
  EXPECT_NE(error_of(config_with(R"(, "referee": {"base_metric": "round"})")).find("round"), std::string::npos);
  EXPECT_NE(error_of(config_with(R"(, "tasks": ["nope"])")).find("nope"), std::string::npos);
  EXPECT_NE(error_of(config_with(R"(, "referee": {"check_L": 3e6})")).find("check_L"), std::string::npos);
  EXPECT_NE(error_of(config_with(R"(, "bcv": {"points": 0})")).find("bcv.points"), std::string::npos);
}

TEST(CliRun, EmptyTaskListIsPass) {
  const auto rep = run(parse_config(config_with("")));
  EXPECT_TRUE(rep.tasks.empty());
  EXPECT_FALSE(rep.any_fail());
  const auto j = rep.to_json("t");
  EXPECT_EQ(j["status"], "PASS");
  EXPECT_TRUE(j["tasks"].empty());
}

TEST(CliRun, ConnectionTableSingleParameterSet) {
  const auto c = parse_config(
      config_with(R"(, "bcv": {"lambda": 1, "tau": 1, "L": 2, "points": 20}, "tasks": ["verify-lemma1"])"));
  const auto rep = run(c);
  const auto& t = only(rep);
  EXPECT_EQ(t.status, Status::Pass);
  EXPECT_LE(t.payload["max_diff"].get<double>(), 1e-10);
}

TEST(CliRun, GaussCurvatureLimitOfHeisenbergPlane) {
  const auto c = parse_config(config_with(R"(, "tasks": ["limit-A1", "limit-rate"])"));
  const auto rep = run(c);
  ASSERT_EQ(rep.tasks.size(), 2u);
  EXPECT_EQ(rep.tasks[0].status, Status::Pass);
  EXPECT_NEAR(rep.tasks[0].payload["fit"]["a"].get<double>(), -1.0, 1e-4);
  // the plain square-root fit is polluted by the O(1/L) correction
  EXPECT_EQ(rep.tasks[1].status, Status::Fail);
  EXPECT_TRUE(rep.any_fail());
  ASSERT_EQ(rep.tables.size(), 1u);
  EXPECT_EQ(rep.tables[0].rows.size(), 7u);
}

TEST(CliRun, ConstantsAndHandValue) {
  const auto rep = run(parse_config(config_with(R"(, "tasks": ["wres-constants", "omega4-hand-value"])")));
  for (const auto& t : rep.tasks) EXPECT_EQ(t.status, Status::Pass) << t.name;
}

TEST(CliRun, TaskOrderPreserved) {
  const auto rep = run(parse_config(config_with(R"(, "tasks": ["wres-constants", "limit-area", "omega4-hand-value"])")));
  ASSERT_EQ(rep.tasks.size(), 3u);
  EXPECT_EQ(rep.tasks[0].name, "wres-constants");
  EXPECT_EQ(rep.tasks[1].name, "limit-area");
  EXPECT_EQ(rep.tasks[2].name, "omega4-hand-value");
}

TEST(CliRun, ReportsAreDeterministic) {
  const auto c = parse_config(config_with(
      R"(, "bcv": {"points": 5}, "twisted": {"specs": 2, "points": 3}, "surface": {"points": 5},
         "tasks": ["verify-lemma1", "verify-twisted", "gauss-referee", "limit-A1"])"));
  const auto a = run(c).to_json("x").dump(2);
  const auto b = run(c).to_json("x").dump(2);
  EXPECT_EQ(a, b);
  auto c2 = c;
  c2.seed = 43;
  EXPECT_NE(run(c2).to_json("x").dump(2), a);
}

TEST(CliRun, RegistryNamesUnique) {
  const auto& reg = task_registry();
  for (std::size_t i = 0; i < reg.size(); ++i)
    for (std::size_t j = i + 1; j < reg.size(); ++j) EXPECT_NE(reg[i].name, reg[j].name);
}
