#include <gtest/gtest.h>

#include <sstream>

#include "aniso/config.hpp"
#include "aniso/error.hpp"

using namespace aniso;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, ".");
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::Io;
}

const char* kBase =
    "[problem]\np = 1.6, 1.9\nq = 0.6, 0.8\ntheta = 1.5, 1.2\nm = 4\n"
    "[grid]\nnodes = 6, 6\n[operator_b]\nF = bump:5\n";

}  // namespace

TEST(Config, DefaultsAreRecorded) {
  const auto cfg = parse(kBase);
  EXPECT_EQ(cfg.problem.N, 2);
  EXPECT_EQ(cfg.problem.case_id, CaseId::Case1);
  EXPECT_NE(cfg.resolved_ini.find("h="), std::string::npos);
  EXPECT_NE(cfg.resolved_ini.find("seed=1"), std::string::npos);
  EXPECT_NE(cfg.resolved_ini.find("tol=1e-08"), std::string::npos);
  // Reparsing the resolved form reproduces it.
  EXPECT_EQ(parse(cfg.resolved_ini).resolved_ini, cfg.resolved_ini);
}

TEST(Config, Overrides) {
  std::istringstream in(kBase);
  const auto cfg = parse_config(in, ".", ConfigOverrides{42, "elsewhere"});
  EXPECT_EQ(cfg.run.seed, 42u);
  EXPECT_EQ(cfg.run.out, "elsewhere");
}

TEST(Config, FieldPathsInErrors) {
  try {
    parse(std::string(kBase) + "[run]\nbogus = 1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("run.bogus"), std::string::npos);
  }
  try {
    parse("[problem]\np = 1.6, 1.9\ntheta = 1.5, -1\n[operator_b]\nF = bump:1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("problem.theta[2]"), std::string::npos);
  }
  EXPECT_EQ(kind_of("[problem]\np = 1.6, x\n"), ErrorKind::Validation);
  EXPECT_EQ(kind_of(std::string(kBase) + "[solver]\nrelax = 2\n"), ErrorKind::Validation);
  EXPECT_EQ(kind_of("[problem]\np = 1.6, 1.9\nm = 3\n[grid]\nnodes = 4\n[operator_b]\nF = bump:1\n"),
            ErrorKind::GridMismatch);
  EXPECT_EQ(kind_of("[problem]\np = 1.6, 1.9\nm = 3\n"), ErrorKind::Validation);
  EXPECT_EQ(kind_of(std::string(kBase) + "[run]\nn_list = 4, 2\n"), ErrorKind::Validation);
}

TEST(Config, Case2RequiresNonnegativeData) {
  const std::string c2 = "[problem]\np = 1.8, 1.8\nq = 0.5, 0.5\ntheta = 0.5, 1\nm = 2\n[grid]\nnodes = 4, 4\n";
  EXPECT_EQ(parse(c2 + "[operator_b]\nF = bump:5\npsi = saturating_abs:1\n").problem.case_id, CaseId::Case2);
  EXPECT_EQ(kind_of(c2 + "[operator_b]\nF = bump:5\npsi = saturating:1\n"), ErrorKind::Validation);
  EXPECT_EQ(kind_of(c2 + "[operator_b]\nF = const:-1\n"), ErrorKind::Validation);
}

TEST(Config, CsvPresetMissingFile) {
  EXPECT_EQ(kind_of("[problem]\np = 1.6, 1.9\nm = 3\n[grid]\nnodes = 4, 4\n[operator_b]\nF = csv:nope.csv\n"),
            ErrorKind::Io);
}

TEST(Config, Presets) {
  const Grid g({1.0, 1.0}, {5, 5});
  EXPECT_EQ(node_preset(g, "const:2", ".", "F").min(), 2.0);
  EXPECT_NEAR(node_preset(g, "sines:1", ".", "F").max_abs(), 1.0, 1e-12);
  EXPECT_THROW(node_preset(g, "wobble:1", ".", "F"), Error);
  EXPECT_EQ(edge_preset(g, "sines:1", "G").size(), 2u);
  EXPECT_TRUE(edge_preset(g, "zero", "G").empty());
  EXPECT_EQ(psi_preset("cap:1:2", "psi").kind, PsiMap::Kind::Cap);
  EXPECT_THROW(psi_preset("cap:1", "psi"), Error);
}
