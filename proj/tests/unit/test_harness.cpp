#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aniso/harness.hpp"

using namespace aniso;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = ANISO_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("aniso_test_" + name);
  fs::remove_all(dir);
  return dir;
}

int run(const std::string& cmd, const std::string& config, const fs::path& out, std::string* err_text = nullptr,
        int jobs = 1) {
  std::ostringstream o, e;
  const int code = run_command(cmd, kConfigs / config, ConfigOverrides{std::nullopt, out.string()}, jobs, o, e);
  if (err_text) *err_text = e.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Harness, ExitCodes) {
  std::string err;
  EXPECT_EQ(run("check", "supercritical.ini", scratch("super"), &err), kExitValidation);
  EXPECT_NE(err.find("supercritical"), std::string::npos);
  EXPECT_EQ(run("solve", "supercritical.ini", scratch("super_solve")), kExitPass);
  EXPECT_EQ(run("solve", "nan_psi.ini", scratch("nan"), &err), kExitSolver);
  EXPECT_NE(err.find("node"), std::string::npos);
  EXPECT_EQ(run("check", "broken_theta.ini", scratch("theta"), &err), kExitValidation);
  EXPECT_NE(err.find("problem.theta[2]"), std::string::npos);
  EXPECT_EQ(run("check", "missing.ini", scratch("missing")), kExitValidation);
  EXPECT_EQ(run("frobnicate", "zero_data.ini", scratch("cmd")), kExitValidation);
}

TEST(Harness, GarScaleFailsVerify) {
  const auto out = scratch("gar");
  EXPECT_EQ(run("verify", "gar_broken.ini", out), kExitVerify);
  EXPECT_NE(slurp(out / "verify.csv").find("gar_inequality,fail"), std::string::npos);
}

TEST(Harness, CheckWritesReport) {
  const auto out = scratch("check");
  ASSERT_EQ(run("check", "isotropic_check.ini", out), kExitPass);
  EXPECT_TRUE(fs::exists(out / "exponents.csv"));
  EXPECT_TRUE(fs::exists(out / "resolved_config.ini"));
}

TEST(Harness, ResolvedConfigReproduces) {
  const auto a = scratch("resolved_a");
  const auto b = scratch("resolved_b");
  ASSERT_EQ(run("solve", "case2_nonneg.ini", a), kExitPass);
  std::ostringstream o, e;
  ASSERT_EQ(run_command("solve", a / "resolved_config.ini", ConfigOverrides{std::nullopt, b.string()}, 1, o, e),
            kExitPass)
      << e.str();
  EXPECT_EQ(slurp(a / "solve.csv"), slurp(b / "solve.csv"));
  EXPECT_EQ(slurp(a / "U_n16.csv"), slurp(b / "U_n16.csv"));
}

TEST(Harness, Deterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  ASSERT_EQ(run("verify", "case1_bounded.ini", a, nullptr, 1), kExitPass);
  ASSERT_EQ(run("verify", "case1_bounded.ini", b, nullptr, 4), kExitPass);
  EXPECT_EQ(slurp(a / "verify.csv"), slurp(b / "verify.csv"));
}

TEST(Harness, ZeroDataSolvesToZero) {
  const auto out = scratch("zero");
  ASSERT_EQ(run("solve", "zero_data.ini", out), kExitPass);
  std::ifstream in(out / "U_n1.csv");
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const double v = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_EQ(v, 0.0);
  }
}
