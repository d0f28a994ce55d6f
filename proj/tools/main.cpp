#include <CLI11.hpp>
#include <cstdlib>
#include <utility>
#include <iostream>

#include "aniso/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic elliptic problems with singular lower-order terms: exponent checks and discrete solves"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out_dir;
  std::int64_t seed = -1;
  int jobs = 1;
  const std::pair<const char*, const char*> commands[] = {
      {"check", "validate exponents, write exponents.csv"},
      {"solve", "solve the regularized problem at run.n"},
      {"sweep", "solve over run.n_list and flag uniform-bound behaviour"},
      {"verify", "run the invariant checks, write verify.csv"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "INI experiment file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides run.out and ANISO_OUT)");
    sub->add_option("--seed", seed, "RNG seed (overrides run.seed)")->check(CLI::NonNegativeNumber);
    sub->add_option("--jobs", jobs, "worker threads for independent checks")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);

  aniso::ConfigOverrides overrides;
  if (const char* env = std::getenv("ANISO_OUT"); env && *env) overrides.out = env;
  if (!out_dir.empty()) overrides.out = out_dir;
  if (seed >= 0) overrides.seed = static_cast<std::uint64_t>(seed);

  const std::string command = app.get_subcommands().front()->get_name();
  return aniso::run_command(command, config, overrides, jobs, std::cout, std::cerr);
}
