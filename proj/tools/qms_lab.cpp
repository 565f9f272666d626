#include <iostream>

#include <CLI11.hpp>

#include "qms/lab/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for compact quantum metric spaces on AF algebras", "qms-lab"};
  std::string command;
  std::string config;
  qms::lab::Overrides overrides;
  std::uint64_t seed = 0;
  int depth = 0;
  double tol = 0.0;
  std::string out;
  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember(qms::lab::command_names()));
  app.add_option("--config", config, "Experiment config (JSON)")->required();
  auto* out_opt = app.add_option("--out", out, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  auto* depth_opt = app.add_option("--depth", depth, "Override the sequence depth")->check(CLI::NonNegativeNumber);
  auto* tol_opt = app.add_option("--tol", tol, "Override the solver tolerance")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qms::lab::kConfigFailure;
  }
  if (*out_opt) overrides.out_dir = out;
  if (*seed_opt) overrides.seed = seed;
  if (*depth_opt) overrides.depth = depth;
  if (*tol_opt) overrides.tol = tol;
  return qms::lab::run(command, config, overrides, std::cout, std::cerr);
}
