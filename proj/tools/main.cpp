#include "twosys/cli.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
  CLI::App app{"two-system dynamics: construction, integration, and verification"};
  app.require_subcommand(1);

  std::string config_path;
  double epsilon = 0.1;
  double t_end = 100.0;
  std::string out_prefix = "quartic_";

  auto* simulate = app.add_subcommand("simulate", "integrate a configured run; write trajectory CSV and invariant report JSON");
  simulate->add_option("config", config_path, "run configuration file")->required();

  auto* compare = app.add_subcommand("compare", "integrate two forms from consistent initial data and report trajectory deviations");
  compare->add_option("config", config_path, "run configuration file")->required();

  auto* oracle = app.add_subcommand("oracle", "check a closed-form solution against numerical integration");
  oracle->add_option("config", config_path, "run configuration file")->required();

  auto* example = app.add_subcommand("example-quartic", "run the fifth-order quartic-oscillator two-system end to end");
  example->add_option("--epsilon", epsilon, "anharmonicity parameter");
  example->add_option("--t-end", t_end, "integration time");
  example->add_option("--out-prefix", out_prefix, "output file prefix");

  auto* invariants = app.add_subcommand("invariants", "recompute the invariant report from a saved trajectory CSV");
  invariants->add_option("config", config_path, "run configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) return twosys::cmd_simulate(config_path);
  if (compare->parsed()) return twosys::cmd_compare(config_path);
  if (oracle->parsed()) return twosys::cmd_oracle(config_path);
  if (example->parsed()) return twosys::cmd_example_quartic(epsilon, t_end, out_prefix);
  if (invariants->parsed()) return twosys::cmd_invariants(config_path);
  return 1;
}
