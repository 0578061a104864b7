#include <iostream>

#include <CLI11.hpp>

#include "mwold/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = mwold::cli;
  CLI::App app{"Verification toolkit for m-isometric weighted shifts and composition operators"};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::string format = "json";
  std::string output;

  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"check-miso", "m-isometry defect of an operator"},
      {"kernel-cond", "k-kernel condition of an operator"},
      {"complete", "complete initial weights to an m-isometric shift"},
      {"recover", "recover the polynomial family of a stored shift"},
      {"graph", "h-constancy and m-isometry tests on a one-circuit graph"},
      {"wold", "both sides of the Wold-type characterization"},
      {"shift-model", "unitarily equivalent weighted-shift model"},
      {"examples", "run the built-in example corpus"},
  };

  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--input,-i", config.input_path, "input JSON file ('-' for stdin)");
    sub->add_option("--output,-o", output, "write the report here instead of stdout");
    sub->add_option("--format,-f", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--tol-rank", config.tol.tol_rank, "relative singular-value cutoff");
    sub->add_option("--tol-identity", config.tol.tol_identity, "residual threshold for identities");
    sub->add_option("--N", config.N, "number of shift sites");
    sub->add_option("--J", config.J, "branch depth of graph truncations");
    sub->add_option("--n-max", config.n_max, "depth of the wandering ladder");
    sub->add_option("--m", config.m, "order m");
    sub->add_option("--k", config.k, "order k of the kernel condition");
    sub->add_option("--seed", config.seed, "seed for randomized frames and diagonalization");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitError;
  }

  try {
    config.command = cli::command_from_string(app.get_subcommands().front()->get_name());
    config.format = cli::format_from_string(format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitError;
  }
  if (!output.empty()) config.output_path = output;
  return cli::run(config, std::cout, std::cerr);
}
