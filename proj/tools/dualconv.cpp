#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "dualconv/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dualconv: convolution semigroups on dual semigroups"};
  std::string command, config_path, out_path;
  std::uint64_t seed = 0;
  int degree = 0;
  double tol = 0.0;
  bool csv = false;
  app.add_option("command", command,
                 "exp | check-cp | check-state | schoenberg | trotter | axioms | laws | joint | refine | fock")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file ('-' for stdin)")->required();
  app.add_option("--out", out_path, "write the report here instead of stdout");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed for randomized suites");
  auto* degree_opt = app.add_option("--degree", degree, "override degree_cap");
  auto* tol_opt = app.add_option("--tol", tol, "override tolerance");
  app.add_flag("--csv", csv, "emit the command's table as CSV instead of the JSON report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  dualconv::cli::Options options;
  options.command = command;
  options.csv = csv;
  if (*seed_opt) options.seed = seed;
  if (*degree_opt) options.degree = degree;
  if (*tol_opt) options.tol = tol;

  std::string text;
  if (config_path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "ConfigError: cannot read " << config_path << "\n";
      return 2;
    }
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    options.config = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "ConfigError: " << e.what() << "\n";
    return 2;
  }

  const auto outcome = dualconv::cli::run(options);
  const std::string body = csv && !outcome.csv.empty() ? outcome.csv : outcome.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "ConfigError: cannot write " << out_path << "\n";
      return 2;
    }
    out << body;
  }
  if (outcome.report.contains("error"))
    std::cerr << outcome.report["error"]["message"].get<std::string>() << "\n";
  return outcome.exit_code;
}
