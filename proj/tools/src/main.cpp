#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fraclab/error.hpp"
#include "fraclab_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace fraclab::cli;
  CLI::App app{"fraclab: fractional operators on variable-exponent spaces"};
  app.require_subcommand(1);

  int n = 1;
  int ell = 2;
  double alpha = 0.5;
  auto* constants = app.add_subcommand("constants", "print normalizing constants");
  constants->add_option("--n", n, "dimension");
  constants->add_option("--ell", ell, "difference order (even)");
  constants->add_option("--alpha", alpha, "fractional order");

  std::string config;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run an experiment configuration");
  run->add_option("config", config, "configuration file")->required();
  run->add_option("--out-dir", out_dir, "directory for relative output paths");

  std::string symbol;
  std::string output;
  int k_max = -1;
  auto* audit = app.add_subcommand("audit", "Mikhlin audit of a radial symbol");
  audit->add_option("symbol", symbol, "A, B, w, mu1, mu2, mu3, sin or composite")->required();
  audit->add_option("--n", n, "dimension");
  audit->add_option("--ell", ell, "difference order (even)");
  audit->add_option("--alpha", alpha, "fractional order");
  audit->add_option("--k-max", k_max, "highest derivative order (default n)");
  audit->add_option("--out", output, "JSON output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (constants->parsed()) {
    try {
      return cmd_constants(n, ell, alpha, std::cout);
    } catch (const ConfigError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return kUsage;
    } catch (const fraclab::DomainError& e) {
      std::cerr << "precondition violated: " << e.what() << '\n';
      return kUsage;
    } catch (const fraclab::Error& e) {
      std::cerr << "numerical error: " << e.what() << '\n';
      return kNumerical;
    }
  }
  if (run->parsed()) return cmd_run(config, out_dir, std::cout, std::cerr);
  std::optional<int> k;
  if (k_max >= 0) k = k_max;
  return cmd_audit(symbol, n, ell, alpha, k, output, std::cout, std::cerr);
}
