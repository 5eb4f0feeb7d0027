#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fraclab/report.hpp"
#include "fraclab/symbols.hpp"
#include "fraclab_cli/config.hpp"

namespace fraclab::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kNumerical = 3 };

/// T0 for n = 1, ell = 2 in closed form: 2^{alpha-1} pi / (Gamma(1+alpha) sin(pi alpha/2)).
double t0_closed_form_1d(double alpha);

/// Table of gamma_n(alpha), d_{n,ell}(alpha), lambda (quadrature oracle, closed form, ratio), the
/// limits of B and the C_i.
int cmd_constants(int n, int ell, double alpha, std::ostream& out);

/// Runs one configuration. Output paths are resolved against out_dir when relative.
ConvergenceReport execute(const RunConfig& config);
int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            std::ostream& out, std::ostream& err);

/// Symbols: A, B, w, mu1, mu2, mu3, sin, composite (= mu3 (B - B(inf))).
RadialSymbol audit_symbol(const std::string& name, int n, int ell, double alpha);
int cmd_audit(const std::string& symbol, int n, int ell, double alpha, std::optional<int> k_max,
              const std::filesystem::path& output, std::ostream& out, std::ostream& err);

}  // namespace fraclab::cli
