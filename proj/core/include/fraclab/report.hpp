#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fraclab/numerics.hpp"
#include "fraclab/symbols.hpp"

namespace fraclab {

struct ConvergenceRecord {
  double eps = 0.0;
  double error_norm = 0.0;
  double norm_value = 0.0;
};

/// Per-experiment result. Records are stored with strictly decreasing eps.
struct ConvergenceReport {
  std::string experiment;
  std::map<std::string, std::string> parameters;
  std::vector<ConvergenceRecord> records;
  bool has_fit = false;
  LinearFit fit;  ///< log error_norm against log eps
  std::map<std::string, double> metrics;
  std::string verdict = "FAIL";
  bool expected_negative = false;  ///< the run is designed to FAIL
  std::vector<std::string> notes;

  bool passed() const { return verdict == "PASS"; }
  /// PASS for ordinary runs, FAIL for expected-negative runs.
  bool as_expected() const { return expected_negative ? !passed() : passed(); }
};

/// Throws StructuralError unless eps is strictly decreasing across records.
void validate_records(const ConvergenceReport& report);

/// Least-squares slope of log error_norm against log eps; needs at least 4 records
/// with positive error.
LinearFit fit_records(const std::vector<ConvergenceRecord>& records);

std::string report_to_json(const ConvergenceReport& report);
/// Header "eps,error_norm,norm_value,slope_running"; slope_running on row i is the
/// fit over rows 0..i (empty below two rows). Numbers use %.17g.
std::string report_to_csv(const ConvergenceReport& report);

std::string audit_to_json(const MikhlinAudit& audit);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Both files appear, or neither: temporaries are renamed only after both writes succeed.
void write_report_files(const ConvergenceReport& report, const std::filesystem::path& json_path,
                        const std::filesystem::path& csv_path);

}  // namespace fraclab
