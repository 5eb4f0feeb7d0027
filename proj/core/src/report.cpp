#include "fraclab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fraclab/error.hpp"
#include "json.hpp"

namespace fraclab {

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

std::filesystem::path temp_sibling(const std::filesystem::path& p) {
  return p.parent_path() / (p.filename().string() + ".tmp");
}

void write_plain(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) detail::throw_structural("cannot open '" + path.string() + "' for writing");
  os << content;
  os.close();
  if (!os) detail::throw_structural("write to '" + path.string() + "' failed");
}

}  // namespace

void validate_records(const ConvergenceReport& report) {
  for (std::size_t i = 1; i < report.records.size(); ++i)
    require_structure(report.records[i].eps < report.records[i - 1].eps,
                      "report records must have strictly decreasing eps");
}

LinearFit fit_records(const std::vector<ConvergenceRecord>& records) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : records) {
    if (r.error_norm > 0.0 && r.eps > 0.0) {
      x.push_back(r.eps);
      y.push_back(r.error_norm);
    }
  }
  require_domain(x.size() >= 4, "slope fit needs at least 4 records with positive error");
  return fit_loglog(x, y);
}

std::string report_to_json(const ConvergenceReport& report) {
  nlohmann::ordered_json j;
  j["experiment"] = report.experiment;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.parameters) j["parameters"][k] = v;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records)
    j["records"].push_back({{"eps", finite_or_null(r.eps)},
                            {"error_norm", finite_or_null(r.error_norm)},
                            {"norm_value", finite_or_null(r.norm_value)}});
  if (report.has_fit) {
    j["fit"] = {{"slope", finite_or_null(report.fit.slope)},
                {"slope_stderr", finite_or_null(report.fit.slope_stderr)},
                {"intercept", finite_or_null(report.fit.intercept)},
                {"points", report.fit.points}};
  }
  j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metrics) j["metrics"][k] = finite_or_null(v);
  j["verdict"] = report.verdict;
  j["expected_negative"] = report.expected_negative;
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ConvergenceReport& report) {
  std::string out = "eps,error_norm,norm_value,slope_running\n";
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : report.records) {
    if (r.error_norm > 0.0 && r.eps > 0.0) {
      x.push_back(r.eps);
      y.push_back(r.error_norm);
    }
    std::string slope;
    if (x.size() >= 2) slope = num(fit_loglog(x, y).slope);
    out += num(r.eps) + "," + num(r.error_norm) + "," + num(r.norm_value) + "," + slope + "\n";
  }
  return out;
}

std::string audit_to_json(const MikhlinAudit& audit) {
  nlohmann::ordered_json j;
  j["symbol"] = audit.symbol;
  j["n"] = audit.n;
  j["k_max"] = audit.k_max;
  j["grid"] = {{"r_min", audit.grid.r_min},
               {"r_max", audit.grid.r_max},
               {"points_per_decade", audit.grid.points_per_decade}};
  j["dilations"] = audit.dilations;
  j["bounds"] = nlohmann::ordered_json::array();
  for (const auto& b : audit.bounds)
    j["bounds"].push_back({{"k", b.k},
                           {"sup_bound", finite_or_null(b.sup_bound)},
                           {"argmax", finite_or_null(b.argmax)},
                           {"refinement_delta", finite_or_null(b.refinement_delta)},
                           {"inner_sup", finite_or_null(b.inner_sup)},
                           {"divergent", b.divergent},
                           {"dilation_spread", finite_or_null(b.dilation_spread)},
                           {"grid", j["grid"]}});
  j["divergence_flagged"] = audit.divergence_flagged;
  j["finite"] = audit.finite();
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = temp_sibling(path);
  try {
    write_plain(tmp, content);
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

void write_report_files(const ConvergenceReport& report, const std::filesystem::path& json_path,
                        const std::filesystem::path& csv_path) {
  validate_records(report);
  const auto tj = temp_sibling(json_path);
  const auto tc = temp_sibling(csv_path);
  try {
    write_plain(tj, report_to_json(report));
    write_plain(tc, report_to_csv(report));
    std::filesystem::rename(tj, json_path);
    std::filesystem::rename(tc, csv_path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tj, ec);
    std::filesystem::remove(tc, ec);
    throw;
  }
}

}  // namespace fraclab
