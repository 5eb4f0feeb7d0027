#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fraclab/error.hpp"
#include "fraclab/report.hpp"
#include "fraclab/symbols.hpp"
#include "json.hpp"

namespace {

using namespace fraclab;
namespace fs = std::filesystem;

ConvergenceReport sample_report() {
  ConvergenceReport r;
  r.experiment = "theorem_rate";
  r.parameters["alpha"] = "0.5";
  for (int i = 1; i <= 5; ++i) {
    const double eps = std::ldexp(1.0, -i);
    r.records.push_back({eps, 3.0 * std::sqrt(eps), 3.0});
  }
  r.fit = fit_records(r.records);
  r.has_fit = true;
  r.metrics["slope"] = r.fit.slope;
  r.metrics["undefined"] = std::nan("");
  r.verdict = "PASS";
  r.notes.push_back("note");
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("fraclab_report_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::size_t entries(const fs::path& d) {
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(d), fs::directory_iterator{}));
}

TEST(Records, Validation) {
  ConvergenceReport r = sample_report();
  EXPECT_NO_THROW(validate_records(r));
  std::swap(r.records[1], r.records[2]);
  EXPECT_THROW(validate_records(r), StructuralError);
  r = sample_report();
  r.records[3].eps = r.records[2].eps;
  EXPECT_THROW(validate_records(r), StructuralError);
}

TEST(Records, FitNeedsFourPoints) {
  ConvergenceReport r = sample_report();
  EXPECT_NEAR(r.fit.slope, 0.5, 1e-14);
  EXPECT_EQ(r.fit.points, 5u);
  r.records.resize(3);
  EXPECT_THROW(fit_records(r.records), DomainError);
}

TEST(Json, Structure) {
  const nlohmann::json j = nlohmann::json::parse(report_to_json(sample_report()));
  EXPECT_EQ(j["experiment"], "theorem_rate");
  EXPECT_EQ(j["parameters"]["alpha"], "0.5");
  ASSERT_EQ(j["records"].size(), 5u);
  EXPECT_EQ(j["records"][0]["eps"], 0.5);
  EXPECT_NEAR(j["fit"]["slope"].get<double>(), 0.5, 1e-14);
  EXPECT_TRUE(j["metrics"]["undefined"].is_null());
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_EQ(j["expected_negative"], false);
  EXPECT_EQ(j["notes"][0], "note");
}

TEST(Csv, HeaderRunningSlopeAndRoundTrip) {
  const ConvergenceReport r = sample_report();
  std::istringstream in(report_to_csv(r));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "eps,error_norm,norm_value,slope_running");
  std::getline(in, line);
  EXPECT_EQ(line.back(), ',');  // one row: no slope yet
  int rows = 1;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string eps, err, norm, slope;
    std::getline(cells, eps, ',');
    std::getline(cells, err, ',');
    std::getline(cells, norm, ',');
    std::getline(cells, slope, ',');
    EXPECT_EQ(std::stod(eps), r.records[rows - 1].eps);
    EXPECT_EQ(std::stod(err), r.records[rows - 1].error_norm);
    EXPECT_NEAR(std::stod(slope), 0.5, 1e-14);
  }
  EXPECT_EQ(rows, 5);
}

TEST(Audit, JsonStructure) {
  MikhlinOptions o;
  o.n = 1;
  const nlohmann::json j = nlohmann::json::parse(audit_to_json(mikhlin_audit(sine_symbol(), 1, o)));
  EXPECT_EQ(j["symbol"], "sin");
  ASSERT_EQ(j["bounds"].size(), 2u);
  EXPECT_EQ(j["divergence_flagged"], true);
}

TEST(Files, AtomicWrite) {
  const fs::path d = fresh_dir("atomic");
  write_file_atomic(d / "a.txt", "first");
  write_file_atomic(d / "a.txt", "second");
  std::ifstream in(d / "a.txt");
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "second");
  EXPECT_EQ(entries(d), 1u);
  EXPECT_ANY_THROW(write_file_atomic(d / "missing" / "b.txt", "x"));
  EXPECT_EQ(entries(d), 1u);
  fs::remove_all(d);
}

TEST(Files, BothOrNeither) {
  const fs::path d = fresh_dir("pair");
  const ConvergenceReport r = sample_report();
  write_report_files(r, d / "r.json", d / "r.csv");
  EXPECT_TRUE(fs::exists(d / "r.json"));
  EXPECT_TRUE(fs::exists(d / "r.csv"));
  EXPECT_EQ(entries(d), 2u);

  EXPECT_ANY_THROW(write_report_files(r, d / "s.json", d / "missing" / "s.csv"));
  EXPECT_FALSE(fs::exists(d / "s.json"));
  EXPECT_EQ(entries(d), 2u);

  ConvergenceReport bad = r;
  std::swap(bad.records[0], bad.records[1]);
  EXPECT_THROW(write_report_files(bad, d / "t.json", d / "t.csv"), StructuralError);
  EXPECT_EQ(entries(d), 2u);
  fs::remove_all(d);
}

}  // namespace
