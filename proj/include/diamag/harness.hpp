#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "diamag/dyson.hpp"
#include "diamag/thermo.hpp"

namespace diamag {

inline constexpr const char* kVersion = "0.1.0";

struct StudyConfig {
  std::vector<double> L_list{4.0, 6.0, 8.0, 12.0};
  double spacing = 0.125;
  int longitudinal_modes = 0;  // 0 selects enough modes for the requested beta
  GasParams gas{1.0, 1.0, 0.5, 1};
  std::vector<int> orders{0, 1};
  double fd_step = 0.02;
  QuadratureSpec quadrature;
  std::uint64_t seed = 1;
  int workers = 1;
  bool timing = false;
  std::string output;
  std::string cache_dir;
};

struct ConvergenceRow {
  double L = 0.0;
  int N = 0;
  int M = 0;
  double P_L = 0.0, P_inf = 0.0, dP = 0.0;
  std::vector<int> orders;  // n >= 1
  std::vector<double> chi_L, chi_inf, dchi, chi_fd_error;
  double wall_time = 0.0;
};

struct RateFit {
  int order = 0;
  double slope = 0.0;
  double std_error = 0.0;
};

struct StudyResult {
  std::vector<ConvergenceRow> rows;
  std::vector<RateFit> fits;
};

struct SuiteReport {
  std::string name;
  std::string status;  // pass, fail, skipped
  double max_deviation = 0.0;
  std::int64_t samples = 0;
  std::string detail;
};

struct BatteryReport {
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
  std::vector<SuiteReport> suites;

  bool passed() const;
  std::string to_json() const;
};

struct BatteryOptions {
  std::uint64_t seed = 1;
  std::int64_t budget = 20000;
  int workers = 1;
  // Debug hook: flips a sign inside the named suite so that it must fail.
  std::string corrupt_suite;
};

namespace harness {

using ConfigMap = std::map<std::string, std::string>;

// Flat key=value lines (# comments) or a JSON object, detected from the first non-blank character.
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::filesystem::path& file);
std::string canonical_config(const ConfigMap& m);
std::uint64_t config_hash(const ConfigMap& m);

std::vector<double> parse_real_list(const std::string& s);
std::vector<int> parse_int_list(const std::string& s);

StudyConfig study_config_from(const ConfigMap& m, StudyConfig base = {});
ConfigMap to_config_map(const StudyConfig& c);

std::string fmt17(double v);
std::string provenance_line(std::uint64_t seed, std::uint64_t hash);

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::uint64_t seed, std::uint64_t hash);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);
  void comment(const std::string& text);

 private:
  std::ostream& os_;
  std::size_t ncols_ = 0;
};

void validate(const StudyConfig& c);
int grid_for(double side, double spacing);
RateFit fit_rate(int order, const std::vector<double>& L, const std::vector<double>& d);

std::vector<std::string> study_columns(const StudyConfig& c);
std::vector<std::string> study_cells(const StudyConfig& c, const ConvergenceRow& r);

StudyResult run_convergence_study(const StudyConfig& c, std::ostream* csv = nullptr);

BatteryReport run_invariant_battery(const BatteryOptions& opt);

}  // namespace harness
}  // namespace diamag
