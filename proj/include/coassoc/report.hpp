#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coassoc/levelsets.hpp"

namespace coassoc {

struct RunConfig {
  double lambda = 1.0;
  uint64_t seed = 20200613ull;
  std::map<std::string, double> tol = {
      {"fd_step", 1e-4}, {"ode_tol", 1e-10}, {"quad_tol", 1e-12}, {"residual_tol", 1e-6}};
  std::string out = ".";
  std::string format = "csv";

  void validate() const;  // ConfigError on nonpositive tolerances etc.
};

// Flat key=value file; '#' starts a comment. Unknown keys are rejected.
void apply_config_file(RunConfig&, const std::string& path);
// Loads COASSOC_CONFIG when set.
RunConfig load_config_env();

// Full 17-significant-digit decimal, round-trip exact at double precision.
std::string fmt17(double v);

// One emitted level curve / trajectory file.
struct CurveFile {
  std::string path;
  std::string header_meta;  // "# case=... lambda=... ..."
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const CurveFile&);
CurveFile read_csv(const std::string& path);

// Re-validates an emitted file against its defining equation.
// Returns the max residual over rows.
double roundtrip_residual(const CurveFile&);

CurveFile curve_to_file(const LevelCurve&, double lambda, const std::string& path);

}  // namespace coassoc
