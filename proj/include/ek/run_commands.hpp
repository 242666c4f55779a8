#pragma once

#include <string>

#include "ek/config.hpp"

namespace ek {

// Executes a parsed run: writes the manifest, data products and reports under
// cfg.output_dir. Returns the process exit code (0 on success).
int run_command(const RunConfig& cfg);

// Exposed for tests and the instability parameter scan in the acceptance
// harness: scans the cubic law box for a sign change of dP/dc.
struct ScanHit {
  double a = 0.0, b = 0.0, c = 0.0;
  double dPdc = 0.0;
  double rho_m = 0.0;
  bool found = false;
};

ScanHit scan_unstable_cubic(const std::vector<double>& a_grid,
                            const std::vector<double>& b_grid,
                            const std::vector<double>& c_grid, double rho_m_floor = 0.25);

}  // namespace ek
