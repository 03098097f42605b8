#pragma once

// Parameter scans over the dimer that monitor the unproven exact conditions:
// convexity of the adiabatic-connection curve, T_C <= |U_C|/2, and the sign of
// the quantum-chemical kinetic correlation T - T_HF.

#include <cstddef>
#include <optional>
#include <vector>

namespace dftlab::dimer {

struct ConjectureTolerances {
  double sign = 1e-10;           ///< slack on T_C >= 0, E_C <= 0, U_C <= 0, T_C^HF >= 0
  double kinetic_bound = 1e-10;  ///< slack on T_C <= |U_C| / 2
  std::optional<double> convexity;  ///< default: 1e-7 * max|U_XC|
};

struct ScanPoint {
  double u_over_t = 0.0;
  double dv_over_t = 0.0;
  double ec = 0.0;
  double tc = 0.0;
  double uc = 0.0;
  double tc_hf = 0.0;
  double convexity_min = 0.0;

  bool convexity_violated = false;
  bool kinetic_bound_violated = false;  ///< T_C > |U_C| / 2
  bool sign_violated = false;           ///< T_C < 0, E_C > 0 or U_C > 0
  bool tc_hf_negative = false;
  bool monotone = true;

  [[nodiscard]] bool any_violation() const {
    return convexity_violated || kinetic_bound_violated || sign_violated || tc_hf_negative;
  }
};

ScanPoint conjecture_scan_point(double t, double u, double dv, std::size_t n_lambda = 101,
                                const ConjectureTolerances& tol = {});

/// Row-major over (u/t, dv/t): u varies slowest.
std::vector<ScanPoint> conjecture_scan(double t, const std::vector<double>& u_over_t,
                                       const std::vector<double>& dv_over_t,
                                       std::size_t n_lambda = 101,
                                       const ConjectureTolerances& tol = {});

struct ScanSummary {
  std::size_t points = 0;
  std::size_t convexity_violations = 0;
  std::size_t kinetic_bound_violations = 0;
  std::size_t sign_violations = 0;
  std::size_t tc_hf_negative = 0;
  std::size_t non_monotone = 0;
  double min_tc_hf = 0.0;
  double min_convexity = 0.0;

  [[nodiscard]] std::size_t total_violations() const {
    return convexity_violations + kinetic_bound_violations + sign_violations + tc_hf_negative;
  }
};

ScanSummary summarize(const std::vector<ScanPoint>& points);

}  // namespace dftlab::dimer
