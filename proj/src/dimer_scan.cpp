#include "dftlab/dimer_scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dftlab/hubbard_dimer.hpp"
#include "dftlab/parallel.hpp"

namespace dftlab::dimer {

ScanPoint conjecture_scan_point(double t, double u, double dv, std::size_t n_lambda,
                                const ConjectureTolerances& tol) {
  const auto curve = adiabatic_connection(t, u, dv, n_lambda);
  const auto convex = convexity_report(curve, tol.convexity);
  const auto dec = decompose_energies(curve, t, u);
  const auto hf = hf_kinetic_correlation({t, u, dv, 1.0});

  ScanPoint pt;
  pt.u_over_t = u / t;
  pt.dv_over_t = dv / t;
  pt.ec = dec.ec;
  pt.tc = dec.tc;
  pt.uc = dec.uc;
  pt.tc_hf = hf.tc_hf;
  pt.convexity_min = convex.min_second_difference;
  pt.convexity_violated = convex.violated;
  pt.monotone = convex.monotone;
  pt.kinetic_bound_violated = dec.tc > std::abs(dec.uc) / 2.0 + tol.kinetic_bound;
  pt.sign_violated = dec.tc < -tol.sign || dec.ec > tol.sign || dec.uc > tol.sign;
  pt.tc_hf_negative = hf.tc_hf < -tol.sign;
  return pt;
}

std::vector<ScanPoint> conjecture_scan(double t, const std::vector<double>& u_over_t,
                                       const std::vector<double>& dv_over_t, std::size_t n_lambda,
                                       const ConjectureTolerances& tol) {
  const std::size_t ncol = dv_over_t.size();
  return parallel_map<ScanPoint>(u_over_t.size() * ncol, [&](std::size_t k) {
    return conjecture_scan_point(t, u_over_t[k / ncol] * t, dv_over_t[k % ncol] * t, n_lambda, tol);
  });
}

ScanSummary summarize(const std::vector<ScanPoint>& points) {
  ScanSummary s;
  s.points = points.size();
  s.min_tc_hf = std::numeric_limits<double>::infinity();
  s.min_convexity = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    s.convexity_violations += p.convexity_violated;
    s.kinetic_bound_violations += p.kinetic_bound_violated;
    s.sign_violations += p.sign_violated;
    s.tc_hf_negative += p.tc_hf_negative;
    s.non_monotone += !p.monotone;
    s.min_tc_hf = std::min(s.min_tc_hf, p.tc_hf);
    s.min_convexity = std::min(s.min_convexity, p.convexity_min);
  }
  return s;
}

}  // namespace dftlab::dimer
