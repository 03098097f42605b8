#include "dftlab/hubbard_dimer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dftlab/errors.hpp"
#include "dftlab/numerics.hpp"

namespace dftlab::dimer {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Characteristic polynomial det(H - E) of
//   [[a, 0, -s], [0, b, -s], [-s, -s, d]]
// and its derivative.
struct CharPoly {
  double a, b, d, s2;
  [[nodiscard]] double value(double e) const {
    return (a - e) * (b - e) * (d - e) - s2 * (a - e) - s2 * (b - e);
  }
  [[nodiscard]] double derivative(double e) const {
    return -(b - e) * (d - e) - (a - e) * (d - e) - (a - e) * (b - e) + 2.0 * s2;
  }
};

// Lowest eigenvalue of a real symmetric 3x3 matrix by the trigonometric form
// of the cubic roots.
double lowest_eigenvalue(double a, double b, double d, double s) {
  const double q = (a + b + d) / 3.0;
  const double p1 = 2.0 * s * s;
  const double p2 = (a - q) * (a - q) + (b - q) * (b - q) + (d - q) * (d - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) return q;
  const double ba = (a - q) / p;
  const double bb = (b - q) / p;
  const double bd = (d - q) / p;
  const double bs = -s / p;
  // det of [[ba, 0, bs], [0, bb, bs], [bs, bs, bd]]
  const double det = ba * (bb * bd - bs * bs) - bb * bs * bs;
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
}

}  // namespace

void DimerParams::validate() const {
  if (!std::isfinite(t) || !std::isfinite(u) || !std::isfinite(dv) || !std::isfinite(lambda))
    throw InvalidInput("dimer parameters must be finite");
  if (t <= 0.0) throw InvalidInput("dimer hopping t must be > 0");
  if (u < 0.0) throw InvalidInput("dimer interaction u must be >= 0");
  if (lambda < 0.0) throw InvalidInput("dimer coupling lambda must be >= 0");
}

SingletState solve_ground_state(const DimerParams& p) {
  p.validate();
  const double a = p.coupling() + 2.0 * p.v1();
  const double b = p.coupling() + 2.0 * p.v2();
  const double d = p.v1() + p.v2();
  const double s = kSqrt2 * p.t;

  const CharPoly poly{a, b, d, s * s};
  double e = lowest_eigenvalue(a, b, d, s);
  const double dp = poly.derivative(e);
  if (dp != 0.0) {
    const double polished = e - poly.value(e) / dp;
    // The coupling s > 0 keeps the lowest root strictly below min(a, b, d).
    if (std::isfinite(polished) && polished < std::min({a, b, d})) e = polished;
  }

  // Rows 1 and 2 of (H - E) c = 0 with c3 = 1.
  SingletState st;
  st.energy = e;
  double c1 = s / (a - e);
  double c2 = s / (b - e);
  double c3 = 1.0;
  const double norm = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
  st.c = {c1 / norm, c2 / norm, c3 / norm};
  return st;
}

double occupation_difference(const SingletState& s) {
  return 2.0 * (s.c[1] * s.c[1] - s.c[0] * s.c[0]);
}

double kinetic_energy(const SingletState& s, double t) {
  return -2.0 * kSqrt2 * t * s.c[2] * (s.c[0] + s.c[1]);
}

double hartree_energy(double u, double dn) { return u * (1.0 + 0.25 * dn * dn); }

double exchange_energy(double u, double dn) { return -0.5 * hartree_energy(u, dn); }

double ks_kinetic_energy(double t, double dn) {
  return -2.0 * t * std::sqrt(std::max(0.0, 1.0 - 0.25 * dn * dn));
}

ConstrainedSearchResult constrained_search(double dn_target, double t, double u, double lambda,
                                           const InversionOptions& opts) {
  if (!std::isfinite(dn_target) || std::abs(dn_target) >= 2.0 - 1e-9)
    throw InvalidInput("constrained_search: |dn| must be < 2");
  DimerParams p{t, u, 0.0, lambda};
  p.validate();

  auto dn_at = [&](double dv) {
    p.dv = dv;
    return occupation_difference(solve_ground_state(p));
  };

  // dn is strictly decreasing in dv.
  const double start = 10.0 * std::max({t, u, 1.0});
  double lo = -start;
  double hi = start;
  int doublings = 0;
  while (dn_at(lo) < dn_target) {
    if (++doublings > opts.max_doublings)
      throw InversionFailure("constrained_search: could not bracket dn = " + std::to_string(dn_target));
    lo *= 2.0;
  }
  doublings = 0;
  while (dn_at(hi) > dn_target) {
    if (++doublings > opts.max_doublings)
      throw InversionFailure("constrained_search: could not bracket dn = " + std::to_string(dn_target));
    hi *= 2.0;
  }

  // Bisect past tol_dn down to the resolution of the interval so that nearby
  // targets invert to smoothly varying potentials.
  double best_dv = 0.5 * (lo + hi);
  double best_err = std::abs(dn_at(best_dv) - dn_target);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double dn = dn_at(mid);
    const double err = std::abs(dn - dn_target);
    if (err < best_err) {
      best_err = err;
      best_dv = mid;
    }
    if (err == 0.0) break;
    if (dn > dn_target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= opts.min_interval * std::max(1.0, std::abs(mid))) break;
  }
  if (best_err > opts.tol_dn)
    throw InversionFailure("constrained_search: bisection interval collapsed at |dn error| = " +
                           std::to_string(best_err));

  p.dv = best_dv;
  ConstrainedSearchResult res;
  res.dv = best_dv;
  res.state = solve_ground_state(p);
  res.f_lambda = kinetic_energy(res.state, t) + lambda * u * res.state.double_occupancy();
  return res;
}

ACCurve adiabatic_connection(double t, double u, double dv_physical, std::size_t n_lambda_points,
                             const InversionOptions& opts) {
  if (n_lambda_points < 3) throw InvalidInput("adiabatic_connection: need at least 3 lambda points");
  const SingletState physical = solve_ground_state({t, u, dv_physical, 1.0});

  ACCurve curve;
  curve.dn_target = occupation_difference(physical);
  curve.ex = exchange_energy(u, curve.dn_target);
  const double uh = hartree_energy(u, curve.dn_target);
  const double step = 1.0 / static_cast<double>(n_lambda_points - 1);
  for (std::size_t i = 0; i < n_lambda_points; ++i) {
    const double lambda = i + 1 == n_lambda_points ? 1.0 : static_cast<double>(i) * step;
    const auto cs = constrained_search(curve.dn_target, t, u, lambda, opts);
    curve.lambdas.push_back(lambda);
    curve.uxc.push_back(u * cs.state.double_occupancy() - uh);
    curve.dvs.push_back(cs.dv);
    curve.kinetic.push_back(kinetic_energy(cs.state, t));
  }
  return curve;
}

ConvexityReport convexity_report(const ACCurve& curve, std::optional<double> tolerance) {
  const auto& y = curve.uxc;
  if (y.size() < 5) throw InvalidInput("convexity_report: need at least 5 points");
  ConvexityReport rep;
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  rep.tolerance = tolerance.value_or(1e-7 * scale);
  rep.min_second_difference = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    const double d2 = y[i - 1] - 2.0 * y[i] + y[i + 1];
    if (d2 < rep.min_second_difference) {
      rep.min_second_difference = d2;
      rep.argmin = i;
    }
  }
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[i - 1] + rep.tolerance) rep.monotone = false;
  rep.violated = rep.min_second_difference < -rep.tolerance;
  return rep;
}

namespace {

bool is_uniform(const std::vector<double>& x) {
  if (x.size() < 2) return false;
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-12 * std::max(1.0, std::abs(h))) return false;
  return true;
}

numerics::QuadratureEstimate integrate_curve(const std::vector<double>& x,
                                             const std::vector<double>& y) {
  if (is_uniform(x) && x.size() % 2 == 1) {
    const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    return numerics::simpson_with_error(y, h);
  }
  double trap = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) trap += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  double coarse = 0.0;
  std::size_t prev = 0;
  for (std::size_t i = 2; i < x.size(); i += 2) {
    coarse += 0.5 * (x[i] - x[prev]) * (y[i] + y[prev]);
    prev = i;
  }
  if (prev + 1 < x.size()) coarse += 0.5 * (x.back() - x[prev]) * (y.back() + y[prev]);
  return {trap, std::abs(trap - coarse) / 3.0};
}

}  // namespace

EnergyDecomposition decompose_energies(const ACCurve& curve, double t, double u) {
  if (curve.lambdas.size() != curve.uxc.size() || curve.lambdas.size() < 3)
    throw InvalidInput("decompose_energies: malformed curve");
  if (curve.lambdas.front() != 0.0 || curve.lambdas.back() != 1.0)
    throw InvalidInput("decompose_energies: lambda grid must span [0, 1]");

  EnergyDecomposition dec;
  dec.ex = curve.ex;
  std::vector<double> uc_lambda(curve.uxc.size());
  for (std::size_t i = 0; i < uc_lambda.size(); ++i) uc_lambda[i] = curve.uxc[i] - curve.ex;
  const auto q = integrate_curve(curve.lambdas, uc_lambda);
  dec.ec = q.value;
  dec.quadrature_error = q.error;
  dec.uc = uc_lambda.back();
  dec.tc = dec.ec - dec.uc;
  dec.ts = ks_kinetic_energy(t, curve.dn_target);

  if (curve.kinetic.size() == curve.uxc.size()) {
    dec.t_full = curve.kinetic.back();
  } else {
    dec.t_full = kinetic_energy(constrained_search(curve.dn_target, t, u, 1.0).state, t);
  }
  dec.tc_direct = dec.t_full - dec.ts;

  const double budget = std::max(10.0 * q.error, 1e-9 * (1.0 + u + t));
  if (std::abs(dec.tc - dec.tc_direct) > budget)
    throw InternalConsistencyError("decompose_energies: T_C from the curve (" + std::to_string(dec.tc) +
                                   ") disagrees with T - T_S (" + std::to_string(dec.tc_direct) + ")");
  return dec;
}

double hf_energy(const DimerParams& p, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double c2 = c * c;
  const double s2 = s * s;
  return 2.0 * (p.v1() * c2 + p.v2() * s2) - 2.0 * p.t * std::sin(2.0 * theta) +
         p.coupling() * (c2 * c2 + s2 * s2);
}

HFDimerSolution solve_hf(const DimerParams& p) {
  p.validate();
  constexpr double half_pi = std::numbers::pi / 2.0;
  constexpr int n_scan = 2000;

  // Coarse scan guards against a second local minimum, then golden-section
  // inside the best cell and Newton on dE/dtheta.
  int best = 0;
  double best_e = hf_energy(p, 0.0);
  for (int i = 1; i <= n_scan; ++i) {
    const double e = hf_energy(p, half_pi * i / n_scan);
    if (e < best_e) {
      best_e = e;
      best = i;
    }
  }
  const double a = half_pi * std::max(0, best - 1) / n_scan;
  const double b = half_pi * std::min(n_scan, best + 1) / n_scan;
  auto f = [&](double th) { return hf_energy(p, th); };
  double theta = numerics::golden_section(f, a, b, 1e-12).x;

  const double dv = p.dv;
  const double g = p.coupling();
  auto slope = [&](double th) {
    return 2.0 * dv * std::sin(2.0 * th) - 4.0 * p.t * std::cos(2.0 * th) - g * std::sin(4.0 * th);
  };
  auto curvature = [&](double th) {
    return 4.0 * dv * std::cos(2.0 * th) + 8.0 * p.t * std::sin(2.0 * th) - 4.0 * g * std::cos(4.0 * th);
  };
  for (int it = 0; it < 8; ++it) {
    const double d1 = slope(theta);
    const double d2 = curvature(theta);
    if (d2 <= 0.0 || d1 == 0.0) break;
    const double next = std::clamp(theta - d1 / d2, a, b);
    if (std::abs(slope(next)) >= std::abs(d1)) break;
    theta = next;
  }

  HFDimerSolution sol;
  sol.theta = theta;
  sol.e_hf = hf_energy(p, theta);
  sol.t_hf = -2.0 * p.t * std::sin(2.0 * theta);
  return sol;
}

HFKineticCorrelation hf_kinetic_correlation(const DimerParams& p) {
  HFKineticCorrelation r;
  r.t_full = kinetic_energy(solve_ground_state(p), p.t);
  r.t_hf = solve_hf(p).t_hf;
  r.tc_hf = r.t_full - r.t_hf;
  return r;
}

}  // namespace dftlab::dimer
