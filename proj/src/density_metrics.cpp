#include "dftlab/density_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dftlab/errors.hpp"
#include "dftlab/hubbard_dimer.hpp"
#include "dftlab/numerics.hpp"
#include "dftlab/parallel.hpp"

namespace dftlab::metrics {

namespace {

constexpr double kPi = std::numbers::pi;

double weighted_sum(const std::vector<double>& w, const std::vector<double>& n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) s += w[i] * n[i];
  return s;
}

}  // namespace

void DensityComparison::validate() const {
  const std::size_t m = positions.size();
  if (m == 0 || weights.size() != m || n_ref.size() != m || n_test.size() != m)
    throw InvalidInput("DensityComparison: positions, weights and both densities must have the same nonzero length");
  for (std::size_t i = 1; i < m; ++i)
    if (!(positions[i] > positions[i - 1])) throw InvalidInput("DensityComparison: positions must be ascending");
  for (std::size_t i = 0; i < m; ++i)
    if (!std::isfinite(n_ref[i]) || !std::isfinite(n_test[i]) || !std::isfinite(weights[i]))
      throw InvalidInput("DensityComparison: non-finite value");
  const double a = particles_ref();
  const double b = particles_test();
  if (std::abs(a - b) > 1e-6 * std::max(std::abs(a), 1e-300) && !(a == 0.0 && b == 0.0))
    throw InvalidInput("DensityComparison: particle numbers differ (" + std::to_string(a) + " vs " +
                       std::to_string(b) + ")");
}

double DensityComparison::particles_ref() const { return weighted_sum(weights, n_ref); }
double DensityComparison::particles_test() const { return weighted_sum(weights, n_test); }

DensityComparison radial_comparison(std::vector<double> r, std::vector<double> n_ref, std::vector<double> n_test) {
  const std::size_t m = r.size();
  if (m < 2) throw InvalidInput("radial_comparison: need at least two grid points");
  std::vector<double> w(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double h = 0.5 * (r[i + 1] - r[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  for (std::size_t i = 0; i < m; ++i) w[i] *= 4.0 * kPi * r[i] * r[i];
  return custom_comparison(std::move(r), std::move(w), std::move(n_ref), std::move(n_test));
}

DensityComparison dimer_comparison(double dn_ref, double dn_test) {
  for (double dn : {dn_ref, dn_test})
    if (!(std::abs(dn) <= 2.0)) throw InvalidInput("dimer_comparison: |dn| must be <= 2");
  return custom_comparison({1.0, 2.0}, {1.0, 1.0}, {1.0 - dn_ref / 2.0, 1.0 + dn_ref / 2.0},
                           {1.0 - dn_test / 2.0, 1.0 + dn_test / 2.0});
}

DensityComparison custom_comparison(std::vector<double> positions, std::vector<double> weights,
                                    std::vector<double> n_ref, std::vector<double> n_test) {
  DensityComparison c{std::move(positions), std::move(weights), std::move(n_ref), std::move(n_test)};
  c.validate();
  return c;
}

double l2_error(const DensityComparison& c) {
  c.validate();
  double s = 0.0;
  for (std::size_t i = 0; i < c.positions.size(); ++i) {
    const double d = c.n_test[i] - c.n_ref[i];
    s += c.weights[i] * d * d;
  }
  return s;
}

double l1_error(const DensityComparison& c) {
  c.validate();
  double s = 0.0;
  for (std::size_t i = 0; i < c.positions.size(); ++i) s += c.weights[i] * std::abs(c.n_test[i] - c.n_ref[i]);
  return s;
}

double derivative_l2_error(const DensityComparison& c) {
  c.validate();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < c.positions.size(); ++i) {
    const double h = c.positions[i + 1] - c.positions[i];
    const double d = ((c.n_test[i + 1] - c.n_test[i]) - (c.n_ref[i + 1] - c.n_ref[i])) / h;
    s += 0.5 * (c.weights[i] + c.weights[i + 1]) * d * d;
  }
  return s;
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t m = x_.size();
  if (m < 2 || y_.size() != m) throw InvalidInput("Pchip: need matching arrays of at least two points");
  std::vector<double> h(m - 1), delta(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    h[i] = x_[i + 1] - x_[i];
    if (!(h[i] > 0.0)) throw InvalidInput("Pchip: abscissae must be ascending");
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(m, 0.0);
  if (m == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) continue;
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
  // Three-point end slopes, limited to keep monotonicity.
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
  };
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[m - 1] = end_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
}

double Pchip::operator()(double x) const {
  if (x < x_.front() || x > x_.back()) throw InvalidInput("Pchip: point outside the grid");
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  if (i + 1 >= x_.size()) return y_.back();
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
         (t3 - t2) * h * d_[i + 1];
}

CrossingMetric crossing_metric(const DensityComparison& c, const std::vector<double>& points) {
  c.validate();
  CrossingMetric out;
  out.note = kCrossingMetricNote;
  if (points.empty()) return out;
  for (double p : points)
    if (p < c.positions.front() || p > c.positions.back())
      throw InvalidInput("crossing_metric: point " + std::to_string(p) + " outside the grid");
  const Pchip ref(c.positions, c.n_ref);
  const Pchip test(c.positions, c.n_test);
  for (double p : points) {
    const double d = test(p) - ref(p);
    out.value += d * d;
  }
  return out;
}

std::vector<double> find_crossings(const DensityComparison& c) {
  c.validate();
  // Sign changes of the nodal difference, refined on the same interpolants
  // crossing_metric uses, so the metric vanishes there to round-off.
  const Pchip ref(c.positions, c.n_ref);
  const Pchip test(c.positions, c.n_test);
  auto diff = [&](double x) { return test(x) - ref(x); };
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < c.positions.size(); ++i) {
    const double a = c.n_test[i] - c.n_ref[i];
    const double b = c.n_test[i + 1] - c.n_ref[i + 1];
    if (a == 0.0) {
      out.push_back(c.positions[i]);
    } else if (a * b < 0.0) {
      out.push_back(numerics::bisect(diff, c.positions[i], c.positions[i + 1], 0.0));
    }
  }
  if (c.n_test.back() == c.n_ref.back()) out.push_back(c.positions.back());
  return out;
}

double approximate_energy(double t, double u, double dv, double dn) {
  return dimer::ks_kinetic_energy(t, dn) + dimer::hartree_energy(u, dn) + dimer::exchange_energy(u, dn) +
         0.5 * dv * dn;
}

double approximate_density(double t, double u, double dv) {
  if (!(t > 0.0) || !(u >= 0.0) || !std::isfinite(dv)) throw InvalidInput("approximate_density: need t > 0, u >= 0");
  // E~ is strictly convex on (-2, 2); its derivative runs from -inf to +inf.
  auto slope = [&](double x) {
    const double root = std::sqrt(std::max(0.0, 1.0 - 0.25 * x * x));
    const double kin = root > 0.0 ? 0.5 * t * x / root : std::copysign(std::numeric_limits<double>::infinity(), x);
    return kin + 0.25 * u * x + 0.5 * dv;
  };
  return numerics::bisect(slope, -2.0, 2.0, 0.0);
}

ErrorDecomposition dc_decomposition(double t, double u, double dv) {
  const dimer::DimerParams p{t, u, dv, 1.0};
  p.validate();
  const auto s = dimer::solve_ground_state(p);
  ErrorDecomposition d;
  d.e_exact = s.energy;
  d.dn_exact = dimer::occupation_difference(s);
  d.dn_approx = approximate_density(t, u, dv);
  const double e_at_exact = approximate_energy(t, u, dv, d.dn_exact);
  const double e_at_approx = approximate_energy(t, u, dv, d.dn_approx);
  d.de_functional = e_at_exact - d.e_exact;
  d.de_density = e_at_approx - e_at_exact;
  // Summing the two parts keeps the identity exact in floating point.
  d.de_total = d.de_functional + d.de_density;
  return d;
}

std::vector<DecompositionRow> dc_scan(double t, const std::vector<double>& u_values,
                                      const std::vector<double>& dv_values) {
  const std::size_t ncol = dv_values.size();
  return parallel_map<DecompositionRow>(u_values.size() * ncol, [&](std::size_t k) {
    DecompositionRow row;
    row.t = t;
    row.u = u_values[k / ncol];
    row.dv = dv_values[k % ncol];
    row.d = dc_decomposition(t, row.u, row.dv);
    return row;
  });
}

MetricFixture metric_fixture() {
  const auto r = numerics::linspace(0.0, 20.0, 4001);
  std::vector<double> ref(r.size()), osc(r.size()), con(r.size());
  const double zeta = 1.03;
  for (std::size_t i = 0; i < r.size(); ++i) {
    ref[i] = std::exp(-2.0 * r[i]) / kPi;
    osc[i] = ref[i] * (1.0 + 0.02 * std::sin(40.0 * r[i]));
    con[i] = zeta * zeta * zeta * std::exp(-2.0 * zeta * r[i]) / kPi;
  }
  // Match particle numbers under the discrete measure.
  auto probe = radial_comparison(r, ref, ref);
  const double n0 = probe.particles_ref();
  const double n_osc = weighted_sum(probe.weights, osc);
  const double n_con = weighted_sum(probe.weights, con);
  for (double& v : osc) v *= n0 / n_osc;
  for (double& v : con) v *= n0 / n_con;
  return {"hydrogen 1s: 2% oscillation at k = 40 vs exponent contracted by 3%", radial_comparison(r, ref, osc),
          radial_comparison(r, ref, con)};
}

MetricRanking rank_fixture(const MetricFixture& f) {
  MetricRanking m;
  m.l2_oscillatory = l2_error(f.oscillatory);
  m.l2_contracted = l2_error(f.contracted);
  m.dl2_oscillatory = derivative_l2_error(f.oscillatory);
  m.dl2_contracted = derivative_l2_error(f.contracted);
  return m;
}

}  // namespace dftlab::metrics
