#include "dftlab/lieb_oxford.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dftlab/errors.hpp"
#include "dftlab/parallel.hpp"

namespace dftlab::lieb_oxford {

namespace {

constexpr double kPi = std::numbers::pi;

// Grid spacing in s = ln r; the grid must be uniform in s.
double log_step(const std::vector<double>& r) {
  return std::log(r.back() / r.front()) / static_cast<double>(r.size() - 1);
}

// int f(r) dr = int f r ds by the trapezoid rule in s. The integrands vanish
// like r^3 at small r and decay exponentially at large r, where the rule is
// spectrally accurate.
template <typename Fn>
double radial_integral(const std::vector<double>& r, Fn&& f) {
  const double h = log_step(r);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double w = (i == 0 || i + 1 == r.size()) ? 0.5 : 1.0;
    sum += w * f(i) * r[i];
  }
  return h * sum;
}

// int_R^inf r^2 e^{-k (r - R)} dr
double exponential_tail(double big_r, double k) {
  return big_r * big_r / k + 2.0 * big_r / (k * k) + 2.0 / (k * k * k);
}

double param(const RadialDensity& d, std::string_view name) {
  for (const auto& [k, v] : d.params)
    if (k == name) return v;
  throw InvalidInput("density is missing parameter " + std::string(name));
}

void check_occupation(int n_electrons) {
  if (n_electrons != 1 && n_electrons != 2)
    throw UnsupportedShell("single-orbital density needs 1 or 2 electrons, got " +
                           std::to_string(n_electrons));
}

template <typename Orbital2>
RadialDensity tabulate(Family family, std::vector<std::pair<std::string, double>> params,
                       int n_electrons, double tail_rate, Orbital2&& phi2) {
  check_occupation(n_electrons);
  RadialDensity d;
  d.r = log_grid();
  d.n.resize(d.r.size());
  for (std::size_t i = 0; i < d.r.size(); ++i) d.n[i] = n_electrons * phi2(d.r[i]);
  d.n_electrons = n_electrons;
  d.polarized = n_electrons == 1;
  d.family = family;
  d.params = std::move(params);
  d.tail_rate = tail_rate;
  d.validate();
  return d;
}

double slater_norm2(double zeta, int power) {
  // 1 / (4 pi int r^{2m+2} e^{-2 zeta r} dr)
  return std::pow(2.0 * zeta, 2 * power + 3) / (4.0 * kPi * std::tgamma(2.0 * power + 3.0));
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::hydrogenic_1s: return "hydrogenic-1s";
    case Family::exponential: return "exponential";
    case Family::gaussian: return "gaussian";
    case Family::mixture: return "mixture";
    case Family::grid: return "grid";
    case Family::tf_atom: return "tf-atom";
  }
  return "unknown";
}

std::vector<double> log_grid(double r_min, double r_max, std::size_t count) {
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 4)
    throw InvalidInput("log_grid: need 0 < r_min < r_max and at least 4 points");
  std::vector<double> r(count);
  const double a = std::log(r_min);
  const double h = (std::log(r_max) - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) r[i] = std::exp(a + h * static_cast<double>(i));
  r.back() = r_max;
  return r;
}

void RadialDensity::validate() const {
  if (r.size() < 4 || r.size() != n.size()) throw InvalidInput("RadialDensity: grid and values must match, >= 4 points");
  if (!(r.front() > 0.0)) throw InvalidInput("RadialDensity: grid must start at r > 0");
  const double h = log_step(r);
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double step = std::log(r[i] / r[i - 1]);
    if (!(step > 0.0) || std::abs(step - h) > 1e-8 * h)
      throw InvalidInput("RadialDensity: grid must be ascending and uniform in ln r");
  }
  for (double v : n)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("RadialDensity: density must be finite and >= 0");
  if (!(n_electrons >= 0.0)) throw InvalidInput("RadialDensity: negative electron count");
  const double q = norm();
  if (std::abs(q - n_electrons) > 1e-6 * std::max(n_electrons, 1e-300) && !(n_electrons == 0.0 && q == 0.0))
    throw InvalidInput("RadialDensity: density integrates to " + std::to_string(q) + ", expected " +
                       std::to_string(n_electrons));
}

double RadialDensity::norm() const {
  double q = 4.0 * kPi * radial_integral(r, [&](std::size_t i) { return r[i] * r[i] * n[i]; });
  if (tail_rate > 0.0) q += 4.0 * kPi * n.back() * exponential_tail(r.back(), tail_rate);
  return q;
}

RadialDensity hydrogenic_1s(double zeta, int n_electrons) {
  if (!(zeta > 0.0)) throw InvalidInput("hydrogenic_1s: zeta must be > 0");
  const double c = zeta * zeta * zeta / kPi;
  return tabulate(Family::hydrogenic_1s, {{"zeta", zeta}}, n_electrons, 2.0 * zeta,
                  [&](double r) { return c * std::exp(-2.0 * zeta * r); });
}

RadialDensity exponential(double zeta, int power, int n_electrons) {
  if (!(zeta > 0.0) || power < 0) throw InvalidInput("exponential: need zeta > 0 and power >= 0");
  const double c = slater_norm2(zeta, power);
  return tabulate(Family::exponential, {{"zeta", zeta}, {"power", power}}, n_electrons, 2.0 * zeta,
                  [&](double r) { return c * std::pow(r, 2 * power) * std::exp(-2.0 * zeta * r); });
}

RadialDensity gaussian(double alpha, int n_electrons) {
  if (!(alpha > 0.0)) throw InvalidInput("gaussian: alpha must be > 0");
  const double c = std::pow(2.0 * alpha / kPi, 1.5);
  return tabulate(Family::gaussian, {{"alpha", alpha}}, n_electrons, 0.0,
                  [&](double r) { return c * std::exp(-2.0 * alpha * r * r); });
}

RadialDensity mixture(double zeta_a, double zeta_b, double w, int n_electrons) {
  if (!(zeta_a > 0.0) || !(zeta_b > 0.0) || !(w >= 0.0 && w <= 1.0))
    throw InvalidInput("mixture: need positive exponents and 0 <= w <= 1");
  const double overlap = 8.0 * std::pow(zeta_a * zeta_b, 1.5) / std::pow(zeta_a + zeta_b, 3);
  const double a = (1.0 - w);
  const double norm = std::sqrt(a * a + w * w + 2.0 * a * w * overlap);
  const double ca = a / norm * std::sqrt(zeta_a * zeta_a * zeta_a / kPi);
  const double cb = w / norm * std::sqrt(zeta_b * zeta_b * zeta_b / kPi);
  const double rate = 2.0 * (w > 0.0 ? std::min(zeta_a, zeta_b) : zeta_a);
  return tabulate(Family::mixture, {{"zeta_a", zeta_a}, {"zeta_b", zeta_b}, {"w", w}}, n_electrons, rate,
                  [&](double r) {
                    const double phi = ca * std::exp(-zeta_a * r) + cb * std::exp(-zeta_b * r);
                    return phi * phi;
                  });
}

RadialDensity from_grid(std::vector<double> r, std::vector<double> n, double n_electrons, bool polarized,
                        Family family, double tail_rate) {
  RadialDensity d;
  d.r = std::move(r);
  d.n = std::move(n);
  d.n_electrons = n_electrons;
  d.polarized = polarized;
  d.family = family;
  d.tail_rate = tail_rate;
  d.validate();
  return d;
}

RadialDensity scaled(const RadialDensity& d, double gamma) {
  if (!(gamma > 0.0)) throw InvalidInput("scaled: gamma must be > 0");
  const int ne = static_cast<int>(std::lround(d.n_electrons));
  switch (d.family) {
    case Family::hydrogenic_1s: return hydrogenic_1s(gamma * param(d, "zeta"), ne);
    case Family::exponential:
      return exponential(gamma * param(d, "zeta"), static_cast<int>(param(d, "power")), ne);
    case Family::gaussian: return gaussian(gamma * gamma * param(d, "alpha"), ne);
    case Family::mixture:
      return mixture(gamma * param(d, "zeta_a"), gamma * param(d, "zeta_b"), param(d, "w"), ne);
    case Family::grid:
    case Family::tf_atom: break;
  }
  RadialDensity out = d;
  for (double& x : out.r) x /= gamma;
  for (double& v : out.n) v *= gamma * gamma * gamma;
  out.tail_rate *= gamma;
  return out;
}

double integral_n43(const RadialDensity& d) {
  for (double v : d.n)
    if (!(v >= 0.0)) throw InvalidInput("integral_n43: negative density");
  double sum = radial_integral(d.r, [&](std::size_t i) { return d.r[i] * d.r[i] * std::cbrt(d.n[i]) * d.n[i]; });
  if (d.tail_rate > 0.0)
    sum += std::cbrt(d.n.back()) * d.n.back() * exponential_tail(d.r.back(), 4.0 / 3.0 * d.tail_rate);
  return 4.0 * kPi * sum;
}

double hartree_energy(const RadialDensity& d) {
  // U = 4 pi int r n(r) Q(r) dr with Q the enclosed charge. Q is accumulated in
  // s = ln r with a six-point (quintic) rule on each interval; the first and
  // last intervals, where the integrand is negligible, use the trapezoid.
  const auto& r = d.r;
  const std::size_t m = r.size();
  const double h = log_step(r);
  std::vector<double> g(m);  // dQ/ds
  for (std::size_t i = 0; i < m; ++i) g[i] = 4.0 * kPi * r[i] * r[i] * r[i] * d.n[i];
  std::vector<double> q(m);
  q[0] = g[0] / 3.0;  // density flat inside r[0]
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double step;
    if (i >= 2 && i + 3 < m) {
      step = h / 1440.0 *
             (11.0 * (g[i - 2] + g[i + 3]) - 93.0 * (g[i - 1] + g[i + 2]) + 802.0 * (g[i] + g[i + 1]));
    } else {
      step = 0.5 * h * (g[i] + g[i + 1]);
    }
    q[i + 1] = q[i] + step;
  }
  return 4.0 * kPi * radial_integral(r, [&](std::size_t i) { return r[i] * d.n[i] * q[i]; });
}

double exchange_closed_shell(const RadialDensity& d) {
  const double u = hartree_energy(d);
  if (d.polarized && std::abs(d.n_electrons - 1.0) < 1e-9) return -u;
  if (!d.polarized && std::abs(d.n_electrons - 2.0) < 1e-9) return -0.5 * u;
  throw UnsupportedShell("exchange_closed_shell: needs one polarized or two unpolarized electrons in one orbital");
}

double lda_exchange_constant() { return 0.75 * std::cbrt(3.0 / kPi); }

double lda_exchange(const RadialDensity& d) { return -lda_exchange_constant() * integral_n43(d); }

const std::vector<BoundConstant>& bound_constants() {
  static const std::vector<BoundConstant> table = {
      {0.867, "one-electron bound spin-scaled to two electrons, conjectured for all unpolarized densities",
       Spin::unpolarized, false, false},
      {0.991, "spin-scaled exchange bound for unpolarized densities", Spin::unpolarized, false, false},
      {1.092, "optimal one-electron bound", Spin::polarized, true, false},
      {1.249, "exchange bound for states with negative truncated correlations", Spin::polarized, false, true},
      {1.5765, "current upper estimate of the Lieb-Oxford constant", Spin::any, false, false},
      {1.68, "original Lieb-Oxford constant", Spin::any, false, false},
  };
  return table;
}

namespace {

bool applies(const BoundConstant& c, const RadialDensity& d) {
  if (c.spin == Spin::polarized && !d.polarized) return false;
  if (c.spin == Spin::unpolarized && d.polarized) return false;
  if (c.one_electron_only && std::abs(d.n_electrons - 1.0) > 1e-9) return false;
  return true;
}

BoundCheck evaluate(const BoundConstant& c, double e_x, double i43) {
  BoundCheck k;
  k.constant = c.value;
  k.label = std::string(c.label);
  k.informational = c.informational;
  k.ratio = (e_x == 0.0) ? 0.0 : e_x / (-c.value * i43);
  k.pass = k.ratio <= 1.0;
  return k;
}

BoundReport base_report(const RadialDensity& d, double e_x) {
  BoundReport rep;
  rep.family = d.family;
  rep.params = d.params;
  rep.n_electrons = d.n_electrons;
  rep.polarized = d.polarized;
  rep.i43 = integral_n43(d);
  rep.u = hartree_energy(d);
  rep.e_x = e_x;
  return rep;
}

}  // namespace

BoundReport check_bounds(const RadialDensity& d, double e_x) {
  BoundReport rep = base_report(d, e_x);
  for (const auto& c : bound_constants())
    if (applies(c, d)) rep.checks.push_back(evaluate(c, e_x, rep.i43));
  return rep;
}

BoundReport check_bounds(const RadialDensity& d, double e_x, const std::vector<double>& constants) {
  const auto& table = bound_constants();
  std::vector<const BoundConstant*> picked;
  for (double v : constants) {
    auto it = std::find_if(table.begin(), table.end(), [v](const BoundConstant& c) { return c.value == v; });
    if (it == table.end()) throw InvalidInput("check_bounds: unknown constant " + std::to_string(v));
    if (!applies(*it, d))
      throw ApplicabilityError("check_bounds: constant " + std::to_string(v) + " does not apply to a " +
                               (d.polarized ? "polarized " : "unpolarized ") +
                               std::to_string(d.n_electrons) + "-electron density");
    picked.push_back(&*it);
  }
  BoundReport rep = base_report(d, e_x);
  for (const auto* c : picked) rep.checks.push_back(evaluate(*c, e_x, rep.i43));
  return rep;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"constant", c.constant},
                      {"source_label", c.label},
                      {"ratio", c.ratio},
                      {"pass", c.pass},
                      {"informational", c.informational}});
  return {{"family", std::string(to_string(r.family))},
          {"params", params},
          {"n_electrons", r.n_electrons},
          {"polarized", r.polarized},
          {"i43", r.i43},
          {"u", r.u},
          {"e_x", r.e_x},
          {"checks", checks}};
}

std::vector<RadialDensity> density_suite() {
  std::vector<RadialDensity> out;
  for (int ne : {1, 2}) {
    for (double z : {0.5, 1.0, 2.0, 5.0}) out.push_back(hydrogenic_1s(z, ne));
    for (int p : {1, 2, 3})
      for (double z : {1.0, 3.0}) out.push_back(exponential(z, p, ne));
    for (double a : {0.1, 1.0, 10.0}) out.push_back(gaussian(a, ne));
    for (double w : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      out.push_back(mixture(3.0, 0.5, w, ne));
      out.push_back(mixture(1.0, 0.7, w, ne));
    }
    out.push_back(mixture(8.0, 1.0, 0.5, ne));
  }
  return out;
}

SuiteSummary scan_suite(const std::vector<RadialDensity>& suite) {
  SuiteSummary s;
  s.reports = parallel_map<BoundReport>(suite.size(), [&](std::size_t i) {
    return check_bounds(suite[i], exchange_closed_shell(suite[i]));
  });
  for (const auto& rep : s.reports) {
    if (rep.polarized || std::abs(rep.n_electrons - 2.0) > 1e-9) continue;
    for (const auto& c : rep.checks) {
      if (c.constant != 0.867) continue;
      s.max_conjecture_ratio = std::max(s.max_conjecture_ratio, c.ratio);
      if (!c.pass) ++s.conjecture_violations;
    }
  }
  return s;
}

}  // namespace dftlab::lieb_oxford
