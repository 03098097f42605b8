#include "dftlab/semiclassics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dftlab/errors.hpp"
#include "dftlab/numerics.hpp"

namespace dftlab::semiclassics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Node values of the piecewise-linear interpolant: walls plus interior samples.
std::vector<double> node_values(const Potential1D& p) {
  std::vector<double> v;
  v.reserve(p.size() + 2);
  v.push_back(p.left);
  v.insert(v.end(), p.values.begin(), p.values.end());
  v.push_back(p.right);
  return v;
}

// Mean over a cell of f(max(s, 0)) where s varies linearly from sa to sb and
// F is an antiderivative of f with F(0) = 0 and f(0) = 0.
template <typename F, typename Fn, typename Fn2>
double cell_mean(double sa, double sb, F&& antideriv, Fn&& f, Fn2&& f2) {
  if (sa <= 0.0 && sb <= 0.0) return 0.0;
  const double m = 0.5 * (sa + sb);
  const double delta = sb - sa;
  if (sa > 0.0 && sb > 0.0 && std::abs(delta) < 1e-3 * m) {
    return f(m) + f2(m) * delta * delta / 24.0;
  }
  return (antideriv(std::max(sb, 0.0)) - antideriv(std::max(sa, 0.0))) / delta;
}

// Integral over the box of sqrt(eps - v)_+ for the piecewise-linear potential.
double root_integral(const std::vector<double>& nodes, double h, double eps) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    sum += cell_mean(
        eps - nodes[i], eps - nodes[i + 1],
        [](double s) { return 2.0 / 3.0 * s * std::sqrt(s); },
        [](double s) { return std::sqrt(s); },
        [](double s) { return -0.25 / (s * std::sqrt(s)); });
  }
  return h * sum;
}

double classical_count(const std::vector<double>& nodes, double h, double eps) {
  return kSqrt2 / kPi * root_integral(nodes, h, eps);
}

std::size_t sturm_count(const std::vector<double>& diag, double off, double x) {
  std::size_t neg = 0;
  double q = 1.0;
  const double off2 = off * off;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    q = diag[i] - x - (i == 0 ? 0.0 : off2 / q);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++neg;
  }
  return neg;
}

}  // namespace

bool Potential1D::is_constant() const {
  const double c = values.empty() ? left : values.front();
  if (left != c || right != c) return false;
  return std::all_of(values.begin(), values.end(), [c](double v) { return v == c; });
}

void Potential1D::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidInput("Potential1D: length must be > 0");
  if (values.size() < 3) throw InvalidInput("Potential1D: need at least 3 interior points");
  if (!std::isfinite(left) || !std::isfinite(right)) throw InvalidInput("Potential1D: non-finite wall value");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidInput("Potential1D: non-finite potential value");
}

Potential1D Potential1D::sample(double length, std::size_t m, const std::function<double(double)>& v) {
  Potential1D p;
  p.length = length;
  p.values.resize(m);
  const double h = length / static_cast<double>(m + 1);
  for (std::size_t i = 0; i < m; ++i) p.values[i] = v(h * static_cast<double>(i + 1));
  p.left = v(0.0);
  p.right = v(length);
  p.validate();
  return p;
}

Potential1D Potential1D::constant(double length, std::size_t m, double value) {
  return sample(length, m, [value](double) { return value; });
}

std::string_view to_string(SpectrumMethod m) {
  return m == SpectrumMethod::analytic ? "analytic" : "finite-difference";
}

std::string_view to_string(Domain d) { return d == Domain::box1d ? "box1d" : "square2d"; }

Spectrum box_levels(double length, std::size_t k) {
  if (!(length > 0.0)) throw InvalidInput("box_levels: length must be > 0");
  Spectrum s;
  s.method = SpectrumMethod::analytic;
  s.eigenvalues.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double n = static_cast<double>(i + 1);
    s.eigenvalues[i] = n * n * kPi * kPi / (2.0 * length * length);
  }
  return s;
}

Spectrum exact_levels_1d(const Potential1D& p, std::size_t k, SpectrumMethod method) {
  p.validate();
  if (k == 0) throw InvalidInput("exact_levels_1d: need k >= 1");
  if (method == SpectrumMethod::analytic) {
    if (!p.is_constant()) throw InvalidInput("exact_levels_1d: analytic levels need a constant potential");
    Spectrum s = box_levels(p.length, k);
    for (double& e : s.eigenvalues) e += p.left;
    return s;
  }
  if (k > p.size() / 4)
    throw ResolutionError("exact_levels_1d: k = " + std::to_string(k) + " exceeds M/4 for M = " +
                          std::to_string(p.size()));

  const double h = p.spacing();
  const double kinetic = 1.0 / (h * h);
  const double off = -0.5 * kinetic;
  std::vector<double> diag(p.values.size());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = kinetic + p.values[i];
  const auto [mn, mx] = std::minmax_element(diag.begin(), diag.end());
  const double lo0 = *mn - 2.0 * std::abs(off);
  const double hi0 = *mx + 2.0 * std::abs(off);

  Spectrum s;
  s.method = SpectrumMethod::finite_difference;
  s.eigenvalues.resize(k);
  double lo = lo0;
  for (std::size_t j = 0; j < k; ++j) {
    // Smallest x with count(x) >= j + 1.
    double a = lo;
    double b = hi0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      if (sturm_count(diag, off, mid) >= j + 1) {
        b = mid;
      } else {
        a = mid;
      }
    }
    s.eigenvalues[j] = 0.5 * (a + b);
    lo = a;
  }
  return s;
}

std::size_t staircase_exact(const Spectrum& s, double eps) {
  if (s.eigenvalues.empty()) throw CoverageError("staircase_exact: empty spectrum");
  if (eps > s.eigenvalues.back())
    throw CoverageError("staircase_exact: eps above the largest computed level");
  return static_cast<std::size_t>(
      std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), eps) - s.eigenvalues.begin());
}

double staircase_classical_1d(const Potential1D& p, double eps) {
  p.validate();
  return classical_count(node_values(p), p.spacing(), eps);
}

MarchPlaskettResult march_plaskett_energy_1d(const Potential1D& p, double n_electrons) {
  p.validate();
  if (!(n_electrons >= 1.0)) throw InvalidInput("march_plaskett_energy_1d: need n_electrons >= 1");
  const auto nodes = node_values(p);
  const double h = p.spacing();
  const double vmin = *std::min_element(nodes.begin(), nodes.end());
  auto count = [&](double e) { return classical_count(nodes, h, e); };

  double width = 1.0;
  int doublings = 0;
  while (count(vmin + width) < n_electrons) {
    if (++doublings > 200) throw SolverError("march_plaskett_energy_1d: Fermi level bracket failed");
    width *= 2.0;
  }
  double a = vmin;
  double b = vmin + width;
  while (b - a > 1e-15 * std::max(1.0, std::abs(b))) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    (count(mid) < n_electrons ? a : b) = mid;
  }
  MarchPlaskettResult r;
  r.eps_f = 0.5 * (a + b);
  const double ef = r.eps_f;

  // Route 1: E = sqrt(2)/(3 pi) * integral of (eps_f + 2 v) sqrt(eps_f - v)_+
  //            = sqrt(2)/(3 pi) * integral of (3 eps_f - 2 s) sqrt(s), s = eps_f - v.
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    sum += cell_mean(
        ef - nodes[i], ef - nodes[i + 1],
        [ef](double s) { return 2.0 * ef * s * std::sqrt(s) - 0.8 * s * s * std::sqrt(s); },
        [ef](double s) { return (3.0 * ef - 2.0 * s) * std::sqrt(s); },
        [ef](double s) { return -0.75 * ef / (s * std::sqrt(s)) - 1.5 / std::sqrt(s); });
  }
  r.e_classical = kSqrt2 / (3.0 * kPi) * h * sum;

  // Route 2: integrate eps g(eps) by parts, E = eps_f N(eps_f) - int N(eps) deps,
  // with Gauss-Legendre in w = sqrt(eps - e_k) between sorted node values.
  std::vector<double> breaks;
  breaks.push_back(vmin);
  std::vector<double> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted) {
    if (v >= ef) break;
    if (v - breaks.back() > 1e-13 * std::max(1.0, std::abs(v))) breaks.push_back(v);
  }
  breaks.push_back(ef);

  constexpr int order = 24;
  std::array<double, order> gx{};
  std::array<double, order> gw{};
  numerics::gauss_legendre(order, gx, gw);
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double e0 = breaks[k];
    const double wmax = std::sqrt(breaks[k + 1] - e0);
    for (int q = 0; q < order; ++q) {
      const double w = 0.5 * wmax * (gx[q] + 1.0);
      integral += 0.5 * wmax * gw[q] * 2.0 * w * count(e0 + w * w);
    }
  }
  r.e_nested = ef * count(ef) - integral;

  const double scale = std::max({std::abs(r.e_classical), std::abs(ef) * n_electrons, 1e-300});
  if (std::abs(r.e_classical - r.e_nested) > 1e-8 * scale)
    throw InternalConsistencyError("march_plaskett_energy_1d: energy routes disagree (" +
                      std::to_string(r.e_classical) + " vs " + std::to_string(r.e_nested) + ")");
  return r;
}

SquareCount staircase_square_2d(double eps) {
  SquareCount c;
  c.eps = eps;
  if (eps > 0.0) {
    const double r2 = 2.0 * eps / (kPi * kPi);
    const auto lmax = static_cast<long long>(std::floor(std::sqrt(r2)));
    for (long long l = 1; l <= lmax; ++l) {
      const double rest = r2 - static_cast<double>(l * l);
      if (rest < 1.0) break;
      auto m = static_cast<long long>(std::floor(std::sqrt(rest)));
      while (static_cast<double>((m + 1) * (m + 1)) <= rest) ++m;
      while (m > 0 && static_cast<double>(m * m) > rest) --m;
      c.n_exact += static_cast<std::size_t>(m);
    }
  }
  constexpr double area = 1.0;
  constexpr double perimeter = 4.0;
  c.n_classical = area * eps / (2.0 * kPi);
  c.n_weyl2 = c.n_classical - perimeter * std::sqrt(std::max(eps, 0.0)) / (std::sqrt(8.0) * kPi);
  return c;
}

StaircaseEval remainder_scan(Domain domain, const std::vector<double>& eps_grid, double length) {
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (eps_grid[i] < eps_grid[i - 1]) throw InvalidInput("remainder_scan: energy grid must be ascending");

  StaircaseEval out;
  out.energies = eps_grid;
  const std::size_t n = eps_grid.size();
  out.n_exact.resize(n);
  out.n_classical.resize(n);
  out.n_weyl2.resize(n);
  out.r_cl.resize(n);
  out.r_w2.resize(n);

  if (domain == Domain::box1d) {
    const double emax = eps_grid.empty() ? 0.0 : std::max(eps_grid.back(), 0.0);
    const auto kmax = static_cast<std::size_t>(length * std::sqrt(2.0 * emax) / kPi) + 2;
    const Spectrum levels = box_levels(length, kmax);
    for (std::size_t i = 0; i < n; ++i) {
      const double e = eps_grid[i];
      out.n_exact[i] = static_cast<double>(staircase_exact(levels, e));
      out.n_classical[i] = e > 0.0 ? length * kSqrt2 * std::sqrt(e) / kPi : 0.0;
      out.n_weyl2[i] = out.n_classical[i] - 0.5;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = staircase_square_2d(eps_grid[i]);
      out.n_exact[i] = static_cast<double>(c.n_exact);
      out.n_classical[i] = c.n_classical;
      out.n_weyl2[i] = c.n_weyl2;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.r_cl[i] = out.n_classical[i] - out.n_exact[i];
    out.r_w2[i] = out.n_weyl2[i] - out.n_exact[i];
  }
  return out;
}

}  // namespace dftlab::semiclassics
