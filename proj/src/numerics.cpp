#include "dftlab/numerics.hpp"

#include <numbers>
#include <vector>

#include "dftlab/errors.hpp"

namespace dftlab::numerics {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> x(count);
  if (count == 1) {
    x[0] = lo;
    return x;
  }
  for (std::size_t i = 0; i < count; ++i)
    x[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return x;
}

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3 || n % 2 == 0) throw InvalidInput("simpson: need an odd number (>= 3) of samples");
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) (i % 2 ? odd : even) += f[i];
  return h / 3.0 * (f[0] + f[n - 1] + 4.0 * odd + 2.0 * even);
}

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return h * s;
}

QuadratureEstimate simpson_with_error(std::span<const double> f, double h) {
  QuadratureEstimate q;
  q.value = simpson(f, h);
  const std::size_t n = f.size();
  if ((n - 1) % 4 == 0 && n >= 5) {
    std::vector<double> coarse;
    coarse.reserve(n / 2 + 1);
    for (std::size_t i = 0; i < n; i += 2) coarse.push_back(f[i]);
    q.error = std::abs(q.value - simpson(coarse, 2.0 * h)) / 15.0;
  } else {
    q.error = std::abs(q.value - trapezoid(f, h));
  }
  return q;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol,
              double f_tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) throw SolverError("bisect: endpoints do not bracket a root");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= f_tol || hi - lo <= x_tol || mid == lo || mid == hi) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Minimum golden_section(const std::function<double(double)>& f, double a, double b, double x_tol) {
  const double invphi = std::numbers::phi - 1.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    if (c >= d) break;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

void gauss_legendre(int n, std::span<double> nodes, std::span<double> weights) {
  // Newton iteration on P_n from the Chebyshev initial guess.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace dftlab::numerics
