#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dftlab::numerics {

/// `count` equally spaced points from lo to hi inclusive; count == 1 gives {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Composite Simpson rule over equally spaced samples. Requires an odd number
/// of samples (>= 3).
double simpson(std::span<const double> f, double h);

/// Composite trapezoid rule over equally spaced samples.
double trapezoid(std::span<const double> f, double h);

struct QuadratureEstimate {
  double value = 0.0;
  double error = 0.0;  // Richardson estimate |S_h - S_2h| / 15
};

/// Simpson with a Richardson error estimate from the every-other-point subgrid.
/// Falls back to a Simpson/trapezoid comparison when (n - 1) is not a multiple
/// of 4.
QuadratureEstimate simpson_with_error(std::span<const double> f, double h);

/// Root of a monotone function on [lo, hi] with f(lo), f(hi) of opposite sign.
/// Iterates until the interval is narrower than x_tol or |f| <= f_tol.
/// Throws SolverError if the endpoints do not bracket a sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, double f_tol = 0.0, int max_iter = 400);

struct Minimum {
  double x = 0.0;
  double f = 0.0;
};

/// Golden-section search for a minimum of a unimodal function on [a, b].
Minimum golden_section(const std::function<double(double)>& f, double a, double b,
                       double x_tol);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::span<double> nodes, std::span<double> weights);

}  // namespace dftlab::numerics
