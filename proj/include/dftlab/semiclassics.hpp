#pragma once

// Eigenvalue counting functions ("staircases") for hard-wall problems, their
// classical phase-space approximations and Weyl boundary corrections, plus the
// semiclassical March-Plaskett energy of a 1D potential.

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace dftlab::semiclassics {

/// Potential on (0, L) with hard walls. `values` are sampled on the M interior
/// points x_i = i L / (M + 1), i = 1..M. The classical integrals use the
/// piecewise-linear interpolant through (0, left), the interior samples, and
/// (L, right).
struct Potential1D {
  double length = 1.0;
  std::vector<double> values;
  double left = 0.0;
  double right = 0.0;

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] double spacing() const { return length / static_cast<double>(values.size() + 1); }
  [[nodiscard]] bool is_constant() const;
  void validate() const;

  static Potential1D sample(double length, std::size_t m, const std::function<double(double)>& v);
  static Potential1D constant(double length, std::size_t m, double value = 0.0);
};

enum class SpectrumMethod { analytic, finite_difference };

std::string_view to_string(SpectrumMethod m);

struct Spectrum {
  std::vector<double> eigenvalues;  ///< strictly increasing
  SpectrumMethod method = SpectrumMethod::finite_difference;
};

/// Lowest k levels of -1/2 d^2/dx^2 + v. The finite-difference route uses the
/// three-point Laplacian with Dirichlet ends and Sturm-sequence bisection and
/// requires k <= M/4 (ResolutionError otherwise). The analytic route requires
/// a constant potential c and returns c + i^2 pi^2 / (2 L^2).
Spectrum exact_levels_1d(const Potential1D& p, std::size_t k,
                         SpectrumMethod method = SpectrumMethod::finite_difference);

/// Analytic levels i^2 pi^2 / (2 L^2) of the empty box, i = 1..k.
Spectrum box_levels(double length, std::size_t k);

/// Number of levels <= eps. Throws CoverageError when eps exceeds the largest
/// computed level (the count would be incomplete).
std::size_t staircase_exact(const Spectrum& s, double eps);

/// (sqrt 2 / pi) * integral of sqrt(eps - v(x))_+ over the box.
double staircase_classical_1d(const Potential1D& p, double eps);

struct MarchPlaskettResult {
  double eps_f = 0.0;
  double e_classical = 0.0;    ///< single x-integral form
  double e_nested = 0.0;       ///< eps-quadrature of the classical staircase
};

/// Fermi level from N^cl(eps_f) = N, then the classical energy by both routes.
/// Throws SolverError if the routes disagree beyond 1e-8 relative or the Fermi
/// level cannot be bracketed.
MarchPlaskettResult march_plaskett_energy_1d(const Potential1D& p, double n_electrons);

struct SquareCount {
  double eps = 0.0;
  std::size_t n_exact = 0;
  double n_classical = 0.0;
  double n_weyl2 = 0.0;
};

/// Unit square: levels pi^2 (l^2 + m^2) / 2, area 1, perimeter 4.
SquareCount staircase_square_2d(double eps);

enum class Domain { box1d, square2d };

std::string_view to_string(Domain d);

struct StaircaseEval {
  std::vector<double> energies;
  std::vector<double> n_exact;
  std::vector<double> n_classical;
  std::vector<double> n_weyl2;
  std::vector<double> r_cl;  ///< n_classical - n_exact
  std::vector<double> r_w2;  ///< n_weyl2 - n_exact
};

/// Tabulates staircases and remainders on an ascending grid. For the box the
/// two-term count subtracts the Dirichlet endpoint correction 1/2.
StaircaseEval remainder_scan(Domain domain, const std::vector<double>& eps_grid,
                             double length = 1.0);

}  // namespace dftlab::semiclassics
