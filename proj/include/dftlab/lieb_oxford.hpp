#pragma once

// Spherical densities, their n^{4/3} integrals, Hartree and exchange energies,
// and the Lieb-Oxford-type lower bounds E_X >= -C * int n^{4/3}.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dftlab::lieb_oxford {

enum class Family { hydrogenic_1s, exponential, gaussian, mixture, grid, tf_atom };

std::string_view to_string(Family f);

/// Logarithmic grid, uniform in ln r.
std::vector<double> log_grid(double r_min = 1e-6, double r_max = 60.0, std::size_t count = 2000);

struct RadialDensity {
  std::vector<double> r;  ///< ascending, r[0] > 0
  std::vector<double> n;
  double n_electrons = 0.0;
  bool polarized = false;
  Family family = Family::grid;
  std::vector<std::pair<std::string, double>> params;
  /// Decay rate kappa of an exponential tail n ~ e^{-kappa r}; 0 for none.
  double tail_rate = 0.0;

  /// Throws InvalidInput on a bad grid, negative values or a normalization
  /// off by more than 1e-6 relative.
  void validate() const;
  /// 4 pi int r^2 n dr, tail included.
  [[nodiscard]] double norm() const;
};

// Single-orbital analytic families. One electron is spin-polarized, two
// electrons doubly occupy the orbital.

/// n = N zeta^3 / pi * exp(-2 zeta r).
RadialDensity hydrogenic_1s(double zeta, int n_electrons);
/// Slater orbital r^power * exp(-zeta r).
RadialDensity exponential(double zeta, int power, int n_electrons);
/// Orbital exp(-alpha r^2).
RadialDensity gaussian(double alpha, int n_electrons);
/// Orbital (1 - w) phi_a + w phi_b of normalized 1s orbitals with exponents
/// zeta_a and zeta_b (a contracted core mixed with a diffuse tail).
RadialDensity mixture(double zeta_a, double zeta_b, double w, int n_electrons);
/// Tabulated density; validated against n_electrons.
RadialDensity from_grid(std::vector<double> r, std::vector<double> n, double n_electrons,
                        bool polarized, Family family = Family::grid, double tail_rate = 0.0);

/// n_gamma(r) = gamma^3 n(gamma r). Analytic families are rebuilt on the
/// default grid with scaled exponents; tabulated ones have their grid rescaled.
RadialDensity scaled(const RadialDensity& d, double gamma);

double integral_n43(const RadialDensity& d);
double hartree_energy(const RadialDensity& d);
/// -U for one polarized electron, -U/2 for a doubly occupied orbital.
/// Anything else throws UnsupportedShell.
double exchange_closed_shell(const RadialDensity& d);

/// (3/4)(3/pi)^{1/3}
double lda_exchange_constant();
double lda_exchange(const RadialDensity& d);

enum class Spin { polarized, unpolarized, any };

struct BoundConstant {
  double value;
  std::string_view label;
  Spin spin;
  bool one_electron_only;
  bool informational;
};

/// All constants, ascending.
const std::vector<BoundConstant>& bound_constants();

struct BoundCheck {
  double constant = 0.0;
  std::string label;
  double ratio = 0.0;  ///< e_x / (-C * i43); the bound holds when ratio <= 1
  bool pass = false;
  bool informational = false;
};

struct BoundReport {
  Family family = Family::grid;
  std::vector<std::pair<std::string, double>> params;
  double n_electrons = 0.0;
  bool polarized = false;
  double i43 = 0.0;
  double u = 0.0;
  double e_x = 0.0;
  std::vector<BoundCheck> checks;
};

/// Checks every constant applicable to the density's spin and electron count.
BoundReport check_bounds(const RadialDensity& d, double e_x);
/// Checks the selected constants; one that does not apply to this density
/// throws ApplicabilityError.
BoundReport check_bounds(const RadialDensity& d, double e_x, const std::vector<double>& constants);

nlohmann::json to_json(const BoundReport& r);

/// Analytic single-orbital suite: hydrogenic, Slater, Gaussian and mixture
/// densities, each with one polarized and two unpolarized electrons.
std::vector<RadialDensity> density_suite();

struct SuiteSummary {
  std::vector<BoundReport> reports;
  std::size_t conjecture_violations = 0;  ///< unpolarized two-electron densities with ratio > 1 at 0.867
  double max_conjecture_ratio = 0.0;
};

SuiteSummary scan_suite(const std::vector<RadialDensity>& suite);

}  // namespace dftlab::lieb_oxford
