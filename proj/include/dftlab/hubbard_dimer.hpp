#pragma once

// Two-site, two-electron Hubbard model in the S_z = 0 singlet sector.
//
// Singlet basis ordering: {both electrons on site 1, both on site 2, covalent
// singlet}. The on-site potentials are fixed by the gauge v1 + v2 = 0, so
// v1 = -dv/2 and v2 = +dv/2.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace dftlab::dimer {

struct DimerParams {
  double t = 1.0;       ///< hopping, > 0
  double u = 0.0;       ///< on-site repulsion, >= 0
  double dv = 0.0;      ///< v2 - v1
  double lambda = 1.0;  ///< coupling scale multiplying u, >= 0

  [[nodiscard]] double v1() const { return -0.5 * dv; }
  [[nodiscard]] double v2() const { return 0.5 * dv; }
  [[nodiscard]] double coupling() const { return lambda * u; }

  /// Throws InvalidInput on non-finite values or t <= 0, u < 0, lambda < 0.
  void validate() const;
};

struct SingletState {
  std::array<double, 3> c{};  ///< amplitudes, all >= 0 for the ground state
  double energy = 0.0;

  [[nodiscard]] double n1() const { return 2.0 * c[0] * c[0] + c[2] * c[2]; }
  [[nodiscard]] double n2() const { return 2.0 * c[1] * c[1] + c[2] * c[2]; }
  /// Probability of a doubly occupied site; <V_ee> = u * double_occupancy().
  [[nodiscard]] double double_occupancy() const { return c[0] * c[0] + c[1] * c[1]; }
};

SingletState solve_ground_state(const DimerParams& p);

/// n2 - n1 = 2 (c2^2 - c1^2).
double occupation_difference(const SingletState& s);

/// <T> = -2 sqrt(2) t c3 (c1 + c2).
double kinetic_energy(const SingletState& s, double t);

// Density functionals of the dimer (functions of dn = n2 - n1 only).
double hartree_energy(double u, double dn);     ///< u (1 + dn^2/4) = (u/2)(n1^2 + n2^2)
double exchange_energy(double u, double dn);    ///< -hartree_energy / 2
double ks_kinetic_energy(double t, double dn);  ///< -2 t sqrt(1 - dn^2/4)

struct InversionOptions {
  double tol_dn = 1e-10;
  int max_doublings = 60;
  double min_interval = 1e-14;
};

struct ConstrainedSearchResult {
  double f_lambda = 0.0;  ///< <T> + lambda u <D>, no external-potential term
  double dv = 0.0;
  SingletState state;
};

/// Finds the potential difference whose ground state at coupling `lambda` has
/// occupation difference `dn_target`, and returns F^lambda of that state.
/// Throws InvalidInput for |dn_target| >= 2 - 1e-9 and InversionFailure when
/// the potential cannot be bracketed or the bisection stalls.
ConstrainedSearchResult constrained_search(double dn_target, double t, double u, double lambda,
                                           const InversionOptions& opts = {});

/// Adiabatic-connection integrand sampled at fixed density.
struct ACCurve {
  double dn_target = 0.0;
  std::vector<double> lambdas;
  std::vector<double> uxc;
  double ex = 0.0;
  std::vector<double> dvs;      ///< inverted potential at each lambda
  std::vector<double> kinetic;  ///< <T> of the constrained minimizer at each lambda
};

/// Curve at the lambda = 1 ground-state density of (t, u, dv_physical) on a
/// uniform grid of n_lambda_points in [0, 1].
ACCurve adiabatic_connection(double t, double u, double dv_physical,
                             std::size_t n_lambda_points = 101,
                             const InversionOptions& opts = {});

struct ConvexityReport {
  double min_second_difference = 0.0;  ///< min over i of uxc[i-1] - 2 uxc[i] + uxc[i+1]
  std::size_t argmin = 0;              ///< grid index of the minimum
  double tolerance = 0.0;
  bool violated = false;
  bool monotone = true;  ///< uxc non-increasing in lambda (monitored only)
};

/// Second central differences of the curve. Default tolerance is
/// 1e-7 * max|uxc|. Requires at least 5 points.
ConvexityReport convexity_report(const ACCurve& curve,
                                 std::optional<double> tolerance = std::nullopt);

struct EnergyDecomposition {
  double ex = 0.0;
  double ec = 0.0;
  double tc = 0.0;
  double uc = 0.0;
  double ts = 0.0;
  double t_full = 0.0;
  double tc_direct = 0.0;      ///< t_full - ts, compared against tc
  double quadrature_error = 0.0;
};

/// Splits E_C into kinetic and potential parts by integrating the curve.
/// Throws InternalConsistencyError when the two T_C routes disagree by more
/// than ten times the quadrature error estimate (with a 1e-9 (1 + u + t)
/// floor for inversion noise).
EnergyDecomposition decompose_energies(const ACCurve& curve, double t, double u);

struct HFDimerSolution {
  double theta = 0.0;  ///< occupied orbital = cos(theta) |1> + sin(theta) |2>
  double e_hf = 0.0;
  double t_hf = 0.0;
};

/// Restricted Hartree-Fock energy of the doubly occupied orbital as a function
/// of the mixing angle; the effective interaction is lambda * u.
double hf_energy(const DimerParams& p, double theta);

HFDimerSolution solve_hf(const DimerParams& p);

struct HFKineticCorrelation {
  double t_full = 0.0;
  double t_hf = 0.0;
  double tc_hf = 0.0;
};

HFKineticCorrelation hf_kinetic_correlation(const DimerParams& p);

}  // namespace dftlab::dimer
