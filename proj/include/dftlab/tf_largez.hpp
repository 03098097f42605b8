#pragma once

// Thomas-Fermi neutral atom, its LDA exchange, and the least-squares harness
// for the large-Z expansion of exchange energies.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dftlab/lieb_oxford.hpp"

namespace dftlab::tf {

struct ShootingOptions {
  double x0 = 1e-6;       ///< series launch point
  double x_match = 50.0;  ///< end of the shooting interval, >= 10
  std::size_t steps = 80000;  ///< RK4 steps in u = sqrt(x) over [sqrt(x0), sqrt(x_match)]
  double x_far = 1e4;     ///< start of the inward tail integration
  std::size_t tail_steps = 4000;
};

/// Screening function on [0, x_far]; beyond x_far the tail form
/// 144/x^3 (1 + F x^{-c}) with c = (sqrt(73) - 7)/2 is used.
struct TFSolution {
  std::vector<double> x;  ///< ascending, x[0] = 0
  std::vector<double> phi;
  std::vector<double> dphi;
  double initial_slope = 0.0;
  double tail_f = 0.0;

  /// Cubic Hermite interpolation of the stored profile.
  [[nodiscard]] double phi_at(double x) const;
  [[nodiscard]] double dphi_at(double x) const;
};

/// phi'' = phi^{3/2} / sqrt(x), phi(0) = 1, phi(inf) = 0, by shooting on the
/// initial slope. The stored profile joins the shooting solution on
/// [0, x_match] to an inward integration of the far tail.
TFSolution solve_tf_atom(const ShootingOptions& opts = {});

/// 0.885341 Z^{-1/3}
double tf_length(double z);

/// n(r) = Z / (4 pi b^3) (phi(x) / x)^{3/2}, x = r / b, on a grid uniform in
/// ln x over [x_min, x_max].
lieb_oxford::RadialDensity tf_density(const TFSolution& sol, double z, double x_min = 1e-6,
                                      double x_max = 1e4, std::size_t points = 4000);

/// n_zeta(r) = zeta^2 n(zeta^{1/3} r), with the grid contracted accordingly.
lieb_oxford::RadialDensity zeta_scaled(const lieb_oxford::RadialDensity& d, double zeta);

/// Coefficient in the TF energy of the atom; -(9 C2 / 11) Z^{5/3} is the
/// leading exchange term.
inline constexpr double kC2 = 0.269900;

struct LeadingExchangeRow {
  double z = 0.0;
  double e_x_lda = 0.0;
  double expected = 0.0;  ///< -(9 C2 / 11) Z^{5/3}
  double ratio = 0.0;     ///< e_x_lda / expected
  bool pass = false;
};

struct LeadingExchangeReport {
  std::vector<LeadingExchangeRow> rows;
  double tolerance = 0.005;
  double ratio_spread = 0.0;  ///< max ratio - min ratio
  [[nodiscard]] bool pass() const;
};

LeadingExchangeReport verify_leading_exchange(const TFSolution& sol, const std::vector<double>& z_list,
                                              double tolerance = 0.005);

// ---------------------------------------------------------------------------
// Asymptotic fit

/// Z^power, times log Z when with_log is set.
struct BasisTerm {
  double power = 1.0;
  bool with_log = false;

  [[nodiscard]] double operator()(double z) const;
  [[nodiscard]] std::string name() const;
  bool operator==(const BasisTerm&) const = default;
};

/// Parses "Z^7/3", "Z^2", "Z^5/3", "ZlogZ", "Z", "Z^4/3", "Z^p" and "Z^p*logZ"
/// with p a decimal or a ratio a/b.
BasisTerm parse_term(const std::string& text);

/// The six standard terms in descending order.
std::vector<BasisTerm> standard_basis();

struct DataPoint {
  double z = 0.0;
  double value = 0.0;
};

struct AsymptoticFit {
  std::vector<BasisTerm> basis;
  std::vector<double> coefficients;
  double residual = 0.0;  ///< Euclidean norm of the fit residual
  std::vector<DataPoint> data;
  bool filter_applied = false;
};

/// Closed-shell atoms: filled s (groups 2 and 18), filled d (group 12) and
/// filled f shells.
bool is_closed_shell(int z);

/// Keeps closed-shell atoms with Z > 12.
std::vector<DataPoint> closed_shell_filter(const std::vector<DataPoint>& data);

/// Least squares by column-pivoted QR on the column-scaled design matrix.
/// Requires more points than terms and distinct Z; rank deficiency throws
/// SingularFit.
AsymptoticFit fit_asymptotics(std::vector<DataPoint> data, const std::vector<BasisTerm>& basis,
                              bool closed_shell_only = false);

/// Rows (Z, e_x, e_x_lda); returns (Z, e_x - e_x_lda). Lines starting with '#'
/// are comments; a header row is required.
std::vector<DataPoint> read_exchange_csv(std::istream& in);
std::vector<DataPoint> read_exchange_csv_file(const std::string& path);

nlohmann::json to_json(const AsymptoticFit& fit);

struct BohrCoefficient {
  double value = 0.0;            ///< 1 / (3 pi^2)
  double fit_reference = 0.0;    ///< 1 / (4 pi^2)
  double ratio = 0.0;            ///< value / fit_reference = 4/3
};

BohrCoefficient bohr_coefficient();

/// Reference values quoted for real atoms, kept for reports.
struct LargeZReference {
  static constexpr double b_x_prime = 0.0254;  ///< hartree, coefficient of -Z log Z
  static constexpr double c_x_prime = 0.0569;  ///< hartree, coefficient of -Z
  static constexpr double ionization_limit_ev = 3.15;
};

}  // namespace dftlab::tf
