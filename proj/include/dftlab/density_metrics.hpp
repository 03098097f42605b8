#pragma once

// Density-error measures and the density-corrected decomposition of an
// approximate functional's energy error, dE = dE_F + dE_D.

#include <string>
#include <vector>

namespace dftlab::metrics {

/// Two densities on one grid. `weights` is the integration measure: 4 pi r^2
/// times the quadrature weight radially, 1 per site on the dimer.
struct DensityComparison {
  std::vector<double> positions;  ///< ascending
  std::vector<double> weights;
  std::vector<double> n_ref;
  std::vector<double> n_test;

  /// Grid sizes match and both densities carry the same particle number to
  /// 1e-6 relative; InvalidInput otherwise.
  void validate() const;
  [[nodiscard]] double particles_ref() const;
  [[nodiscard]] double particles_test() const;
};

/// Radial grid with trapezoid weights in r times 4 pi r^2.
DensityComparison radial_comparison(std::vector<double> r, std::vector<double> n_ref, std::vector<double> n_test);

/// Two-site occupations n_1 = 1 - dn/2, n_2 = 1 + dn/2 with dn = n_2 - n_1.
DensityComparison dimer_comparison(double dn_ref, double dn_test);

/// Arbitrary measure.
DensityComparison custom_comparison(std::vector<double> positions, std::vector<double> weights,
                                    std::vector<double> n_ref, std::vector<double> n_test);

double l2_error(const DensityComparison& c);
double l1_error(const DensityComparison& c);

/// l2 of the first differences (n_{i+1} - n_i) / (x_{i+1} - x_i), weighted by
/// the mean of the neighbouring weights: penalizes wrong shape, not amplitude.
double derivative_l2_error(const DensityComparison& c);

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant; exact at nodes.
class Pchip {
 public:
  Pchip(std::vector<double> x, std::vector<double> y);
  [[nodiscard]] double operator()(double x) const;

 private:
  std::vector<double> x_, y_, d_;
};

struct CrossingMetric {
  double value = 0.0;
  std::string note;
};

inline constexpr const char* kCrossingMetricNote =
    "sum of squared differences at chosen points; points taken where one approximate density crosses "
    "the reference make that density look exact, so the ranking is set by the choice of points";

/// Sum over points of (n_test - n_ref)^2 from the interpolated densities.
/// Points outside the grid throw InvalidInput.
CrossingMetric crossing_metric(const DensityComparison& c, const std::vector<double>& points);

/// Positions where n_test - n_ref changes sign (linear interpolation between
/// nodes).
std::vector<double> find_crossings(const DensityComparison& c);

struct ErrorDecomposition {
  double de_total = 0.0;       ///< E~[n~] - E
  double de_functional = 0.0;  ///< E~[n] - E
  double de_density = 0.0;     ///< E~[n~] - E~[n]
  double dn_exact = 0.0;
  double dn_approx = 0.0;
  double e_exact = 0.0;
};

/// Exchange-only dimer functional E~(dn) = T_S + U_H + E_X + dv dn / 2.
double approximate_energy(double t, double u, double dv, double dn);

/// Self-consistent occupation difference of the exchange-only functional.
double approximate_density(double t, double u, double dv);

ErrorDecomposition dc_decomposition(double t, double u, double dv);

struct DecompositionRow {
  double t = 0.0, u = 0.0, dv = 0.0;
  ErrorDecomposition d;
};

/// Row-major over (u, dv), u slowest.
std::vector<DecompositionRow> dc_scan(double t, const std::vector<double>& u_values,
                                      const std::vector<double>& dv_values);

/// Reference hydrogen-like density and two approximations on a uniform radial
/// grid: a small fast oscillation about the reference and a slightly
/// contracted exponential. l2 prefers the first, derivative_l2 the second.
struct MetricFixture {
  std::string name;
  DensityComparison oscillatory;
  DensityComparison contracted;
};

MetricFixture metric_fixture();

struct MetricRanking {
  double l2_oscillatory = 0.0, l2_contracted = 0.0;
  double dl2_oscillatory = 0.0, dl2_contracted = 0.0;
  [[nodiscard]] bool l2_prefers_oscillatory() const { return l2_oscillatory < l2_contracted; }
  [[nodiscard]] bool dl2_prefers_oscillatory() const { return dl2_oscillatory < dl2_contracted; }
  [[nodiscard]] bool rankings_disagree() const { return l2_prefers_oscillatory() != dl2_prefers_oscillatory(); }
};

MetricRanking rank_fixture(const MetricFixture& f);

}  // namespace dftlab::metrics
