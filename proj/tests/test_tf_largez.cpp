#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dftlab/errors.hpp"
#include "dftlab/lieb_oxford.hpp"
#include "dftlab/numerics.hpp"
#include "dftlab/tf_largez.hpp"

using namespace dftlab;
using namespace dftlab::tf;

namespace {

constexpr double pi = std::numbers::pi;

const TFSolution& solution() {
  static const TFSolution s = solve_tf_atom();
  return s;
}

// Independent shooting in x itself: RK4 on (phi, phi') from x0 = 1e-6 with a
// graded step h = min(hmax, rho x) that resolves the x^{-1/2} behaviour of
// phi'' near the origin, bisection on the slope until the trajectory neither
// crosses zero nor turns up before x = 100.
double shooting_oracle(double rho, double hmax) {
  const double x0 = 1e-6;
  const double x1 = 100.0;
  auto acc = [](double x, double p) { return p > 0.0 ? p * std::sqrt(p / x) : 0.0; };
  auto run = [&](double b) {
    double p = 1.0 + b * x0 + 4.0 / 3.0 * std::pow(x0, 1.5);
    double dp = b + 2.0 * std::sqrt(x0);
    double x = x0;
    while (x < x1) {
      const double h = std::min(hmax, rho * x);
      const double a1 = acc(x, p);
      const double a2 = acc(x + h / 2, p + h / 2 * dp);
      const double a3 = acc(x + h / 2, p + h / 2 * dp + h * h / 4 * a1);
      const double a4 = acc(x + h, p + h * dp + h * h / 2 * a2);
      p += h * dp + h * h / 6 * (a1 + a2 + a3);
      dp += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
      x += h;
      if (p < 0.0) return -1;
      if (dp > 0.0) return 1;
    }
    return 0;
  };
  double lo = -2.0, hi = -1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const int c = run(mid);
    if (c == 0) return mid;
    (c < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(TFAtom, InitialSlope) {
  EXPECT_NEAR(solution().initial_slope, -1.588071, 1e-5);
}

TEST(TFAtom, SlopeAgainstIndependentShooting) {
  // Two step sizes of a fourth-order oracle, Richardson-extrapolated.
  const double coarse = shooting_oracle(4e-3, 4e-3);
  const double fine = shooting_oracle(2e-3, 2e-3);
  EXPECT_NEAR(coarse, fine, 1e-6);
  const double limit = fine + (fine - coarse) / 15.0;
  EXPECT_NEAR(solution().initial_slope, limit, 1e-6);
}

TEST(TFAtom, GridRefinement) {
  ShootingOptions o;
  o.steps *= 2;
  EXPECT_LT(std::abs(solve_tf_atom(o).initial_slope - solution().initial_slope), 1e-6);
}

TEST(TFAtom, BoundaryAndShape) {
  const auto& s = solution();
  EXPECT_EQ(s.phi_at(0.0), 1.0);
  EXPECT_EQ(s.x.front(), 0.0);
  EXPECT_EQ(s.phi.front(), 1.0);
  for (std::size_t i = 1; i < s.x.size(); ++i) {
    EXPECT_LT(s.phi[i], s.phi[i - 1]);
    EXPECT_GT(s.phi[i], 0.0);
    EXPECT_LT(s.dphi[i], 0.0);
  }
  EXPECT_LT(s.phi_at(50.0), 1e-3);
  EXPECT_LT(s.phi_at(1e4), 1e-9);
}

TEST(TFAtom, SatisfiesTheOde) {
  // Second difference of the interpolant against phi^{3/2} / sqrt(x).
  const auto& s = solution();
  for (double x : {0.1, 1.0, 5.0, 20.0, 45.0, 80.0, 500.0}) {
    const double h = 1e-3 * x;
    const double d2 = (s.dphi_at(x + h) - s.dphi_at(x - h)) / (2.0 * h);
    const double rhs = std::pow(s.phi_at(x), 1.5) / std::sqrt(x);
    EXPECT_NEAR(d2, rhs, 1e-4 * rhs) << x;
  }
}

TEST(TFAtom, Normalization) {
  // int phi^{3/2} sqrt(x) dx over [0, inf) equals 1 and also -B equals
  // int phi^{3/2} / sqrt(x) dx. Gauss-Legendre in ln x.
  const auto& s = solution();
  std::vector<double> gx(48), gw(48);
  numerics::gauss_legendre(48, gx, gw);
  double charge = 0.0, slope = 0.0;
  const double a = std::log(1e-18), b = std::log(1e5);
  const int panels = 400;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
    for (int k = 0; k < 48; ++k) {
      const double x = std::exp(0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[k]);
      const double w = 0.5 * (hi - lo) * gw[k] * x;
      const double f = std::pow(s.phi_at(x), 1.5);
      charge += w * f * std::sqrt(x);
      slope += w * f / std::sqrt(x);
    }
  }
  EXPECT_NEAR(charge, 1.0, 1e-6);
  EXPECT_NEAR(slope, -s.initial_slope, 1e-6);
}

TEST(TFDensity, ParticleNumber) {
  for (double z : {1.0, 10.0, 100.0}) {
    const auto d = tf_density(solution(), z);
    EXPECT_NEAR(d.norm(), z, 1e-3 * z);
    EXPECT_EQ(d.family, lieb_oxford::Family::tf_atom);
    EXPECT_FALSE(d.polarized);
  }
}

TEST(TFDensity, ZetaScalingCovariance) {
  const auto base = tf_density(solution(), 10.0);
  for (double zeta : {0.5, 3.0, 8.0}) {
    const auto direct = tf_density(solution(), 10.0 * zeta);
    const auto scaled = zeta_scaled(base, zeta);
    ASSERT_EQ(direct.r.size(), scaled.r.size());
    for (std::size_t i = 0; i < direct.r.size(); i += 97) {
      EXPECT_NEAR(direct.r[i], scaled.r[i], 1e-13 * direct.r[i]);
      EXPECT_NEAR(direct.n[i], scaled.n[i], 1e-12 * direct.n[i]);
    }
    EXPECT_NEAR(scaled.n_electrons, 10.0 * zeta, 1e-12);
  }
}

TEST(TFDensity, N43Coefficient) {
  for (double z : {1.0, 10.0, 100.0}) {
    const double i43 = lieb_oxford::integral_n43(tf_density(solution(), z));
    EXPECT_NEAR(i43 / std::pow(z, 5.0 / 3.0), 0.2990, 0.005 * 0.2990);
  }
}

TEST(LeadingExchange, MatchesPowerLaw) {
  const auto rep = verify_leading_exchange(solution(), {1.0, 10.0, 36.0, 100.0, 1000.0});
  EXPECT_TRUE(rep.pass());
  EXPECT_NEAR(rep.rows[0].e_x_lda, -0.2208, 0.005 * 0.2208);
  EXPECT_NEAR(rep.rows[1].expected, -0.2208 * std::pow(10.0, 5.0 / 3.0), 1e-4 * std::pow(10.0, 5.0 / 3.0));
  EXPECT_LT(rep.ratio_spread, 1e-12);
}

TEST(Basis, ParseAndName) {
  EXPECT_EQ(parse_term("Z^7/3"), (BasisTerm{7.0 / 3.0, false}));
  EXPECT_EQ(parse_term("Z^2"), (BasisTerm{2.0, false}));
  EXPECT_EQ(parse_term("ZlogZ"), (BasisTerm{1.0, true}));
  EXPECT_EQ(parse_term("Z*log(Z)"), (BasisTerm{1.0, true}));
  EXPECT_EQ(parse_term("Z"), (BasisTerm{1.0, false}));
  EXPECT_EQ(parse_term("Z^(2/3)*logZ"), (BasisTerm{2.0 / 3.0, true}));
  EXPECT_EQ(parse_term("Z^0.5").power, 0.5);
  EXPECT_THROW(parse_term("Y^2"), InvalidInput);
  EXPECT_THROW(parse_term("Z^a"), InvalidInput);
  EXPECT_THROW(parse_term("Z^1/0"), InvalidInput);
  for (const auto& t : standard_basis()) EXPECT_EQ(parse_term(t.name()), t) << t.name();
  EXPECT_EQ(standard_basis()[0].name(), "Z^(7/3)");
  EXPECT_EQ(standard_basis()[3].name(), "Z*log(Z)");
}

TEST(Fit, ClosedShellList) {
  EXPECT_TRUE(is_closed_shell(18));
  EXPECT_TRUE(is_closed_shell(70));
  EXPECT_FALSE(is_closed_shell(26));
  const auto kept = closed_shell_filter({{2, 0}, {10, 0}, {12, 0}, {18, 0}, {19, 0}, {36, 0}, {36.5, 0}});
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].z, 18.0);
  EXPECT_EQ(kept[1].z, 36.0);
}

TEST(Fit, ExactModelInSpan) {
  std::vector<DataPoint> data;
  for (int z = 13; z <= 120; z += 7) data.push_back({double(z), -0.0254 * z * std::log(z) - 0.0569 * z});
  const auto fit = fit_asymptotics(data, {parse_term("ZlogZ"), parse_term("Z")});
  EXPECT_NEAR(-fit.coefficients[0], 0.0254, 1e-10);
  EXPECT_NEAR(-fit.coefficients[1], 0.0569, 1e-10);
  double norm = 0.0;
  for (const auto& p : data) norm += p.value * p.value;
  EXPECT_LT(fit.residual, 1e-12 * std::sqrt(norm));
}

TEST(Fit, FullBasisExactInSpan) {
  const std::vector<double> c = {0.3, -0.2, 0.1, -0.05, 0.02, 0.07};
  const auto basis = standard_basis();
  std::vector<DataPoint> data;
  for (int z = 2; z <= 120; z += 3) {
    double v = 0.0;
    for (std::size_t k = 0; k < basis.size(); ++k) v += c[k] * basis[k](z);
    data.push_back({double(z), v});
  }
  const auto fit = fit_asymptotics(data, basis);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(fit.coefficients[k], c[k], 1e-8 * std::max(1.0, std::abs(c[k])));
  double norm = 0.0;
  for (const auto& p : data) norm += p.value * p.value;
  EXPECT_LT(fit.residual, 1e-12 * std::sqrt(norm));
}

TEST(Fit, NoisyDataMonteCarlo) {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> noise(0.0, 1e-4);
  std::vector<int> zs;
  for (int z = 13; z <= 120; ++z) zs.push_back(z);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    std::vector<DataPoint> data;
    for (int z : zs) data.push_back({double(z), -0.0254 * z * std::log(z) - 0.0569 * z + noise(rng)});
    const auto fit = fit_asymptotics(data, {parse_term("ZlogZ"), parse_term("Z")});
    worst = std::max({worst, std::abs(-fit.coefficients[0] - 0.0254), std::abs(-fit.coefficients[1] - 0.0569)});
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(Fit, FilterFlag) {
  std::vector<DataPoint> data;
  for (int z = 1; z <= 120; ++z) data.push_back({double(z), -0.0254 * z * std::log(z) - 0.0569 * z + (is_closed_shell(z) ? 0.0 : 1.0)});
  const auto fit = fit_asymptotics(data, {parse_term("ZlogZ"), parse_term("Z")}, true);
  EXPECT_TRUE(fit.filter_applied);
  EXPECT_EQ(fit.data.size(), 16u);
  EXPECT_NEAR(-fit.coefficients[0], 0.0254, 1e-10);
}

TEST(Fit, Errors) {
  const std::vector<DataPoint> few = {{13, 1}, {20, 2}};
  EXPECT_THROW(fit_asymptotics(few, {parse_term("Z"), parse_term("ZlogZ")}), InvalidInput);
  const std::vector<DataPoint> dup = {{13, 1}, {13, 2}, {20, 3}, {30, 4}};
  EXPECT_THROW(fit_asymptotics(dup, {parse_term("Z")}), InvalidInput);
  const std::vector<DataPoint> ok = {{13, 1}, {20, 2}, {30, 3}, {40, 5}};
  EXPECT_THROW(fit_asymptotics(ok, {parse_term("Z"), parse_term("Z^1")}), SingularFit);
  EXPECT_THROW(fit_asymptotics(ok, {parse_term("Z"), parse_term("Z^2"), parse_term("Z^2/2")}), SingularFit);
}

TEST(Fit, JsonReport) {
  std::vector<DataPoint> data;
  for (int z = 13; z <= 60; z += 5) data.push_back({double(z), -0.0254 * z * std::log(z) - 0.0569 * z});
  const auto j = to_json(fit_asymptotics(data, {parse_term("ZlogZ"), parse_term("Z")}));
  EXPECT_EQ(j["basis"][0], "Z*log(Z)");
  EXPECT_EQ(j["n_points"], data.size());
  EXPECT_EQ(j["filter_applied"], false);
  EXPECT_TRUE(j["residual"].is_number());
  EXPECT_NEAR(j["z_log_z"]["b_x_prime"].get<double>(), 0.0254, 1e-10);
  EXPECT_NEAR(j["z_log_z"]["one_over_4pi2"].get<double>(), 0.025330, 1e-6);
}

TEST(Csv, ParsesCommentsAndColumns) {
  std::istringstream in(
      "# synthetic\n"
      "Z, e_x_lda, e_x\n"
      "\n"
      "18, -27.0, -30.0\n"
      "# trailing comment\n"
      "36,-86.5,-93.25\n");
  const auto pts = read_exchange_csv(in);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].z, 18.0);
  EXPECT_EQ(pts[0].value, -3.0);
  EXPECT_EQ(pts[1].value, -6.75);
}

TEST(Csv, Errors) {
  std::istringstream no_header("18,-1,-2\n");
  EXPECT_THROW(read_exchange_csv(no_header), InvalidInput);
  std::istringstream bad("Z,e_x,e_x_lda\n18,abc,-2\n");
  EXPECT_THROW(read_exchange_csv(bad), InvalidInput);
  std::istringstream short_row("Z,e_x,e_x_lda\n18,-2\n");
  EXPECT_THROW(read_exchange_csv(short_row), InvalidInput);
  EXPECT_THROW(read_exchange_csv_file("/nonexistent/file.csv"), InvalidInput);
}

TEST(Csv, ShippedSyntheticFixture) {
  const auto pts = read_exchange_csv_file(DFTLAB_DATA_DIR "/synthetic_exchange.csv");
  ASSERT_GT(pts.size(), 20u);
  const auto fit = fit_asymptotics(pts, {parse_term("ZlogZ"), parse_term("Z")}, true);
  EXPECT_NEAR(-fit.coefficients[0], 0.0254, 1e-3);
  EXPECT_NEAR(-fit.coefficients[1], 0.0569, 3e-3);
}

TEST(Bohr, Coefficient) {
  const auto b = bohr_coefficient();
  EXPECT_NEAR(b.value, 1.0 / (3.0 * pi * pi), 1e-16);
  EXPECT_NEAR(b.value, 0.033773, 1e-6);
  EXPECT_NEAR(b.ratio, 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.fit_reference, 0.025330, 1e-6);
}
