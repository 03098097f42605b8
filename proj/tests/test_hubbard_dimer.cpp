#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "dftlab/errors.hpp"
#include "dftlab/hubbard_dimer.hpp"
#include "oracle/full_space_dimer.hpp"

using namespace dftlab;
using namespace dftlab::dimer;

namespace {

oracle::FullSpaceResult full_space(double t, double u, double dv, double lambda = 1.0) {
  return oracle::solve_full_space(t, lambda * u, -0.5 * dv, 0.5 * dv);
}

}  // namespace

TEST(SolveGroundState, NonInteractingBondingOrbital) {
  const auto s = solve_ground_state({1.0, 0.0, 0.0, 1.0});
  EXPECT_NEAR(s.energy, -2.0, 1e-14);
  EXPECT_NEAR(occupation_difference(s), 0.0, 1e-15);
}

TEST(SolveGroundState, ZeroCouplingRemovesInteraction) {
  const auto s = solve_ground_state({0.5, 5.0, 0.0, 0.0});
  EXPECT_NEAR(s.energy, -1.0, 1e-14);
  EXPECT_NEAR(occupation_difference(s), 0.0, 1e-15);
}

TEST(SolveGroundState, SymmetricStrongCouplingMatchesOracle) {
  // Frozen from the six-dimensional oracle; also equals u/2 - sqrt(u^2/4 + 4t^2).
  const auto s = solve_ground_state({0.5, 5.0, 0.0, 1.0});
  EXPECT_NEAR(s.energy, -0.19258240356725193, 1e-13);
  EXPECT_NEAR(occupation_difference(s), 0.0, 1e-14);
  EXPECT_NEAR(s.energy, full_space(0.5, 5.0, 0.0).energy, 1e-12);
}

TEST(SolveGroundState, StateIsNormalized) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(0.05, 3.0), uu(0.0, 20.0), udv(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const auto s = solve_ground_state({ut(rng), uu(rng), udv(rng), 1.0});
    const double norm = s.c[0] * s.c[0] + s.c[1] * s.c[1] + s.c[2] * s.c[2];
    EXPECT_NEAR(norm, 1.0, 1e-12);
  }
}

TEST(SolveGroundState, RejectsInvalidParameters) {
  EXPECT_THROW(solve_ground_state({std::numeric_limits<double>::quiet_NaN(), 1.0, 0.0, 1.0}),
               InvalidInput);
  EXPECT_THROW(solve_ground_state({1.0, std::numeric_limits<double>::infinity(), 0.0, 1.0}),
               InvalidInput);
  EXPECT_THROW(solve_ground_state({0.0, 1.0, 0.0, 1.0}), InvalidInput);
  EXPECT_THROW(solve_ground_state({1.0, -1.0, 0.0, 1.0}), InvalidInput);
  EXPECT_THROW(solve_ground_state({1.0, 1.0, 0.0, -0.5}), InvalidInput);
}

TEST(OccupationDifference, Examples) {
  SingletState sym;
  sym.c = {0.5, 0.5, std::sqrt(0.5)};
  EXPECT_DOUBLE_EQ(occupation_difference(sym), 0.0);
  SingletState site2;
  site2.c = {0.0, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(occupation_difference(site2), 2.0);

  // Frozen from the six-dimensional oracle.
  const auto s = solve_ground_state({0.5, 1.0, 2.0, 1.0});
  EXPECT_NEAR(occupation_difference(s), -1.5096309604668272, 1e-12);
  EXPECT_NEAR(s.n2() - s.n1(), occupation_difference(s), 1e-15);
}

TEST(OccupationDifference, DecreasesWithPotentialDifference) {
  double prev = 2.0;
  for (double dv = -30.0; dv <= 30.0; dv += 0.25) {
    const double dn = occupation_difference(solve_ground_state({0.5, 4.0, dv, 1.0}));
    EXPECT_LT(dn, prev);
    prev = dn;
  }
}

TEST(ConstrainedSearch, NonInteractingSymmetric) {
  const auto r = constrained_search(0.0, 1.0, 0.0, 1.0);
  EXPECT_NEAR(r.f_lambda, -2.0, 1e-12);
  EXPECT_NEAR(r.dv, 0.0, 1e-12);
}

TEST(ConstrainedSearch, SymmetricInteracting) {
  const auto r = constrained_search(0.0, 0.5, 5.0, 1.0);
  EXPECT_NEAR(r.dv, 0.0, 1e-12);
  // <T> + u <D> at dv = 0 from the oracle.
  const auto o = full_space(0.5, 5.0, 0.0);
  EXPECT_NEAR(r.f_lambda, o.kinetic + 5.0 * o.double_occupancy, 1e-12);
  EXPECT_NEAR(r.f_lambda, -0.19258240356725193, 1e-12);
}

TEST(ConstrainedSearch, AgreesWithOracleGridScan) {
  const double t = 1.0, u = 2.0, lambda = 0.5, target = 1.0;
  // Oracle: scan dv on a fine grid, interpolate the crossing linearly, then
  // refine by secant on the oracle itself.
  double prev_dv = -20.0;
  double prev_dn = full_space(t, u, prev_dv, lambda).dn;
  double x0 = 0.0, x1 = 0.0;
  for (double dv = -20.0 + 1e-3; dv <= 20.0; dv += 1e-3) {
    const double dn = full_space(t, u, dv, lambda).dn;
    if ((prev_dn - target) * (dn - target) <= 0.0) {
      x0 = prev_dv + (target - prev_dn) * (dv - prev_dv) / (dn - prev_dn);
      x1 = dv;
      break;
    }
    prev_dv = dv;
    prev_dn = dn;
  }
  for (int i = 0; i < 30; ++i) {
    const double f0 = full_space(t, u, x0, lambda).dn - target;
    const double f1 = full_space(t, u, x1, lambda).dn - target;
    if (f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    x1 = x2;
  }
  const auto o = full_space(t, u, x1, lambda);
  const double f_oracle = o.kinetic + lambda * u * o.double_occupancy;

  const auto r = constrained_search(target, t, u, lambda);
  EXPECT_NEAR(r.dv, x1, 1e-8);
  EXPECT_NEAR(r.f_lambda, f_oracle, 1e-8);
  EXPECT_NEAR(occupation_difference(r.state), target, 1e-10);
}

TEST(ConstrainedSearch, RejectsUnreachableDensity) {
  EXPECT_THROW(constrained_search(2.0, 1.0, 1.0, 1.0), InvalidInput);
  EXPECT_THROW(constrained_search(-2.5, 1.0, 1.0, 1.0), InvalidInput);
}

TEST(ConstrainedSearch, BracketFailureIsInversionFailure) {
  InversionOptions opts;
  opts.max_doublings = 0;
  // Reaching dn = -1.999 needs |dv| far beyond the initial bracket of 10.
  EXPECT_THROW(constrained_search(-1.999, 0.5, 0.0, 1.0, opts), InversionFailure);
}

TEST(ConstrainedSearch, RoundTripRecoversPotential) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.2, 2.0), uu(0.0, 8.0), udv(-6.0, 6.0);
  for (int i = 0; i < 100; ++i) {
    const double t = ut(rng), u = uu(rng), dv = udv(rng);
    const double dn = occupation_difference(solve_ground_state({t, u, dv, 1.0}));
    const auto r = constrained_search(dn, t, u, 1.0);
    EXPECT_NEAR(r.dv, dv, 1e-8) << "t=" << t << " u=" << u << " dv=" << dv;
  }
}

TEST(ConstrainedSearch, NonInteractingMinimumIsKsKinetic) {
  for (double dn : {-1.9, -1.2, -0.3, 0.0, 0.7, 1.5}) {
    for (double u : {0.0, 3.0, 10.0}) {
      const auto r = constrained_search(dn, 0.7, u, 0.0);
      EXPECT_NEAR(r.f_lambda, ks_kinetic_energy(0.7, dn), 1e-9);
    }
  }
}

TEST(AdiabaticConnection, SymmetricExchangeIsMinusHalfU) {
  const auto curve = adiabatic_connection(0.5, 5.0, 0.0, 101);
  ASSERT_EQ(curve.lambdas.size(), 101u);
  EXPECT_EQ(curve.lambdas.front(), 0.0);
  EXPECT_EQ(curve.lambdas.back(), 1.0);
  EXPECT_NEAR(curve.ex, -2.5, 1e-15);
  EXPECT_NEAR(curve.uxc.front(), -2.5, 1e-10);
}

TEST(AdiabaticConnection, EndpointMatchesOracle) {
  const auto curve = adiabatic_connection(0.5, 5.0, 0.0, 21);
  const auto o = full_space(0.5, 5.0, 0.0);
  EXPECT_NEAR(curve.uxc.back(), 5.0 * o.double_occupancy - hartree_energy(5.0, 0.0), 1e-10);
  EXPECT_NEAR(curve.uxc.back(), -4.8211917272131485, 1e-10);
}

TEST(AdiabaticConnection, NoInteractionIsFlat) {
  const auto curve = adiabatic_connection(0.5, 0.0, 1.3, 11);
  for (double v : curve.uxc) EXPECT_NEAR(v, curve.ex, 1e-14);
  EXPECT_EQ(curve.ex, 0.0);
}

TEST(AdiabaticConnection, ExchangeEndpointOnAsymmetricCurves) {
  for (double dv : {0.0, 0.5, 2.0, 5.0}) {
    for (double u : {0.5, 2.0, 5.0}) {
      const auto curve = adiabatic_connection(0.5, u, dv, 11);
      const double dn = curve.dn_target;
      EXPECT_NEAR(curve.uxc.front(), -(u / 2.0) * (1.0 + dn * dn / 4.0), 1e-8);
      EXPECT_NEAR(curve.dvs.back(), dv, 1e-8);
    }
  }
}

TEST(AdiabaticConnection, RejectsShortGrid) {
  EXPECT_THROW(adiabatic_connection(0.5, 1.0, 0.0, 2), InvalidInput);
}

TEST(ConvexityReport, LinearCurveHasNoViolation) {
  ACCurve c;
  for (int i = 0; i <= 10; ++i) {
    c.lambdas.push_back(i / 10.0);
    c.uxc.push_back(-1.0 - 0.3 * i / 10.0);
  }
  const auto rep = convexity_report(c);
  EXPECT_NEAR(rep.min_second_difference, 0.0, 1e-15);
  EXPECT_FALSE(rep.violated);
}

TEST(ConvexityReport, SymmetricStrongCouplingIsConvex) {
  const auto rep = convexity_report(adiabatic_connection(0.5, 5.0, 0.0, 101));
  EXPECT_GE(rep.min_second_difference, 0.0);
  EXPECT_FALSE(rep.violated);
  EXPECT_TRUE(rep.monotone);
}

TEST(ConvexityReport, ConcaveDataIsFlagged) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> amp(0.1, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = amp(rng);
    ACCurve c;
    for (int i = 0; i <= 20; ++i) {
      const double x = i / 20.0;
      c.lambdas.push_back(x);
      c.uxc.push_back(-1.0 - a * x * x);
    }
    EXPECT_TRUE(convexity_report(c).violated);
  }
}

TEST(ConvexityReport, RequiresFivePoints) {
  ACCurve c;
  c.lambdas = {0.0, 0.5, 1.0};
  c.uxc = {-1.0, -1.1, -1.2};
  EXPECT_THROW(convexity_report(c), InvalidInput);
}

TEST(DecomposeEnergies, NoInteractionGivesZeros) {
  const auto d = decompose_energies(adiabatic_connection(0.5, 0.0, 0.7, 21), 0.5, 0.0);
  EXPECT_NEAR(d.ec, 0.0, 1e-14);
  EXPECT_NEAR(d.tc, 0.0, 1e-14);
  EXPECT_NEAR(d.uc, 0.0, 1e-14);
}

TEST(DecomposeEnergies, SymmetricAreasMatchFigureRegions) {
  const double t = 0.5, u = 5.0;
  const auto curve = adiabatic_connection(t, u, 0.0, 101);
  const auto d = decompose_energies(curve, t, u);
  // Blue area (between E_X and the curve) is -E_C, green (between the curve and
  // U_XC(1)) is T_C, together they make up -U_C.
  EXPECT_LT(d.ec, 0.0);
  EXPECT_GT(d.tc, 0.0);
  EXPECT_NEAR(d.ec, d.tc + d.uc, 1e-12);
  EXPECT_NEAR(-d.uc, (-d.ec) + d.tc, 1e-12);
  EXPECT_NEAR(d.uc, curve.uxc.back() - curve.ex, 1e-15);
  EXPECT_LE(d.tc, std::abs(d.uc) / 2.0);
  // E_C = E - E_HF-like reference at dn = 0: E - (T_S + U_H + E_X).
  const double e = solve_ground_state({t, u, 0.0, 1.0}).energy;
  EXPECT_NEAR(d.ec, e - (ks_kinetic_energy(t, 0.0) + hartree_energy(u, 0.0) + exchange_energy(u, 0.0)),
              1e-8);
  EXPECT_NEAR(d.tc, d.tc_direct, 1e-8);
}

TEST(DecomposeEnergies, AsymmetricSatisfiesKineticBound) {
  const double t = 0.5, u = 5.0, dv = 2.0;
  const auto curve = adiabatic_connection(t, u, dv, 101);
  const auto d = decompose_energies(curve, t, u);
  const auto o = full_space(t, u, dv);
  EXPECT_NEAR(curve.dn_target, o.dn, 1e-10);
  EXPECT_NEAR(d.t_full, o.kinetic, 1e-9);
  EXPECT_NEAR(curve.uxc.back(), u * o.double_occupancy - hartree_energy(u, o.dn), 1e-9);
  EXPECT_LE(d.tc, std::abs(d.uc) / 2.0);
  EXPECT_GE(d.tc, 0.0);
  EXPECT_LE(d.ec, 0.0);
}

TEST(DecomposeEnergies, SignConditionsAcrossParameters) {
  for (double u : {0.1, 1.0, 4.0, 10.0}) {
    for (double dv : {0.0, 0.5, 3.0, 8.0}) {
      const auto d = decompose_energies(adiabatic_connection(1.0, u, dv, 51), 1.0, u);
      EXPECT_GE(d.tc, -1e-10);
      EXPECT_LE(d.ec, 1e-10);
      EXPECT_LE(d.uc, 1e-10);
      EXPECT_NEAR(d.ec, d.tc + d.uc, 1e-14);
    }
  }
}

TEST(DecomposeEnergies, WeakCouplingLimit) {
  const double t = 1.0;
  for (double u : {0.01, 0.05}) {
    for (double dv : {0.0, 1.0}) {
      const auto d = decompose_energies(adiabatic_connection(t, u, dv, 101), t, u);
      EXPECT_LE(std::abs(d.ec + d.tc), 0.1 * std::abs(d.ec));
      EXPECT_LE(std::abs(d.ec - d.uc / 2.0), 0.1 * std::abs(d.ec));
    }
  }
}

TEST(DecomposeEnergies, InconsistentCurveIsRejected) {
  auto curve = adiabatic_connection(0.5, 5.0, 0.0, 21);
  curve.kinetic.back() += 1e-3;
  EXPECT_THROW(decompose_energies(curve, 0.5, 5.0), InternalConsistencyError);
}

TEST(SolveHF, ExactWithoutInteraction) {
  const auto h = solve_hf({1.0, 0.0, 0.0, 1.0});
  EXPECT_NEAR(h.theta, std::numbers::pi / 4.0, 1e-10);
  EXPECT_NEAR(h.e_hf, -2.0, 1e-14);
  EXPECT_NEAR(h.t_hf, -2.0, 1e-14);
}

TEST(SolveHF, SymmetricClosedForm) {
  const auto h = solve_hf({0.5, 5.0, 0.0, 1.0});
  EXPECT_NEAR(h.theta, std::numbers::pi / 4.0, 1e-10);
  EXPECT_NEAR(h.e_hf, 1.5, 1e-13);
}

TEST(SolveHF, ThetaIsStationary) {
  const DimerParams p{0.5, 3.0, 2.5, 1.0};
  const auto h = solve_hf(p);
  const double step = 1e-5;
  EXPECT_LE(h.e_hf, hf_energy(p, h.theta + step));
  EXPECT_LE(h.e_hf, hf_energy(p, h.theta - step));
}

TEST(SolveHF, VariationalAgainstOracle) {
  const double t = 0.5;
  int count = 0;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double u = t * 10.0 * i / 20.0;
      const double dv = t * 10.0 * j / 20.0;
      const auto h = solve_hf({t, u, dv, 1.0});
      EXPECT_GE(h.e_hf, full_space(t, u, dv).energy - 1e-12) << "u=" << u << " dv=" << dv;
      ++count;
    }
  }
  EXPECT_GE(count, 400);
}

TEST(HFKineticCorrelation, VanishesWithoutInteraction) {
  for (double dv : {0.0, 0.3, 4.0}) {
    const auto r = hf_kinetic_correlation({0.5, 0.0, dv, 1.0});
    EXPECT_NEAR(r.tc_hf, 0.0, 1e-12);
  }
}

TEST(HFKineticCorrelation, SymmetricStrongCoupling) {
  const auto r = hf_kinetic_correlation({0.5, 5.0, 0.0, 1.0});
  const auto o = full_space(0.5, 5.0, 0.0);
  EXPECT_NEAR(r.t_full, o.kinetic, 1e-12);
  EXPECT_NEAR(r.t_hf, -1.0, 1e-12);
  EXPECT_NEAR(r.tc_hf, 0.62860932364589661, 1e-11);
}
