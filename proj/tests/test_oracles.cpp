#include <cmath>
#include <vector>

#include "doctest.h"
#include "sticky1d/forces.hpp"
#include "sticky1d/oracles.hpp"

using namespace sticky;

TEST_SUITE("oracles") {

TEST_CASE("bgsw quantile positions") {
  // Pre-collapse (t < 1): free flow outside the origin cluster.  At t = 1/2
  // the cluster spans |m - 1/2| <= t/(1+t^2) = 0.4.
  CHECK(oracle::bgsw_X(0.5, 0.95) == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(oracle::bgsw_X(0.5, 0.05) == doctest::Approx(-0.0625).epsilon(1e-14));
  CHECK(oracle::bgsw_X(0.5, 0.7) == doctest::Approx(0.0).epsilon(1e-14));

  // Full collapse at t = 1.
  for (double m : {0.05, 0.3, 0.5, 0.8, 0.95})
    CHECK(oracle::bgsw_X(1.0, m) == doctest::Approx(0.0).epsilon(1e-14));

  // Re-emission (t > 1): the cluster keeps mass 1/t; the layer at
  // |y| = |m - 1/2| leaves at time 1/(2|y|) and coasts as y (t - 1/(2y))^2.
  CHECK(oracle::bgsw_X(2.0, 1.0 - 1e-12) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(oracle::bgsw_X(2.0, 0.75) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(oracle::bgsw_X(2.0, 0.95) ==
        doctest::Approx(0.45 * std::pow(2.0 - 1.0 / 0.9, 2)).epsilon(1e-13));
}

TEST_CASE("bgsw CDF inverts the quantile map") {
  for (double t : {0.25, 0.5, 1.5, 2.0, 3.0}) {
    double r = t < 1.0 ? t / (1.0 + t * t) : 1.0 / (2.0 * t);
    for (double off : {0.02, 0.05, 0.4}) {
      for (int sgn : {-1, 1}) {
        double m = 0.5 + sgn * (r + off * (0.5 - r) / 0.45);
        if (m <= 0.0 || m >= 1.0) continue;
        double x = oracle::bgsw_X(t, m);
        CHECK(oracle::bgsw_M(t, x) == doctest::Approx(m).epsilon(1e-10));
      }
    }
  }
  // Right continuity across the atom at the origin: at t = 2 the atom holds
  // mass 1/2, so M jumps from 1/4 to 3/4 at x = 0.
  CHECK(oracle::bgsw_M(2.0, 0.0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(oracle::bgsw_M(2.0, -1e-7) == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("bgsw velocities and kinetic energy") {
  for (double m : {0.1, 0.4, 0.6, 0.9})
    CHECK(oracle::bgsw_V(1.0, m) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(oracle::bgsw_V(0.5, 0.95) == doctest::Approx(-0.55).epsilon(1e-14));
  CHECK(oracle::bgsw_V(2.0, 0.95) == doctest::Approx(0.8).epsilon(1e-14));

  CHECK(oracle::bgsw_kinetic(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(oracle::bgsw_kinetic(2.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(oracle::bgsw_kinetic(0.5) == doctest::Approx(0.091 / 1.5).epsilon(1e-13));

  // Midpoint-rule cross-check of the closed form against V itself.
  const int n = 4000;
  for (double t : {0.5, 2.0}) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = oracle::bgsw_V(t, (i + 0.5) / n);
      sum += v * v / n;
    }
    double tol = t < 1.0 ? 5e-4 : 1e-5;  // V jumps at the cluster edge pre-collapse
    CHECK(std::abs(sum - oracle::bgsw_kinetic(t)) <= tol);
  }
}

TEST_CASE("bgsw projected flow clips the free characteristics") {
  // sgn(y) max{(1+t^2)|y| - t, 0} with y = m - 1/2.
  CHECK(oracle::bgsw_projected_X(2.0, 0.95) ==
        doctest::Approx(5.0 * 0.45 - 2.0).epsilon(1e-14));
  CHECK(oracle::bgsw_projected_X(2.0, 0.75) == doctest::Approx(0.0));
  // Pre-collapse the projection and the sticky flow coincide.
  for (double m : {0.05, 0.2, 0.5, 0.8, 0.95})
    CHECK(oracle::bgsw_projected_X(0.5, m) ==
          doctest::Approx(oracle::bgsw_X(0.5, m)).epsilon(1e-13));
  // Post-collapse they differ: the projected flat zone (mass radius
  // t/(1+t^2) = 0.4 at t = 2) stays wider than the sticky atom (radius
  // 1/(2t) = 0.25), so at m = 0.85 the projection still reads 0 while the
  // sticky flow has already re-emitted that layer to positive x.
  CHECK(oracle::bgsw_projected_X(2.0, 0.85) == doctest::Approx(0.0));
  CHECK(oracle::bgsw_X(2.0, 0.85) > oracle::bgsw_projected_X(2.0, 0.85) + 0.1);
}

TEST_CASE("two-particle closed form") {
  oracle::TwoParticleState s = oracle::two_particle(0.5);
  CHECK(s.x1 == doctest::Approx(0.9375).epsilon(1e-15));
  CHECK(s.x2 == doctest::Approx(1.0625).epsilon(1e-15));
  CHECK(s.v1 == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(s.v2 == doctest::Approx(0.25).epsilon(1e-15));

  // Merged phase: both members ride the center of mass.
  oracle::TwoParticleState m = oracle::two_particle(1.0);
  CHECK(m.x1 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(m.x2 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(m.v1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.v2 == doctest::Approx(1.0).epsilon(1e-14));

  // After the split at t = 2 the members separate symmetrically.
  oracle::TwoParticleState a = oracle::two_particle(4.0);
  CHECK(a.x1 == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(a.x2 == doctest::Approx(5.5).epsilon(1e-14));
  CHECK(a.v1 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(a.v2 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("two-particle projected flow") {
  // Merged exactly on [2 - sqrt(2), 2 + sqrt(2)].
  oracle::TwoParticleState in = oracle::two_particle_projected(3.0);
  CHECK(in.x1 == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(in.x2 == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(in.v1 == doctest::Approx(1.0).epsilon(1e-14));
  oracle::TwoParticleState out = oracle::two_particle_projected(4.0);
  CHECK(out.x1 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(out.x2 == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(out.v1 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(out.v2 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("confined linear profile: contact data") {
  oracle::ConfinedLinear cl(0.5, 0.0);
  CHECK(cl.concentrates());
  CHECK(cl.tau0() == doctest::Approx(2.0 * std::asin(0.6)).epsilon(1e-12));
  CHECK(cl.tau0() == doctest::Approx(1.2870022175865685).epsilon(1e-12));
  CHECK(cl.contact_speed() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cl.tau1() == doctest::Approx(2.2870022175865685).epsilon(1e-12));
  CHECK(cl.c_at_tau_star() ==
        doctest::Approx(2.0 - std::sqrt(1.25) / 0.5).epsilon(1e-12));

  // c(t) = 2 - cos(t/2) - 2 sin(t/2) for lambda = 1/2, kappa = 0.
  for (double t : {0.0, 0.4, 1.0}) {
    CHECK(cl.c(t) ==
          doctest::Approx(2.0 - std::cos(0.5 * t) - 2.0 * std::sin(0.5 * t))
              .epsilon(1e-13));
    CHECK(cl.c_dot(t) ==
          doctest::Approx(0.5 * std::sin(0.5 * t) - std::cos(0.5 * t))
              .epsilon(1e-13));
  }
}

TEST_CASE("confined linear profile: concentration predicate") {
  CHECK(oracle::ConfinedLinear(0.4, 0.0).concentrates());
  CHECK_FALSE(oracle::ConfinedLinear(0.7, 0.0).concentrates());
  CHECK_FALSE(oracle::ConfinedLinear(0.577, 0.05).concentrates());
  CHECK(oracle::ConfinedLinear(0.5, 0.05).concentrates());
  CHECK_THROWS(oracle::ConfinedLinear(0.7, 0.0).tau0());
  CHECK_THROWS(oracle::ConfinedLinear(0.7, 0.0).tau1());
}

TEST_CASE("confined linear profile: trajectory regimes") {
  oracle::ConfinedLinear cl(0.5, 0.0);
  // Pre-contact: all gaps scale by c(t).
  for (double t : {0.3, 0.9}) {
    for (double m : {0.1, 0.5, 0.9}) {
      CHECK(cl.X(t, m) == doctest::Approx(cl.c(t) * (m - 0.5)).epsilon(1e-13));
      CHECK(cl.V(t, m) == doctest::Approx(cl.c_dot(t) * (m - 0.5)).epsilon(1e-13));
    }
  }
  // Merged window [tau0, tau1): everything sits at the origin.
  double mid = 0.5 * (cl.tau0() + cl.tau1());
  for (double t : {cl.tau0(), mid, cl.tau1() - 1e-6})
    for (double m : {0.1, 0.5, 0.9})
      CHECK(std::abs(cl.X(t, m)) <= 1e-9);
  // Continuity at the release time and outward motion just after.
  for (double m : {0.05, 0.95}) {
    CHECK(std::abs(cl.X(cl.tau1() + 1e-9, m)) <= 1e-6);
    double later = cl.X(cl.tau1() + 0.5, m);
    CHECK(later * (m - 0.5) > 0.0);  // moves away from the origin
  }
}

TEST_CASE("steady profile of a damped confined run") {
  ForceModel conf = ForceModel::confined(2.0, 2.0, 0.0);
  oracle::SteadyProfile s = oracle::steady_state(conf, 1.0, 2.0);
  CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s(0.5) == doctest::Approx(2.0).epsilon(1e-15));
  std::vector<double> pos =
      oracle::steady_positions(s, {0.25, 0.25, 0.25, 0.25});
  REQUIRE(pos.size() == 4);
  CHECK(pos[0] == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(pos[1] == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(pos[2] == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(pos[3] == doctest::Approx(2.75).epsilon(1e-15));

  CHECK_THROWS(oracle::steady_state(ForceModel::euler_poisson(-2.0, 0.0), 0.0, 0.0));
  CHECK_THROWS(oracle::steady_state(ForceModel::confined(0.5, 0.0, 0.0), 0.0, 0.0));
}

TEST_CASE("single-jump wave CDF") {
  // Attractive shock from (0, 1/2) moving at v0 = 1: front at t + t^2/8.
  CHECK(oracle::dirac_riemann(1.0, 0.0, 0.5, 1.0, 1.0, 1.12) ==
        doctest::Approx(0.0));
  CHECK(oracle::dirac_riemann(1.0, 0.0, 0.5, 1.0, 1.0, 1.13) ==
        doctest::Approx(0.5));
  // Repulsive rarefaction from (0, 1) at rest: linear CDF ramp.
  CHECK(oracle::dirac_riemann(-2.0, 0.0, 1.0, 0.0, 1.0, -0.5) ==
        doctest::Approx(0.0));
  CHECK(oracle::dirac_riemann(-2.0, 0.0, 1.0, 0.0, 1.0, 0.0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(oracle::dirac_riemann(-2.0, 0.0, 1.0, 0.0, 1.0, 0.25) ==
        doctest::Approx(0.75).epsilon(1e-14));
  CHECK(oracle::dirac_riemann(-2.0, 0.0, 1.0, 0.0, 1.0, 0.5) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

}  // TEST_SUITE
