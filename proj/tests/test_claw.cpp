#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sticky1d/claw.hpp"
#include "sticky1d/dynamics.hpp"
#include "sticky1d/forces.hpp"
#include "sticky1d/measures.hpp"
#include "sticky1d/oracles.hpp"

using namespace sticky;

namespace {

FluxFunction two_particle_flux(double t) {
  MonotoneStepMap X0({0.0, 0.5, 1.0}, {0.0, 1.0});
  StepProfile V0({0.0, 0.5, 1.0}, {2.0, 0.0});
  return FluxFunction::for_initial_data(ForceModel::euler_poisson(-2.0, 0.0),
                                        X0, V0, t);
}

}  // namespace

TEST_SUITE("claw") {

TEST_CASE("jump averages of densities") {
  auto sq = [](double m) { return m * m; };
  CHECK(volpert_average(sq, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  auto lin = [](double m) { return -2.0 * (m - 0.5); };
  CHECK(volpert_average(lin, 0.2, 0.6) == doctest::Approx(0.2).epsilon(1e-14));
  // Continuity point: the average degenerates to the density value.
  CHECK(volpert_average(sq, 0.3, 0.3) == doctest::Approx(0.09).epsilon(1e-14));

  // Smooth densities integrate to their antiderivative quotient, within the
  // accuracy of the fixed-panel quadrature (error ~ width^5 / (180 * 64^4)).
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    double a = U(rng), b = U(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-6) continue;
    double avg = volpert_average([](double m) { return std::sin(m); }, a, b);
    CHECK(avg == doctest::Approx((std::cos(a) - std::cos(b)) / (b - a)).epsilon(1e-8));
    CHECK(std::abs(avg) <= 1.0 + 1e-12);
  }

  // Flux overload agrees with the function overload wherever the density is
  // smooth (the numeric overload cannot see across density jumps).
  FluxFunction f = two_particle_flux(0.25);
  for (auto [lo, hi] : {std::pair{0.05, 0.45}, std::pair{0.55, 0.95}})
    CHECK(volpert_average(f, lo, hi) ==
          doctest::Approx(volpert_average([&](double m) { return f.slope(m); },
                                          lo, hi))
              .epsilon(1e-12));
}

TEST_CASE("Rankine-Hugoniot speeds are mass-weighted mean velocities") {
  FluxFunction f0 = two_particle_flux(0.0);
  CHECK(rh_speed(f0, 0.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rh_speed(f0, 0.5, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rh_speed(f0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("attractive single-jump wave is a shock") {
  SingleJumpWave w(ForceModel::euler_poisson(1.0, 0.0), 0.0, 0.5, 1.0);
  CHECK(w.shock());
  CHECK(w.position(1.0) == doctest::Approx(1.125).epsilon(1e-12));
  CHECK(w.speed(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.speed(1.0) == doctest::Approx(1.25).epsilon(1e-12));
  // Affine speed: equal increments over equal time steps.
  double d1 = w.speed(1.0) - w.speed(0.0);
  double d2 = w.speed(2.0) - w.speed(1.0);
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
  // The shock speed is the flux secant over the jump at every time.
  for (double t : {0.5, 1.0, 2.0})
    CHECK(w.speed(t) == doctest::Approx(rh_speed(w.flux_at(t), 0.0, 0.5)).epsilon(1e-12));
  // All jump mass rides the shock.
  CHECK(w.characteristic(1.0, 0.25) == doctest::Approx(w.position(1.0)).epsilon(1e-12));
  // CDF steps across the front.
  CHECK(w.profile(1.0, 1.12) == doctest::Approx(0.0));
  CHECK(w.profile(1.0, 1.13) == doctest::Approx(0.5));
  for (double x : {0.0, 0.6, 1.1, 1.2, 2.0})
    CHECK(w.profile(1.0, x) ==
          doctest::Approx(oracle::dirac_riemann(1.0, 0.0, 0.5, 1.0, 1.0, x))
              .epsilon(1e-12));
}

TEST_CASE("repulsive single-jump wave is a rarefaction fan") {
  SingleJumpWave w = riemann_solve(ForceModel::euler_poisson(-2.0, 0.0), 0.0, 1.0, 0.0);
  CHECK_FALSE(w.shock());
  CHECK(w.profile(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(w.profile(1.0, 0.25) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(w.profile(1.0, -0.5) == doctest::Approx(0.0));
  CHECK(w.profile(1.0, 0.5) == doctest::Approx(1.0));
  CHECK(w.characteristic(1.0, 0.75) == doctest::Approx(0.25).epsilon(1e-10));
  for (double t : {0.5, 1.0}) {
    for (double x : {-0.6, -0.3, -0.1, 0.0, 0.05, 0.2, 0.45, 0.6}) {
      CHECK(std::abs(w.profile(t, x) -
                     oracle::dirac_riemann(-2.0, 0.0, 1.0, 0.0, t, x)) <= 1e-9);
    }
  }
}

TEST_CASE("entropy validation accepts the sticky flow") {
  ParticleSeed seed{{0.5, 0.5}, {0.0, 1.0}, {2.0, 0.0}};
  ForceModel model = ForceModel::euler_poisson(-2.0, 0.0);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.25 * k);
  SimResult res = simulate(seed, model, 5.0, times);
  REQUIRE_FALSE(res.aborted);
  ValidationReport rep = validate_entropy(res.snapshots, seed.masses);
  CHECK(rep.all_pass());
  CHECK(rep.failures == 0);
  CHECK(rep.max_rh_residual <= 1e-9);
  CHECK(rep.min_margin >= -1e-9);
  CHECK_FALSE(rep.rows.empty());
}

TEST_CASE("entropy validation flags the projected flow after the split time") {
  // The projected dynamics keeps the pair glued on [2 - sqrt(2), 2 + sqrt(2)],
  // but the entropy solution splits at t = 2: in between, the glued front
  // violates the E-condition.
  ParticleSeed seed{{0.5, 0.5}, {0.0, 1.0}, {2.0, 0.0}};
  ForceModel model = ForceModel::euler_poisson(-2.0, 0.0);
  std::vector<Snapshot> snaps = simulate_projected(seed, model, {2.2, 2.8, 3.2});
  ValidationReport rep = validate_entropy(snaps, seed.masses);
  CHECK(rep.failures > 0);
  CHECK_FALSE(rep.all_pass());
  CHECK(rep.min_margin < -1e-9);
}

}  // TEST_SUITE
