#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sticky1d/diagnostics.hpp"
#include "sticky1d/dynamics.hpp"
#include "sticky1d/forces.hpp"
#include "sticky1d/measures.hpp"

using namespace sticky;

namespace {

ParticleSeed bgsw_seed(int n) {
  return quantile_discretize([](double m) { return m - 0.5; },
                             [](double m) { return m < 0.5 ? 1.0 : -1.0; }, n);
}

ParticleSeed linear_seed(int n) {
  return quantile_discretize([](double m) { return m - 0.5; },
                             [](double m) { return -(m - 0.5); }, n);
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("pairwise absolute moment: fast vs direct") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> mw(0.05, 1.0), xx(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 40);
    std::vector<double> m(n), x(n);
    for (int i = 0; i < n; ++i) {
      m[i] = mw(rng);
      x[i] = xx(rng);
    }
    double a = weighted_pairwise_abs(m, x);
    double b = weighted_pairwise_abs_direct(m, x);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
  // Ordered pairs: both (i, j) and (j, i) count.
  CHECK(weighted_pairwise_abs({0.5, 0.5}, {0.0, 1.0}) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("energy of a freshly pooled pair") {
  // Prescribed velocities (1, -1) pool to the weighted mean -1/2.
  std::vector<double> masses{0.25, 0.75}, x{0.0, 0.0};
  std::vector<double> u{1.0, -1.0}, v{-0.5, -0.5};
  EnergyReport e = energy(masses, x, v, u, ForceModel::euler_poisson(0.0, 0.0));
  CHECK(e.kinetic == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(e.potential == doctest::Approx(0.0));
  CHECK(e.total == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(e.majorant == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.total <= e.majorant);
}

TEST_CASE("potential closed forms") {
  std::vector<double> masses{0.5, 0.5}, v{0.0, 0.0}, u{0.0, 0.0};
  // Repulsive pair at distance 1: (alpha/4) * (1/2) = -1/4 for alpha = -2.
  EnergyReport rep = energy(masses, {0.0, 1.0}, v, u,
                            ForceModel::euler_poisson(-2.0, 0.0));
  CHECK(rep.potential == doctest::Approx(-0.25).epsilon(1e-15));
  // External field: beta * first moment.
  EnergyReport fld = energy(masses, {1.0, 3.0}, v, u,
                            ForceModel::euler_poisson(0.0, 2.0));
  CHECK(fld.potential == doctest::Approx(4.0).epsilon(1e-15));
  // Confined pair at distance 1, lambda = 1:
  // (lambda^2/2) * 2 * (1/4) * (1/2 - 1) = -1/8.
  EnergyReport conf = energy(masses, {-0.5, 0.5}, v, u,
                             ForceModel::confined(1.0, 0.0, 0.0));
  CHECK(conf.potential == doctest::Approx(-0.125).epsilon(1e-15));
}

TEST_CASE("energy of the inward uniform profile") {
  ParticleSeed seed = bgsw_seed(256);
  std::vector<double> u = seed.velocities;
  EnergyReport e = energy(seed.masses, seed.positions, seed.velocities, u,
                          ForceModel::euler_poisson(-2.0, 0.0));
  CHECK(e.kinetic == doctest::Approx(0.5).epsilon(1e-15));
  // Continuum pairwise moment of Uniform(-1/2, 1/2) is 1/3.
  CHECK(e.potential == doctest::Approx(-1.0 / 6.0).epsilon(1e-4));
  CHECK(e.total == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(e.majorant == doctest::Approx(e.total).epsilon(1e-15));
}

TEST_CASE("lyapunov functional closed form on linear data") {
  const int n = 8;
  ParticleSeed seed = linear_seed(n);
  ForceModel model = ForceModel::confined(0.5, 0.1, 0.0);
  double L = lyapunov(seed.masses, seed.positions, seed.velocities, model);
  // sigma^2 + (1 + kappa)^2 = lambda^2 + 1 + 2 kappa = 1.35 with the
  // discrete uniform variance (1/12)(1 - 1/n^2).
  double expect = 1.35 * (1.0 / 12.0) * (1.0 - 1.0 / (n * n));
  CHECK(L == doctest::Approx(expect).epsilon(1e-12));
  // Zero exactly at the steady profile.
  std::vector<double> steady(n), zero(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double mid = (i + 0.5) / n;
    steady[i] = 2.0 * mid - 1.0;
  }
  CHECK(lyapunov(seed.masses, steady, zero, model) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("lyapunov decays at exactly twice kappa while collision-free") {
  // Gaps scale by 1 + C(t) >= 1 - 1.07 e^{-kappa pi / sigma} > 0, so no
  // collision ever happens and every block stays a singleton.
  ParticleSeed seed;
  seed.masses = {0.25, 0.25, 0.25, 0.25};
  seed.positions = {-1.5, -0.5, 0.5, 1.5};
  seed.velocities = {0.0, 0.0, 0.0, 0.0};
  ForceModel model = ForceModel::confined(0.3, 0.2, 0.0);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.5 * k);
  SimResult res = simulate(seed, model, 10.0, times);
  REQUIRE_FALSE(res.aborted);
  CHECK(res.events.empty());
  double kappa = model.kappa();
  std::vector<double> L;
  for (const Snapshot& s : res.snapshots)
    L.push_back(lyapunov(seed.masses, s.x, s.u, model));
  for (std::size_t k = 0; k + 1 < L.size(); ++k) {
    double ratio = L[k + 1] / L[k];
    CHECK(ratio == doctest::Approx(std::exp(-2.0 * kappa * 0.5)).epsilon(1e-8));
  }
}

TEST_CASE("stability gap is nonincreasing for paired undamped runs") {
  ParticleSeed a = linear_seed(12);
  ParticleSeed b = a;
  for (int i = 0; i < 12; ++i) {
    b.positions[i] *= 1.2;
    b.velocities[i] = 0.3 * b.velocities[i] + 0.05;
  }
  ForceModel model = ForceModel::confined(0.5, 0.0, 0.0);
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.2 * k);
  SimResult ra = simulate(a, model, 8.0, times);
  SimResult rb = simulate(b, model, 8.0, times);
  REQUIRE_FALSE(ra.aborted);
  REQUIRE_FALSE(rb.aborted);
  double prev = -1.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    double g = stability_gap(a.masses, ra.snapshots[k].x, ra.snapshots[k].u,
                             rb.snapshots[k].x, rb.snapshots[k].u, 0.5);
    if (prev >= 0.0) CHECK(g <= prev + 1e-9);
    prev = g;
  }
}

TEST_CASE("energy majorant dominates and decays on repulsive runs") {
  // Entropic two-particle run: the majorant is conserved during free flight
  // and drains while a block is merged; it must never increase.
  ParticleSeed seed;
  seed.masses = {0.5, 0.5};
  seed.positions = {0.0, 1.0};
  seed.velocities = {2.0, 0.0};
  ForceModel model = ForceModel::euler_poisson(-2.0, 0.0);
  std::vector<double> times;
  for (int k = 0; k <= 50; ++k) times.push_back(0.1 * k);
  SimResult res = simulate(seed, model, 5.0, times);
  REQUIRE_FALSE(res.aborted);
  double prev_majorant = 1e300, prev_total = 1e300;
  for (const Snapshot& s : res.snapshots) {
    EnergyReport e = energy(seed.masses, s.x, s.v, s.u, model);
    CHECK(e.total <= e.majorant + 1e-12);
    CHECK(e.majorant <= prev_majorant + 1e-10);
    CHECK(e.total <= prev_total + 1e-10);
    prev_majorant = e.majorant;
    prev_total = e.total;
  }
  CHECK(energy(seed.masses, res.snapshots.front().x, res.snapshots.front().v,
               res.snapshots.front().u, model)
            .majorant == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("energy order holds across random mixed runs") {
  std::mt19937 rng(515151);
  std::uniform_real_distribution<double> X(-1.0, 1.0), Vv(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng() % 10);
    ParticleSeed seed;
    double msum = 0.0;
    for (int i = 0; i < n; ++i) {
      seed.masses.push_back(0.2 + 0.8 * (rng() % 100) / 100.0);
      msum += seed.masses.back();
      seed.positions.push_back(X(rng));
      seed.velocities.push_back(Vv(rng));
    }
    for (double& m : seed.masses) m /= msum;
    std::sort(seed.positions.begin(), seed.positions.end());
    ForceModel model = (trial % 2 == 0)
                           ? ForceModel::euler_poisson(trial % 4 == 0 ? 1.5 : -1.5, 0.2)
                           : ForceModel::damped(-1.0, 0.0, 0.5);
    SimResult res = simulate(seed, model, 2.0, {0.5, 1.0, 1.5, 2.0});
    REQUIRE_FALSE(res.aborted);
    for (const Snapshot& s : res.snapshots) {
      EnergyReport e = energy(seed.masses, s.x, s.v, s.u, model);
      CHECK(e.total <= e.majorant + 1e-12);
    }
  }
}

}  // TEST_SUITE
