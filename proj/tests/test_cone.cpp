#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sticky1d/cone.hpp"

using namespace sticky;

namespace {

WeightedVector random_wv(std::mt19937& rng, int max_n) {
  std::uniform_int_distribution<int> nn(1, max_n);
  std::uniform_real_distribution<double> w(0.05, 1.0), v(-2.0, 2.0);
  int n = nn(rng);
  WeightedVector y;
  for (int i = 0; i < n; ++i) {
    y.weights.push_back(w(rng));
    y.values.push_back(v(rng));
  }
  return y;
}

double sq_dist(const WeightedVector& y, const std::vector<double>& z) {
  double s = 0.0;
  for (int i = 0; i < y.size(); ++i)
    s += y.weights[i] * (y.values[i] - z[i]) * (y.values[i] - z[i]);
  return s;
}

// Minimize over all contiguous partitions whose pooled means are
// nondecreasing; the optimum is the cone projection.
std::vector<double> brute_force_projection(const WeightedVector& y) {
  int n = y.size();
  std::vector<double> best;
  double best_cost = 0.0;
  for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
    std::vector<double> pooled(n);
    int lo = 0;
    bool mono = true;
    double prev = -1e300;
    for (int i = 0; i < n; ++i) {
      bool cut = (i == n - 1) || (mask & (1 << i));
      if (!cut) continue;
      double wsum = 0.0, vsum = 0.0;
      for (int j = lo; j <= i; ++j) {
        wsum += y.weights[j];
        vsum += y.weights[j] * y.values[j];
      }
      double mean = vsum / wsum;
      if (mean < prev) { mono = false; break; }
      for (int j = lo; j <= i; ++j) pooled[j] = mean;
      prev = mean;
      lo = i + 1;
    }
    if (!mono) continue;
    double cost = sq_dist(y, pooled);
    if (best.empty() || cost < best_cost) {
      best = pooled;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("cone") {

TEST_CASE("two decreasing values pool to their weighted mean") {
  WeightedVector y{{0.25, 0.75}, {1.0, -1.0}};
  WeightedVector p = project_cone(y);
  CHECK(p.values[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(p.values[1] == doctest::Approx(-0.5).epsilon(1e-15));
  ConeProjection cp = project_cone_pools(y);
  REQUIRE(cp.pools.groups.size() == 1);
  CHECK(cp.pools.groups[0].lo == 0);
  CHECK(cp.pools.groups[0].hi == 1);
  // Pooling is a weighted-L2 projection: kinetic energy drops 1/2 -> 1/8
  // for equal-speed opposite unit velocities with these masses... compute:
  double ke_before = 0.5 * (0.25 * 1.0 + 0.75 * 1.0);
  double ke_after = 0.5 * (0.25 + 0.75) * 0.25;
  CHECK(ke_before == doctest::Approx(0.5));
  CHECK(ke_after == doctest::Approx(0.125));
}

TEST_CASE("already monotone input is untouched") {
  WeightedVector y{{1.0, 2.0, 1.0}, {-1.0, 0.0, 5.0}};
  WeightedVector p = project_cone(y);
  CHECK(p.values == y.values);
  ConeProjection cp = project_cone_pools(y);
  CHECK(cp.pools.groups.size() == 3);
}

TEST_CASE("PAV and envelope-derivative projections agree") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 2000; ++trial) {
    WeightedVector y = random_wv(rng, 64);
    WeightedVector a = project_cone(y);
    WeightedVector b = project_cone_envelope(y);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i)
      CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-12);
  }
}

TEST_CASE("projection matches the brute-force partition optimum") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    WeightedVector y = random_wv(rng, 6);
    std::vector<double> expect = brute_force_projection(y);
    WeightedVector got = project_cone(y);
    for (int i = 0; i < y.size(); ++i)
      CHECK(std::abs(got.values[i] - expect[i]) <= 1e-10);
  }
}

TEST_CASE("idempotence and variational inequality") {
  std::mt19937 rng(333);
  for (int trial = 0; trial < 300; ++trial) {
    WeightedVector y = random_wv(rng, 24);
    WeightedVector p = project_cone(y);
    WeightedVector pp = project_cone(p);
    for (int i = 0; i < y.size(); ++i)
      CHECK(std::abs(pp.values[i] - p.values[i]) <= 1e-14);
    // <y - Py, z - Py> <= 0 for arbitrary cone points z.
    for (int k = 0; k < 5; ++k) {
      std::vector<double> z(y.size());
      std::uniform_real_distribution<double> step(0.0, 1.0);
      double acc = -2.0 + step(rng);
      for (int i = 0; i < y.size(); ++i) z[i] = (acc += step(rng));
      double inner = 0.0;
      for (int i = 0; i < y.size(); ++i)
        inner += y.weights[i] * (y.values[i] - p.values[i]) * (z[i] - p.values[i]);
      CHECK(inner <= 1e-10);
    }
    // The residual y - Py lies in the normal cone at Py.
    ConeProjection cp = project_cone_pools(y);
    WeightedVector resid{y.weights, {}};
    for (int i = 0; i < y.size(); ++i)
      resid.values.push_back(y.values[i] - cp.values[i]);
    CHECK(normal_cone_member(resid, cp.pools));
  }
}

TEST_CASE("pooled runs carry exact weighted means and tie-pooling") {
  // Ties between adjacent runs are pooled into one maximal run.
  WeightedVector y{{1.0, 1.0, 1.0, 1.0}, {1.0, -1.0, 3.0, -3.0}};
  ConeProjection cp = project_cone_pools(y);
  REQUIRE(cp.pools.groups.size() == 1);
  CHECK(cp.values[0] == doctest::Approx(0.0));
}

TEST_CASE("lower convex envelope of a parabola keeps everything") {
  std::vector<double> nodes, vals;
  for (int i = 0; i <= 20; ++i) {
    double x = i / 20.0;
    nodes.push_back(x);
    vals.push_back(x * x);
  }
  EnvelopeResult env = lower_convex_envelope(nodes, vals);
  CHECK(env.keep.size() == nodes.size());
  for (std::size_t i = 0; i + 1 < env.slopes.size(); ++i)
    CHECK(env.slopes[i] <= env.slopes[i + 1] + 1e-14);
}

TEST_CASE("lower convex envelope bridges a concave kink with one chord") {
  // P(m) = 2m^2 - m for m <= 1/2 mirrored to P(m) = P(1-m): concave kink at
  // m = 1/2, envelope chord from the tangency at m = 1/4 to m = 3/4.
  std::vector<double> nodes, vals;
  for (int i = 0; i <= 100; ++i) {
    double m = i / 100.0;
    double l = std::min(m, 1.0 - m);
    nodes.push_back(m);
    vals.push_back(2.0 * l * l - l);
  }
  EnvelopeResult env = lower_convex_envelope(nodes, vals);
  for (int k : env.keep) {
    double m = nodes[k];
    CHECK((m <= 0.25 + 1e-12 || m >= 0.75 - 1e-12));
  }
  // Chord across the kink is flat at the minimum value -1/8.
  for (std::size_t i = 0; i + 1 < env.keep.size(); ++i)
    if (nodes[env.keep[i]] == doctest::Approx(0.25))
      CHECK(env.slopes[i] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(vals[25] == doctest::Approx(-0.125));
}

TEST_CASE("flat projection preserves weighted sums") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    WeightedVector u = random_wv(rng, 16);
    BlockStructure bs;
    int lo = 0;
    while (lo < u.size()) {
      int hi = std::min(u.size() - 1, lo + (int)(rng() % 4));
      bs.groups.push_back({lo, hi});
      lo = hi + 1;
    }
    WeightedVector f = project_flat(u, bs);
    double before = 0.0, after = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      before += u.weights[i] * u.values[i];
      after += u.weights[i] * f.values[i];
    }
    CHECK(before == doctest::Approx(after).epsilon(1e-12));
    for (const MemberRange& g : bs.groups)
      for (int i = g.lo; i < g.hi; ++i)
        CHECK(f.values[i] == doctest::Approx(f.values[i + 1]).epsilon(1e-14));
  }
}

TEST_CASE("tangent cone projection is identity outside groups") {
  WeightedVector u{{1.0, 1.0, 1.0, 1.0}, {5.0, 2.0, 1.0, -7.0}};
  BlockStructure bs;
  bs.groups = {{0, 0}, {1, 2}, {3, 3}};
  WeightedVector t = project_tangent_cone(u, bs);
  CHECK(t.values[0] == 5.0);   // singleton untouched
  CHECK(t.values[3] == -7.0);  // singleton untouched
  CHECK(t.values[1] == doctest::Approx(1.5));  // pooled inside the group
  CHECK(t.values[2] == doctest::Approx(1.5));

  // Within a group the projection is isotonic, not flat: only the
  // decreasing tail pools.
  WeightedVector u3{{1.0, 1.0, 1.0}, {1.0, 5.0, 2.0}};
  BlockStructure one;
  one.groups = {{0, 2}};
  WeightedVector t3 = project_tangent_cone(u3, one);
  CHECK(t3.values[0] == doctest::Approx(1.0));
  CHECK(t3.values[1] == doctest::Approx(3.5));
  CHECK(t3.values[2] == doctest::Approx(3.5));
}

TEST_CASE("normal cone membership distinguishes interior nodes") {
  WeightedVector w{{0.25, 0.25, 0.25, 0.25}, {0.0, 1.0, -1.0, 0.0}};
  BlockStructure glued;
  glued.groups = {{0, 0}, {1, 2}, {3, 3}};
  CHECK(normal_cone_member(w, glued));
  BlockStructure split;
  split.groups = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_FALSE(normal_cone_member(w, split));
}

TEST_CASE("chord admissibility (prefix/suffix means)") {
  std::vector<double> w{1.0, 1.0};
  CHECK(oleinik_admissible(w, {1.0, -1.0}));
  CHECK_FALSE(oleinik_admissible(w, {-1.0, 1.0}));
  std::vector<double> w4{1.0, 1.0, 1.0, 1.0};
  CHECK(oleinik_admissible(w4, {3.0, 1.0, -1.0, -3.0}));
  CHECK(oleinik_admissible(w4, {1.0, 3.0, -3.0, -1.0}));
  CHECK_FALSE(oleinik_admissible(w4, {-1.0, 1.0, 1.0, -1.0}));
  // Exact ties are admissible (closed cone).
  CHECK(oleinik_admissible(w, {0.0, 0.0}));
}

}  // TEST_SUITE
