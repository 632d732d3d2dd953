#pragma once

// One-dimensional probability measures in two equivalent step representations:
// as a quantile function (monotone step map on the mass variable m in (0,1))
// and as a CDF (step distribution on the space variable x). Both carry exact
// generalized inverses of each other, plus exact Wasserstein distances and
// moments. All tolerances used across the library live here as well.

#include <functional>
#include <vector>

namespace sticky {

// Position-equality tolerance: two positions a, b are "the same point" when
// |a - b| <= pos_tol(max(|a|,|b|)).
inline constexpr double kPosTol = 1e-12;
// Prefix-sum (normal cone / Oleinik) tolerance.
inline constexpr double kXiTol = 1e-10;
// Velocity-equality tolerance (grazing contacts, split ordering checks).
inline constexpr double kVelTol = 1e-10;
// Simultaneous-event batching window.
inline constexpr double kEventTol = 1e-9;
// Event-time refinement target for bracketed root solves.
inline constexpr double kRootTol = 1e-12;
// Below this damping coefficient the (1-e^{-g t})/g family switches to series.
inline constexpr double kSmallDamping = 1e-8;

double pos_tol(double scale);
bool same_position(double a, double b);

// Right-continuous nondecreasing step function on (0,1): value values[i] on
// [breaks[i], breaks[i+1]). Construction canonicalizes by merging adjacent
// pieces whose values are exactly equal, so that the generalized inverse is an
// exact involution.
class MonotoneStepMap {
public:
  MonotoneStepMap(std::vector<double> breaks, std::vector<double> values);
  static MonotoneStepMap from_particles(const std::vector<double>& masses,
                                        const std::vector<double>& positions);

  int pieces() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double m) const;  // right-continuous evaluation

private:
  std::vector<double> breaks_;  // size pieces()+1, breaks_[0]=0, breaks_.back()=1
  std::vector<double> values_;  // strictly increasing after canonicalization
};

// Right-continuous piecewise-constant profile on (0,1): value values[i] on
// [breaks[i], breaks[i+1]). Unlike MonotoneStepMap the values may move in any
// direction — velocity profiles, flux densities. Adjacent pieces with
// bit-equal values are merged on construction.
class StepProfile {
public:
  StepProfile(std::vector<double> breaks, std::vector<double> values);
  StepProfile(const MonotoneStepMap& map);  // monotone maps are profiles
  static StepProfile constant(double value);

  int pieces() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double m) const;  // right-continuous evaluation

private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

// Right-continuous CDF of a purely atomic probability measure: jumps at
// strictly increasing locations xs, post-jump values thetas (thetas.back()==1).
class StepDistribution {
public:
  StepDistribution(std::vector<double> xs, std::vector<double> thetas);

  int jumps() const { return static_cast<int>(xs_.size()); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& thetas() const { return thetas_; }

  double operator()(double x) const;  // CDF value, right-continuous

private:
  std::vector<double> xs_;
  std::vector<double> thetas_;
};

// Exact generalized inverses; each is the other's inverse bit-for-bit on
// canonical representations.
StepDistribution generalized_inverse(const MonotoneStepMap& X);
MonotoneStepMap generalized_inverse(const StepDistribution& M);

// Quadratic Wasserstein distance, exact merged-breakpoint integration of
// (X1 - X2)^2 over (0,1).
double w2_distance(const MonotoneStepMap& X1, const MonotoneStepMap& X2);

// Linear Wasserstein distance. The two formulas — L1 of the quantile
// difference in m, and L1 of the CDF difference in x — agree identically;
// both are exposed so tests can assert the identity, and w1_distance itself
// returns the CDF-side value.
double w1_distance(const StepDistribution& M1, const StepDistribution& M2);
double w1_distance_quantile(const MonotoneStepMap& X1, const MonotoneStepMap& X2);

// One-sided transport gap: integral of (M1 - M2)^+ over the line (exact).
double w1_positive_part(const StepDistribution& M1, const StepDistribution& M2);

// p-th absolute moment sum(m_i |x_i|^p), p in {1, 2}.
double moment(const std::vector<double>& masses, const std::vector<double>& xs,
              int p);

// Maximal contiguous groups of members sharing one position. Members are
// 0-based; a group is the inclusive index range [lo, hi].
struct MemberRange {
  int lo = 0;
  int hi = 0;
  int size() const { return hi - lo + 1; }
};

struct BlockStructure {
  std::vector<MemberRange> groups;  // ordered, disjoint, covering 0..n-1

  int member_count() const;
  // Interior node i (1-based, separating member i-1 from member i) lies
  // strictly inside some group iff this returns true. Nodes on group borders
  // and nodes between singletons are "outside".
  bool node_inside_group(int node) const;
};

BlockStructure blocks_from_positions(const std::vector<double>& positions);

// Midpoint discretization of a quantile profile: n equal masses 1/n with
// positions X0((i-1/2)/n) and velocities V0 at the same nodes. Rejects
// nonmonotone position samples.
struct ParticleSeed {
  std::vector<double> masses;
  std::vector<double> positions;
  std::vector<double> velocities;
};

ParticleSeed quantile_discretize(const std::function<double(double)>& X0,
                                 const std::function<double(double)>& V0,
                                 int n);

}  // namespace sticky
