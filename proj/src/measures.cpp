#include "sticky1d/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sticky {

double pos_tol(double scale) { return kPosTol * (1.0 + std::abs(scale)); }

bool same_position(double a, double b) {
  return std::abs(a - b) <= pos_tol(std::max(std::abs(a), std::abs(b)));
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

MonotoneStepMap::MonotoneStepMap(std::vector<double> breaks,
                                 std::vector<double> values) {
  require(values.size() >= 1, "MonotoneStepMap: need at least one piece");
  require(breaks.size() == values.size() + 1,
          "MonotoneStepMap: breaks must have one more entry than values");
  require(breaks.front() == 0.0 && breaks.back() == 1.0,
          "MonotoneStepMap: mass breakpoints must start at 0 and end at 1");
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    require(breaks[i] < breaks[i + 1],
            "MonotoneStepMap: breakpoints must be strictly increasing");
  for (size_t i = 0; i + 1 < values.size(); ++i)
    require(values[i] <= values[i + 1],
            "MonotoneStepMap: values must be nondecreasing");

  // Canonical form: merge adjacent pieces with bit-equal values so the
  // generalized inverse round-trips exactly.
  breaks_.push_back(0.0);
  for (size_t i = 0; i < values.size(); ++i) {
    if (!values_.empty() && values_.back() == values[i]) {
      breaks_.back() = breaks[i + 1];
    } else {
      values_.push_back(values[i]);
      breaks_.push_back(breaks[i + 1]);
    }
  }
}

MonotoneStepMap MonotoneStepMap::from_particles(
    const std::vector<double>& masses, const std::vector<double>& positions) {
  require(!masses.empty() && masses.size() == positions.size(),
          "from_particles: size mismatch");
  std::vector<double> breaks(masses.size() + 1, 0.0);
  for (size_t i = 0; i < masses.size(); ++i) {
    require(masses[i] > 0.0, "from_particles: masses must be positive");
    breaks[i + 1] = breaks[i] + masses[i];
  }
  breaks.back() = 1.0;  // absorb rounding in the final cumulative sum
  require(std::abs(breaks[masses.size()] - 1.0) <= 1e-9,
          "from_particles: masses must sum to 1");
  return MonotoneStepMap(std::move(breaks),
                         std::vector<double>(positions.begin(), positions.end()));
}

double MonotoneStepMap::operator()(double m) const {
  require(m >= 0.0 && m < 1.0, "MonotoneStepMap: argument outside [0,1)");
  // Piece i covers [breaks_[i], breaks_[i+1]).
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), m);
  size_t idx = static_cast<size_t>(it - breaks_.begin()) - 1;
  if (idx >= values_.size()) idx = values_.size() - 1;
  return values_[idx];
}

StepProfile::StepProfile(std::vector<double> breaks,
                         std::vector<double> values) {
  require(values.size() >= 1, "StepProfile: need at least one piece");
  require(breaks.size() == values.size() + 1,
          "StepProfile: breaks must have one more entry than values");
  require(breaks.front() == 0.0 && breaks.back() == 1.0,
          "StepProfile: mass breakpoints must start at 0 and end at 1");
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    require(breaks[i] < breaks[i + 1],
            "StepProfile: breakpoints must be strictly increasing");

  breaks_.push_back(0.0);
  for (size_t i = 0; i < values.size(); ++i) {
    if (!values_.empty() && values_.back() == values[i]) {
      breaks_.back() = breaks[i + 1];
    } else {
      values_.push_back(values[i]);
      breaks_.push_back(breaks[i + 1]);
    }
  }
}

StepProfile::StepProfile(const MonotoneStepMap& map)
    : breaks_(map.breaks()), values_(map.values()) {}

StepProfile StepProfile::constant(double value) {
  return StepProfile({0.0, 1.0}, {value});
}

double StepProfile::operator()(double m) const {
  require(m >= 0.0 && m < 1.0, "StepProfile: argument outside [0,1)");
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), m);
  size_t idx = static_cast<size_t>(it - breaks_.begin()) - 1;
  if (idx >= values_.size()) idx = values_.size() - 1;
  return values_[idx];
}

StepDistribution::StepDistribution(std::vector<double> xs,
                                   std::vector<double> thetas)
    : xs_(std::move(xs)), thetas_(std::move(thetas)) {
  require(!xs_.empty() && xs_.size() == thetas_.size(),
          "StepDistribution: size mismatch");
  for (size_t i = 0; i + 1 < xs_.size(); ++i) {
    require(xs_[i] < xs_[i + 1],
            "StepDistribution: jump locations must be strictly increasing");
    require(thetas_[i] < thetas_[i + 1],
            "StepDistribution: CDF values must be strictly increasing");
  }
  require(thetas_.back() == 1.0, "StepDistribution: final CDF value must be 1");
  for (double th : thetas_)
    require(th > 0.0 && th <= 1.0, "StepDistribution: CDF values in (0,1]");
}

double StepDistribution::operator()(double x) const {
  // Right-continuous: value thetas_[i] on [xs_[i], xs_[i+1]), 0 before xs_[0].
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  if (it == xs_.begin()) return 0.0;
  return thetas_[static_cast<size_t>(it - xs_.begin()) - 1];
}

StepDistribution generalized_inverse(const MonotoneStepMap& X) {
  // Jump locations are the (strictly increasing, canonical) values; the CDF
  // level after the jump at values[i] is breaks[i+1].
  std::vector<double> xs = X.values();
  std::vector<double> thetas(X.breaks().begin() + 1, X.breaks().end());
  return StepDistribution(std::move(xs), std::move(thetas));
}

MonotoneStepMap generalized_inverse(const StepDistribution& M) {
  std::vector<double> breaks;
  breaks.reserve(M.jumps() + 1);
  breaks.push_back(0.0);
  for (double th : M.thetas()) breaks.push_back(th);
  return MonotoneStepMap(std::move(breaks), M.xs());
}

namespace {

// Walk the merged breakpoint grid of two step maps and accumulate
// integral of f(X1 - X2) with piecewise-constant integrand.
template <typename F>
double merged_integral(const MonotoneStepMap& a, const MonotoneStepMap& b,
                       F&& f) {
  const auto& ba = a.breaks();
  const auto& bb = b.breaks();
  size_t ia = 0, ib = 0;
  double prev = 0.0, acc = 0.0;
  while (prev < 1.0) {
    double next = std::min(ba[ia + 1], bb[ib + 1]);
    acc += f(a.values()[ia] - b.values()[ib]) * (next - prev);
    if (ba[ia + 1] == next && ia + 2 < ba.size()) ++ia;
    if (bb[ib + 1] == next && ib + 2 < bb.size()) ++ib;
    if (next <= prev) break;  // defensive; cannot happen on valid maps
    prev = next;
  }
  return acc;
}

// Same walk on the x-axis for two CDFs, integrating f(M1 - M2) between
// consecutive jump locations (the integrand vanishes outside the hull).
template <typename F>
double merged_cdf_integral(const StepDistribution& a, const StepDistribution& b,
                           F&& f) {
  std::vector<double> grid;
  grid.reserve(a.jumps() + b.jumps());
  grid.insert(grid.end(), a.xs().begin(), a.xs().end());
  grid.insert(grid.end(), b.xs().begin(), b.xs().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double acc = 0.0;
  for (size_t k = 0; k + 1 < grid.size(); ++k) {
    // Both CDFs are constant on [grid[k], grid[k+1]).
    acc += f(a(grid[k]) - b(grid[k])) * (grid[k + 1] - grid[k]);
  }
  return acc;
}

}  // namespace

double w2_distance(const MonotoneStepMap& X1, const MonotoneStepMap& X2) {
  double s = merged_integral(X1, X2, [](double d) { return d * d; });
  return std::sqrt(std::max(0.0, s));
}

double w1_distance_quantile(const MonotoneStepMap& X1,
                            const MonotoneStepMap& X2) {
  return merged_integral(X1, X2, [](double d) { return std::abs(d); });
}

double w1_distance(const StepDistribution& M1, const StepDistribution& M2) {
  return merged_cdf_integral(M1, M2, [](double d) { return std::abs(d); });
}

double w1_positive_part(const StepDistribution& M1, const StepDistribution& M2) {
  return merged_cdf_integral(M1, M2,
                             [](double d) { return d > 0.0 ? d : 0.0; });
}

double moment(const std::vector<double>& masses, const std::vector<double>& xs,
              int p) {
  require(p == 1 || p == 2, "moment: p must be 1 or 2");
  require(masses.size() == xs.size(), "moment: size mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < masses.size(); ++i) {
    double a = std::abs(xs[i]);
    acc += masses[i] * (p == 1 ? a : a * a);
  }
  return acc;
}

int BlockStructure::member_count() const {
  return groups.empty() ? 0 : groups.back().hi + 1;
}

bool BlockStructure::node_inside_group(int node) const {
  // Node `node` separates member node-1 from member node. It is strictly
  // inside [lo, hi] iff lo < node <= hi.
  for (const auto& g : groups) {
    if (node > g.lo && node <= g.hi) return true;
    if (g.hi >= node) break;
  }
  return false;
}

BlockStructure blocks_from_positions(const std::vector<double>& positions) {
  BlockStructure bs;
  if (positions.empty()) return bs;
  int lo = 0;
  for (size_t i = 0; i + 1 < positions.size(); ++i) {
    if (positions[i + 1] < positions[i] - pos_tol(positions[i]))
      throw std::invalid_argument(
          "blocks_from_positions: positions must be nondecreasing");
    if (!same_position(positions[i], positions[i + 1])) {
      bs.groups.push_back({lo, static_cast<int>(i)});
      lo = static_cast<int>(i) + 1;
    }
  }
  bs.groups.push_back({lo, static_cast<int>(positions.size()) - 1});
  return bs;
}

ParticleSeed quantile_discretize(const std::function<double(double)>& X0,
                                 const std::function<double(double)>& V0,
                                 int n) {
  if (n < 1) throw std::invalid_argument("quantile_discretize: n >= 1");
  ParticleSeed seed;
  seed.masses.assign(n, 1.0 / n);
  seed.positions.reserve(n);
  seed.velocities.reserve(n);
  for (int i = 1; i <= n; ++i) {
    double m = (i - 0.5) / n;
    seed.positions.push_back(X0(m));
    seed.velocities.push_back(V0 ? V0(m) : 0.0);
    if (i > 1 && seed.positions[i - 1] < seed.positions[i - 2])
      throw std::invalid_argument(
          "quantile_discretize: sampled positions are not monotone");
  }
  return seed;
}

}  // namespace sticky
