#include "sticky1d/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sticky {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double weighted_sum(const std::vector<double>& m, const std::vector<double>& a) {
  double acc = 0.0;
  for (size_t i = 0; i < m.size(); ++i) acc += m[i] * a[i];
  return acc;
}

double weighted_sq(const std::vector<double>& m, const std::vector<double>& a) {
  double acc = 0.0;
  for (size_t i = 0; i < m.size(); ++i) acc += m[i] * a[i] * a[i];
  return acc;
}

}  // namespace

double weighted_pairwise_abs(const std::vector<double>& masses,
                             const std::vector<double>& xs) {
  require(masses.size() == xs.size(), "weighted_pairwise_abs: size mismatch");
  size_t n = xs.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return xs[a] < xs[b]; });
  // For sorted positions, sum_{i<j} m_i m_j (x_j - x_i) via prefix sums.
  double acc = 0.0, wsum = 0.0, wxsum = 0.0;
  for (size_t k = 0; k < n; ++k) {
    double m = masses[order[k]], x = xs[order[k]];
    acc += m * (x * wsum - wxsum);
    wsum += m;
    wxsum += m * x;
  }
  return 2.0 * acc;  // both ordered pairs
}

double weighted_pairwise_abs_direct(const std::vector<double>& masses,
                                    const std::vector<double>& xs) {
  require(masses.size() == xs.size(), "weighted_pairwise_abs: size mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j < xs.size(); ++j)
      acc += masses[i] * masses[j] * std::abs(xs[i] - xs[j]);
  return acc;
}

EnergyReport energy(const std::vector<double>& masses,
                    const std::vector<double>& x, const std::vector<double>& v,
                    const std::vector<double>& u, const ForceModel& model) {
  require(masses.size() == x.size() && x.size() == v.size() &&
              v.size() == u.size(),
          "energy: size mismatch");
  EnergyReport rep;
  rep.kinetic = 0.5 * weighted_sq(masses, v);

  double pairabs = weighted_pairwise_abs(masses, x);
  // For the confined variant the stored pairwise coupling is -2 lambda^2, so
  // (alpha/4) * pairabs is exactly the -(lambda^2/2) sum m m |x - x| part of
  // its potential; the quadratic pair part reduces to the weighted variance.
  double pot = (model.alpha() / 4.0) * pairabs +
               model.beta() * weighted_sum(masses, x);
  if (model.variant() == Variant::ConfinedRepulsive) {
    double lam2 = model.lambda() * model.lambda();
    double xbar = weighted_sum(masses, x);
    pot += (lam2 / 2.0) * (weighted_sq(masses, x) - xbar * xbar);
  }
  rep.potential = pot;
  rep.total = rep.kinetic + rep.potential;
  rep.majorant = 0.5 * weighted_sq(masses, u) + pot;
  return rep;
}

double lyapunov(const std::vector<double>& masses, const std::vector<double>& x,
                const std::vector<double>& u, const ForceModel& model) {
  require(model.variant() == Variant::ConfinedRepulsive,
          "lyapunov: confined variant only");
  require(masses.size() == x.size() && x.size() == u.size(),
          "lyapunov: size mismatch");
  double xbar = weighted_sum(masses, x);
  double ubar = weighted_sum(masses, u);
  double kap = model.kappa(), sig2 = model.sigma() * model.sigma();
  double acc = 0.0, theta = 0.0;
  for (size_t i = 0; i < masses.size(); ++i) {
    double c = 2.0 * theta + masses[i] - 1.0;  // theta_{i-1} + theta_i - 1
    theta += masses[i];
    double xt = x[i] - c - xbar;
    double ut = u[i] - ubar;
    acc += masses[i] * (sig2 * xt * xt + (ut + kap * xt) * (ut + kap * xt));
  }
  return acc;
}

double stability_gap(const std::vector<double>& masses,
                     const std::vector<double>& x1,
                     const std::vector<double>& u1,
                     const std::vector<double>& x2,
                     const std::vector<double>& u2, double lambda) {
  require(masses.size() == x1.size() && x1.size() == u1.size() &&
              u1.size() == x2.size() && x2.size() == u2.size(),
          "stability_gap: size mismatch");
  double xb1 = weighted_sum(masses, x1), xb2 = weighted_sum(masses, x2);
  double ub1 = weighted_sum(masses, u1), ub2 = weighted_sum(masses, u2);
  double acc = 0.0;
  for (size_t i = 0; i < masses.size(); ++i) {
    double dx = (x1[i] - xb1) - (x2[i] - xb2);
    double du = (u1[i] - ub1) - (u2[i] - ub2);
    acc += masses[i] * (lambda * lambda * dx * dx + du * du);
  }
  return acc;
}

}  // namespace sticky
