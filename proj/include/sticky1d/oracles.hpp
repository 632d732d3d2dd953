#pragma once

// Closed-form reference solutions for the benchmark initial data shipped with
// the library. Each family is a pure function of time and the mass coordinate
// (or space), valid on its stated domain, and is used as ground truth by the
// test suites and by scenario oracle comparisons.

#include <vector>

#include "sticky1d/forces.hpp"

namespace sticky::oracle {

// "bgsw" family: pairwise repulsion alpha = -2, beta = 0, uniform mass with
// X0(m) = m - 1/2 and inward unit velocities V0(m) = -sgn(m - 1/2). The two
// symmetric shocks absorb all mass into the origin by t = 1 and re-emit it
// afterwards.
double bgsw_X(double t, double m);          // quantile position
double bgsw_M(double t, double x);          // CDF (right-continuous)
double bgsw_V(double t, double m);          // quantile velocity
double bgsw_projected_X(double t, double m);  // cone projection of free flow
double bgsw_kinetic(double t);              // integral of V(t,.)^2 over (0,1)

// Two equal masses 1/2 at positions (0, 1) with velocities (2, 0) under
// pairwise repulsion alpha = -2: the faster left particle catches the right
// one, they travel merged for a while, and the repulsion then breaks the
// pair apart again.
struct TwoParticleState {
  double x1 = 0.0, x2 = 0.0;
  double v1 = 0.0, v2 = 0.0;
};
TwoParticleState two_particle(double t);
// Pointwise cone projection of the free flow for the same data: merged on
// the closed window [2 - sqrt(2), 2 + sqrt(2)], free outside.
TwoParticleState two_particle_projected(double t);

// Confined model with linear initial data: X0(m) = m - 1/2, V0 = -(m - 1/2),
// confinement lambda, damping kappa = gamma/2 with lambda > kappa >= 0. All
// gaps scale by the common factor c(t); mass concentrates at the origin iff
// c dips negative, stays there until the repulsion wins, and is re-emitted
// along an explicit kernel.
class ConfinedLinear {
 public:
  ConfinedLinear(double lambda, double kappa);

  double lambda() const { return lam_; }
  double kappa() const { return kap_; }
  double sigma() const { return sig_; }

  double c(double t) const;      // common gap scale before contact
  double c_dot(double t) const;  // its time derivative
  double tau_star() const { return tau_star_; }  // first stationary time of c
  double c_at_tau_star() const { return c_star_; }
  bool concentrates() const { return conc_; }

  // Contact data; only meaningful when the profile concentrates.
  double tau0() const;           // time all gaps reach zero
  double contact_speed() const;  // inward speed -c_dot(tau0) at contact
  double tau1() const;           // time the merged state breaks apart

  double X(double t, double m) const;  // quantile position, all regimes
  double V(double t, double m) const;  // quantile velocity, all regimes

 private:
  void require_concentrates() const;

  double lam_ = 0.0, kap_ = 0.0, sig_ = 0.0;
  double tau_star_ = 0.0, c_star_ = 0.0;
  bool conc_ = false;
  double tau0_ = 0.0, e0_ = 0.0, tau1_ = 0.0;
};

// Long-time limit of a damped confined run: X(t, m) -> 2m - 1 + mean with
// mean = xbar0 + vbar0 / (2 kappa). Requires the confined variant with
// positive damping (the limit does not exist otherwise).
struct SteadyProfile {
  double mean = 0.0;
  double operator()(double m) const { return 2.0 * m - 1.0 + mean; }
};
SteadyProfile steady_state(const ForceModel& model, double xbar0,
                           double vbar0);
// The n-member equilibrium: the profile evaluated at mass-cell midpoints.
std::vector<double> steady_positions(const SteadyProfile& steady,
                                     const std::vector<double>& masses);

// CDF of the single-jump (Riemann) wave for the undamped unconfined model:
// initial CDF jumping from m_left to m_right at x = 0, all mass at speed v0.
// Attractive coupling (alpha >= 0) gives a shock, repulsive a rarefaction.
double dirac_riemann(double alpha, double m_left, double m_right, double v0,
                     double t, double x);

}  // namespace sticky::oracle
