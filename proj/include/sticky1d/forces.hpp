#pragma once

#include <vector>

#include "sticky1d/measures.hpp"

namespace sticky {

enum class Variant { EulerPoisson, DampedEulerPoisson, ConfinedRepulsive };

// (1 - e^{-z}) / z, stable near 0.
double phi1(double z);
// (e^{-z} - 1 + z) / z^2, stable near 0.
double phi2(double z);

struct MeanState {
  double x = 0.0;
  double v = 0.0;
};

// Interaction model for the particle system.  The position-independent part
// of the acceleration felt by member i carrying the cumulative-mass interval
// (theta_{i-1}, theta_i) is
//   a_i = -(alpha/2) (theta_{i-1} + theta_i - 1) - beta,
// plus -gamma * v_i linear drag when gamma > 0.  The confined model adds a
// spring -lambda^2 (x_i - xbar) toward the center of mass whose strength
// matches a pairwise repulsion (alpha = -2 lambda^2), so its
// position-independent part fits the same formula.
class ForceModel {
 public:
  static ForceModel euler_poisson(double alpha, double beta);
  static ForceModel damped(double alpha, double beta, double gamma);
  // Requires lambda > gamma/2 >= 0 (underdamped oscillation).
  static ForceModel confined(double lambda, double gamma, double beta);

  Variant variant() const { return variant_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double kappa() const { return gamma_ / 2.0; }
  double lambda() const { return lambda_; }
  // sqrt(lambda^2 - kappa^2); only meaningful for the confined variant.
  double sigma() const { return sigma_; }

  // Position-independent accelerations for the mass partition theta
  // (size n+1, theta[0] = 0, theta[n] = 1): one value per member.
  std::vector<double> discrete_acceleration(const std::vector<double>& theta) const;

  // Mean position / velocity at time t from (x0, v0) at time 0.  The mean
  // obeys x'' = -gamma x' - beta for every variant: interactions cancel in
  // the mean, and the confined spring pulls toward the center of mass, so
  // the mean never feels it.
  MeanState mean_dynamics(double x0, double v0, double t) const;

 private:
  Variant variant_ = Variant::EulerPoisson;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double gamma_ = 0.0;
  double lambda_ = 0.0;
  double sigma_ = 0.0;
};

// Flux m -> integral over [0, m] of a piecewise-linear density on [0, 1]
// (jumps allowed at segment ends).  This is the scalar-conservation-law flux
// whose Rankine-Hugoniot and Oleinik conditions the particle fronts must
// satisfy; the density is the velocity profile in mass coordinates.
class FluxFunction {
 public:
  struct Segment {
    double lo = 0.0, hi = 0.0;   // mass interval
    double v_lo = 0.0, v_hi = 0.0;  // density at the ends, linear between
  };

  // Segments must tile [0, 1] in order.
  explicit FluxFunction(std::vector<Segment> segments);

  // Flux value at mass coordinate m in [0, 1], anchored so flux(0) = 0.
  double operator()(double m) const;
  // Density at m; right limit at interior nodes, left limit at m = 1.
  double slope(double m) const;

  const std::vector<Segment>& segments() const { return segments_; }

  // Velocity-in-mass profile at time t of the collisionless flow started
  // from step data (X0, V0):
  //   EP:       U(t,m) = V0(m) + t A(m)
  //   damped:   U(t,m) = e^{-gamma t} V0(m) + t phi1(gamma t) A(m)
  //   confined: U(t,m) = vbar(t)
  //             + e^{-kappa t}(cos(sigma t) - (kappa/sigma) sin(sigma t)) (V0(m) - vbar0)
  //             - lambda^2 e^{-kappa t} (sin(sigma t)/sigma) (X0(m) - (2m-1) - xbar0)
  // with A(m) = -(alpha/2)(2m-1) - beta.  Before any collision this equals
  // the true velocity profile, and its prefix integrals match the prefix
  // sums of the member velocities exactly.
  static FluxFunction for_initial_data(const ForceModel& model,
                                       const MonotoneStepMap& X0,
                                       const StepProfile& V0, double t);

  // Time-Lipschitz constant for the evolving distribution function in the
  // L1(R) norm (equivalently, for the W1 distance between the measures):
  // for 0 <= t1 <= t2 <= t,  W1(rho(t1), rho(t2)) <= (t2 - t1) * bound.
  // Nondecreasing in t, so the value at the right endpoint covers the
  // whole interval.
  static double l1_lipschitz_bound(const ForceModel& model,
                                   const MonotoneStepMap& X0,
                                   const StepProfile& V0, double t);

 private:
  std::vector<Segment> segments_;
  std::vector<double> prefix_;  // flux at segment right ends
};

}  // namespace sticky
