#pragma once

// Scalar functionals of a particle state: kinetic/potential energy with the
// prescribed-velocity majorant, the damped-confinement Lyapunov functional,
// and the stability gap between two runs.

#include <vector>

#include "sticky1d/forces.hpp"

namespace sticky {

struct EnergyReport {
  double kinetic = 0.0;    // 1/2 sum m v^2 (actual velocities)
  double potential = 0.0;  // variant-dependent interaction + field energy
  double total = 0.0;      // kinetic + potential
  // Same potential with the kinetic part taken from the prescribed
  // velocities; dominates total because pooling is an L2 projection.
  double majorant = 0.0;
};

// sum_{i,j} m_i m_j |x_i - x_j| over all ordered pairs. The first form sorts
// and uses prefix sums (O(n log n)); the second is the direct O(n^2) sum kept
// as a cross-check.
double weighted_pairwise_abs(const std::vector<double>& masses,
                             const std::vector<double>& xs);
double weighted_pairwise_abs_direct(const std::vector<double>& masses,
                                    const std::vector<double>& xs);

// Energy of a state. Potential per variant:
//   unconfined:  (alpha/4) sum m_i m_j |x_i - x_j| + beta sum m_i x_i
//   confined:    (lambda^2/2) sum m_i m_j (1/2 (x_i-x_j)^2 - |x_i-x_j|)
//                + beta sum m_i x_i
// v are the actual (pooled) velocities, u the prescribed ones.
EnergyReport energy(const std::vector<double>& masses,
                    const std::vector<double>& x, const std::vector<double>& v,
                    const std::vector<double>& u, const ForceModel& model);

// Damped-confinement Lyapunov functional
//   sum m_i [ sigma^2 Xt_i^2 + (Ut_i + kappa Xt_i)^2 ]
// with Xt_i = x_i - (theta_{i-1} + theta_i - 1) - xbar and Ut_i = u_i - vbar,
// means taken from the state itself. Zero exactly at the steady profile;
// decays at rate 2 kappa while every block is a singleton. Confined variant
// only; u should be the prescribed velocities.
double lyapunov(const std::vector<double>& masses, const std::vector<double>& x,
                const std::vector<double>& u, const ForceModel& model);

// Distance functional between two states on the same mass vector:
//   lambda^2 sum m (xc1 - xc2)^2 + sum m (uc1 - uc2)^2
// with centered variables xc = x - xbar, uc = u - ubar. Nonincreasing in time
// along paired undamped confined runs.
double stability_gap(const std::vector<double>& masses,
                     const std::vector<double>& x1,
                     const std::vector<double>& u1,
                     const std::vector<double>& x2,
                     const std::vector<double>& u2, double lambda);

}  // namespace sticky
