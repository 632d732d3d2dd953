#include "sticky1d/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sticky::oracle {

namespace {

double sgn(double y) { return y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0); }

}  // namespace

double bgsw_X(double t, double m) {
  double y = m - 0.5;
  if (t < 1.0) {
    if (std::abs(y) <= t / (1.0 + t * t)) return 0.0;
    return y * (1.0 + t * t) - t * sgn(y);
  }
  if (std::abs(y) >= 1.0 / (2.0 * t))
    return y * std::pow(t - 1.0 / (2.0 * std::abs(y)), 2);
  return 0.0;
}

double bgsw_V(double t, double m) {
  double y = m - 0.5;
  bool moving = (t < 1.0) ? std::abs(y) > t / (1.0 + t * t)
                          : std::abs(y) >= 1.0 / (2.0 * t);
  if (!moving) return 0.0;
  return 2.0 * y * t - sgn(y);
}

double bgsw_M(double t, double x) {
  double ax = std::abs(x);
  double w;
  if (t < 1.0) {
    w = (ax + t) / (1.0 + t * t);
  } else {
    w = ((ax + t) + std::sqrt(ax * (ax + 2.0 * t))) / (2.0 * t * t);
  }
  // Right-continuity: at x = 0 the CDF sits at the upper edge of the atom.
  double s = x >= 0.0 ? 1.0 : -1.0;
  return std::clamp(0.5 + s * w, 0.0, 1.0);
}

double bgsw_projected_X(double t, double m) {
  double y = m - 0.5;
  return sgn(y) * std::max((1.0 + t * t) * std::abs(y) - t, 0.0);
}

double bgsw_kinetic(double t) {
  if (t == 0.0) return 1.0;
  double core = std::pow(t - 1.0, 3) / (3.0 * t);
  if (t >= 1.0) return core;
  return core * (1.0 - std::pow(1.0 + t, 3) / std::pow(1.0 + t * t, 3));
}

TwoParticleState two_particle(double t) {
  const double tc = 2.0 - std::sqrt(2.0);
  TwoParticleState s;
  if (t < tc) {
    s.x1 = 2.0 * t - t * t / 4.0;
    s.x2 = 1.0 + t * t / 4.0;
    s.v1 = 2.0 - t / 2.0;
    s.v2 = t / 2.0;
  } else if (t < 2.0) {
    s.x1 = s.x2 = 0.5 + t;
    s.v1 = s.v2 = 1.0;
  } else {
    double d = t - 2.0;
    s.x1 = 0.5 + t - d * d / 4.0;
    s.x2 = 0.5 + t + d * d / 4.0;
    s.v1 = 1.0 - d / 2.0;
    s.v2 = 1.0 + d / 2.0;
  }
  return s;
}

TwoParticleState two_particle_projected(double t) {
  const double root2 = std::sqrt(2.0);
  if (t >= 2.0 - root2 && t <= 2.0 + root2) {
    TwoParticleState s;
    s.x1 = s.x2 = 0.5 + t;
    s.v1 = s.v2 = 1.0;
    return s;
  }
  // Outside the merged window the free flow is already ordered.
  TwoParticleState s;
  s.x1 = 2.0 * t - t * t / 4.0;
  s.x2 = 1.0 + t * t / 4.0;
  s.v1 = 2.0 - t / 2.0;
  s.v2 = t / 2.0;
  return s;
}

ConfinedLinear::ConfinedLinear(double lambda, double kappa)
    : lam_(lambda), kap_(kappa) {
  if (!(lambda > kappa) || kappa < 0.0)
    throw std::invalid_argument("ConfinedLinear: need lambda > kappa >= 0");
  sig_ = std::sqrt(lambda * lambda - kappa * kappa);
  tau_star_ = std::atan(sig_ / (kap_ + lam_ * lam_)) / sig_;
  c_star_ = c(tau_star_);
  conc_ = c_star_ < 0.0;
  if (conc_) {
    // c is strictly decreasing on (0, tau_star); bisect its unique zero.
    double a = 0.0, b = tau_star_;
    for (int it = 0; it < 200 && b - a > 1e-16 * (1.0 + b); ++it) {
      double mid = 0.5 * (a + b);
      (c(mid) > 0.0 ? a : b) = mid;
    }
    tau0_ = 0.5 * (a + b);
    e0_ = -c_dot(tau0_);
    tau1_ = tau0_ + (kap_ > 0.0
                         ? std::log1p(kap_ * e0_ / (lam_ * lam_)) / (2.0 * kap_)
                         : e0_ / (2.0 * lam_ * lam_));
  }
}

double ConfinedLinear::c(double t) const {
  return 2.0 - std::exp(-kap_ * t) *
                   (std::cos(sig_ * t) +
                    ((1.0 + kap_) / sig_) * std::sin(sig_ * t));
}

double ConfinedLinear::c_dot(double t) const {
  return std::exp(-kap_ * t) *
         (-std::cos(sig_ * t) +
          ((kap_ + lam_ * lam_) / sig_) * std::sin(sig_ * t));
}

void ConfinedLinear::require_concentrates() const {
  if (!conc_)
    throw std::logic_error("ConfinedLinear: profile never concentrates");
}

double ConfinedLinear::tau0() const {
  require_concentrates();
  return tau0_;
}

double ConfinedLinear::contact_speed() const {
  require_concentrates();
  return e0_;
}

double ConfinedLinear::tau1() const {
  require_concentrates();
  return tau1_;
}

double ConfinedLinear::X(double t, double m) const {
  if (!conc_ || t < tau0_) return (m - 0.5) * c(t);
  if (t < tau1_) return 0.0;
  double d = t - tau1_;
  double kernel = 1.0 - std::exp(-kap_ * d) *
                            (std::cos(sig_ * d) +
                             (kap_ / sig_) * std::sin(sig_ * d));
  return (2.0 * m - 1.0) * kernel;
}

double ConfinedLinear::V(double t, double m) const {
  if (!conc_ || t < tau0_) return (m - 0.5) * c_dot(t);
  if (t < tau1_) return 0.0;
  double d = t - tau1_;
  return (2.0 * m - 1.0) * std::exp(-kap_ * d) * (lam_ * lam_ / sig_) *
         std::sin(sig_ * d);
}

SteadyProfile steady_state(const ForceModel& model, double xbar0,
                           double vbar0) {
  if (model.variant() != Variant::ConfinedRepulsive || !(model.gamma() > 0.0))
    throw std::invalid_argument(
        "steady_state: requires the confined variant with positive damping");
  SteadyProfile s;
  s.mean = xbar0 + vbar0 / (2.0 * model.kappa());
  return s;
}

std::vector<double> steady_positions(const SteadyProfile& steady,
                                     const std::vector<double>& masses) {
  std::vector<double> xs(masses.size());
  double theta = 0.0;
  for (size_t i = 0; i < masses.size(); ++i) {
    xs[i] = steady(theta + masses[i] / 2.0);
    theta += masses[i];
  }
  return xs;
}

double dirac_riemann(double alpha, double m_left, double m_right, double v0,
                     double t, double x) {
  if (!(0.0 <= m_left && m_left < m_right && m_right <= 1.0))
    throw std::invalid_argument(
        "dirac_riemann: need 0 <= m_left < m_right <= 1");
  if (t <= 0.0) return x < 0.0 ? m_left : m_right;
  if (alpha >= 0.0) {
    double xs = v0 * t - (alpha / 4.0) * t * t * (m_left + m_right - 1.0);
    return x < xs ? m_left : m_right;
  }
  // Rarefaction: invert x = v0 t - (alpha/2) t^2 (m - 1/2) and clamp to the
  // fan's edges.
  double m = 0.5 + 2.0 * (v0 * t - x) / (alpha * t * t);
  return std::clamp(m, m_left, m_right);
}

}  // namespace sticky::oracle
