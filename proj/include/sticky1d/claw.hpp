#pragma once

// Scalar-conservation-law view of the particle flow: the evolving CDF is a
// weak solution of  d/dt M + d/dx U(t, M) = 0  whose jumps must travel at
// Rankine-Hugoniot speed and satisfy the Oleinik E-condition. This module
// checks simulator output against both, computes Vol'pert averages of
// piecewise-constant densities across jumps, and solves the single-jump
// (Riemann) problem independently of the event-driven evolution.

#include <functional>
#include <vector>

#include "sticky1d/dynamics.hpp"
#include "sticky1d/forces.hpp"

namespace sticky {

// Average of f over the jump interval [m_left, m_right] of a BV composition:
// the difference quotient of the primitive, or f itself at a continuity
// point. The function overload integrates numerically (f must be evaluable
// on the closed interval); the flux overload uses the exact piecewise-linear
// primitive.
double volpert_average(const std::function<double(double)>& f, double m_left,
                       double m_right);
double volpert_average(const FluxFunction& flux, double m_left, double m_right);

// Rankine-Hugoniot speed [[flux]]/[[M]] across a genuine jump
// (m_left < m_right required).
double rh_speed(const FluxFunction& flux, double m_left, double m_right);

// Entropy wave emitted by a single initial jump of the CDF from m_left to
// m_right at x = 0, all mass moving at speed v0, under the undamped
// unconfined force model: a shock when the pairwise coupling is attractive
// (alpha >= 0), a rarefaction fan when repulsive. Shock positions integrate
// the Rankine-Hugoniot speed; fan profiles invert the characteristic map by
// bisection.
class SingleJumpWave {
 public:
  SingleJumpWave(const ForceModel& model, double m_left, double m_right,
                 double v0);

  bool shock() const { return shock_; }
  double m_left() const { return ml_; }
  double m_right() const { return mr_; }

  // Flux profile of the wave's initial data at time t.
  FluxFunction flux_at(double t) const;

  // Shock trajectory and speed (shock waves only).
  double position(double t) const;
  double speed(double t) const;

  // M(t, x), right-continuous in x; valid for both wave types.
  double profile(double t, double x) const;

  // Position of the mass coordinate m at time t (characteristic map).
  double characteristic(double t, double m) const;

 private:
  ForceModel model_;
  double ml_ = 0.0, mr_ = 1.0, v0_ = 0.0;
  bool shock_ = false;
};

SingleJumpWave riemann_solve(const ForceModel& model, double m_left,
                             double m_right, double v0);

// One validated front (one block of the simulation) at one sample time.
struct FrontRow {
  double t = 0.0;
  int front_index = 0;  // position of the block among the time's fronts
  double x = 0.0;       // front location
  double m_left = 0.0, m_right = 0.0;  // CDF values astride the jump
  double speed = 0.0;        // measured front speed (finite differences)
  double rh_residual = 0.0;  // |measured - Rankine-Hugoniot|
  // Worst chord-versus-secant gap of the flux over the jump interval,
  // minimized over interior member breakpoints; +infinity when the front
  // carries a single member (no interior breakpoints).
  double oleinik_margin = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<FrontRow> rows;
  double max_rh_residual = 0.0;
  double min_margin = 0.0;  // +infinity if every front is a singleton
  int failures = 0;

  bool all_pass() const { return failures == 0; }
};

// Checks every block of every snapshot: the measured front speed must match
// the Rankine-Hugoniot speed (the mass-weighted mean member velocity), and
// the flux chords over each jump must lie on the concave side of the secant
// (Oleinik E-condition), both within the given tolerances. A negative margin
// within margin_tol still passes (contact configurations sit exactly on the
// boundary of the admissible cone).
ValidationReport validate_entropy(const std::vector<Snapshot>& snapshots,
                                  const std::vector<double>& masses,
                                  double speed_tol = 1e-9,
                                  double margin_tol = 1e-9);

}  // namespace sticky
