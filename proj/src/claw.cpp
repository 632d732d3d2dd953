#include "sticky1d/claw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sticky {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Composite Simpson rule with positive weights; exact for cubics per panel,
// and always a convex combination of samples (so averages of bounded
// integrands stay bounded).
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
  double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i)
    acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace

double volpert_average(const std::function<double(double)>& f, double m_left,
                       double m_right) {
  require(m_left <= m_right, "volpert_average: inverted jump interval");
  if (m_right - m_left <= 1e-14) return f(0.5 * (m_left + m_right));
  return simpson(f, m_left, m_right, 64) / (m_right - m_left);
}

double volpert_average(const FluxFunction& flux, double m_left,
                       double m_right) {
  require(m_left <= m_right, "volpert_average: inverted jump interval");
  if (m_right - m_left <= 1e-14) return flux.slope(0.5 * (m_left + m_right));
  return (flux(m_right) - flux(m_left)) / (m_right - m_left);
}

double rh_speed(const FluxFunction& flux, double m_left, double m_right) {
  require(m_left < m_right, "rh_speed: zero jump");
  return (flux(m_right) - flux(m_left)) / (m_right - m_left);
}

SingleJumpWave::SingleJumpWave(const ForceModel& model, double m_left,
                               double m_right, double v0)
    : model_(model), ml_(m_left), mr_(m_right), v0_(v0) {
  require(model.variant() == Variant::EulerPoisson,
          "SingleJumpWave: only the undamped unconfined model is supported");
  require(0.0 <= ml_ && ml_ < mr_ && mr_ <= 1.0,
          "SingleJumpWave: need 0 <= m_left < m_right <= 1");
  shock_ = model.alpha() >= 0.0;
}

FluxFunction SingleJumpWave::flux_at(double t) const {
  return FluxFunction::for_initial_data(model_, MonotoneStepMap({0.0, 1.0}, {0.0}),
                                        StepProfile::constant(v0_), t);
}

double SingleJumpWave::speed(double t) const {
  require(shock_, "SingleJumpWave::speed: wave is a rarefaction fan");
  return rh_speed(flux_at(t), ml_, mr_);
}

double SingleJumpWave::position(double t) const {
  require(shock_, "SingleJumpWave::position: wave is a rarefaction fan");
  if (t <= 0.0) return 0.0;
  // The speed is affine in time, so a low-order rule integrates it exactly.
  return simpson([this](double s) { return rh_speed(flux_at(s), ml_, mr_); },
                 0.0, t, 8);
}

double SingleJumpWave::characteristic(double t, double m) const {
  if (t <= 0.0) return 0.0;
  return simpson([this, m](double s) { return flux_at(s).slope(m); }, 0.0, t,
                 8);
}

double SingleJumpWave::profile(double t, double x) const {
  if (t <= 0.0) return x < 0.0 ? ml_ : mr_;
  if (shock_) return x < position(t) ? ml_ : mr_;
  double xl = characteristic(t, ml_), xr = characteristic(t, mr_);
  if (x < xl) return ml_;
  if (x >= xr) return mr_;
  // The characteristic map is strictly increasing in m for a repulsive
  // coupling; invert it by bisection.
  double lo = ml_, hi = mr_;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    if (characteristic(t, mid) <= x)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

SingleJumpWave riemann_solve(const ForceModel& model, double m_left,
                             double m_right, double v0) {
  return SingleJumpWave(model, m_left, m_right, v0);
}

ValidationReport validate_entropy(const std::vector<Snapshot>& snapshots,
                                  const std::vector<double>& masses,
                                  double speed_tol, double margin_tol) {
  const double inf = std::numeric_limits<double>::infinity();
  ValidationReport report;
  report.min_margin = inf;

  size_t n = masses.size();
  std::vector<double> theta(n + 1, 0.0);
  for (size_t i = 0; i < n; ++i) theta[i + 1] = theta[i] + masses[i];
  theta[n] = 1.0;

  for (const Snapshot& snap : snapshots) {
    require(snap.u.size() == n && snap.x.size() == n,
            "validate_entropy: snapshot size does not match masses");
    int index = 0;
    for (size_t bi = 0; bi < snap.blocks.size(); ++bi) {
      const Block& b = snap.blocks[bi];
      FrontRow row;
      row.t = snap.t;
      row.front_index = index++;
      row.x = snap.x[b.lo];
      row.m_left = theta[b.lo];
      row.m_right = theta[b.hi + 1];
      row.speed = snap.fd_speed[bi];

      // The flux increment over a member's mass cell is mass * prescribed
      // velocity, so the Rankine-Hugoniot speed over the jump is the
      // mass-weighted mean of the member velocities.
      double jump = row.m_right - row.m_left;
      double total = 0.0;
      for (int j = b.lo; j <= b.hi; ++j) total += masses[j] * snap.u[j];
      double srh = total / jump;
      row.rh_residual = std::abs(row.speed - srh);

      // Oleinik E-condition: every chord of the flux from the jump's left
      // edge must lie above the secant, every chord to the right edge below.
      // Piecewise-linear flux makes the interior member breakpoints
      // sufficient test points.
      row.oleinik_margin = inf;
      double prefix = 0.0;
      for (int j = b.lo; j < b.hi; ++j) {
        prefix += masses[j] * snap.u[j];
        double k = theta[j + 1];
        double chord_left = prefix / (k - row.m_left);
        double chord_right = (total - prefix) / (row.m_right - k);
        double margin = std::min(chord_left - srh, srh - chord_right);
        row.oleinik_margin = std::min(row.oleinik_margin, margin);
      }

      row.pass = row.rh_residual <= speed_tol &&
                 !(row.oleinik_margin < -margin_tol);
      if (!row.pass) ++report.failures;
      report.max_rh_residual = std::max(report.max_rh_residual, row.rh_residual);
      report.min_margin = std::min(report.min_margin, row.oleinik_margin);
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace sticky
