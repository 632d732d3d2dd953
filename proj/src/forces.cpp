#include "sticky1d/forces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sticky {

namespace {

constexpr double kPhiTaylorCut = 1e-4;

template <class Profile>
double step_mean(const Profile& f) {
  double acc = 0.0;
  for (int i = 0; i < f.pieces(); ++i)
    acc += f.values()[i] * (f.breaks()[i + 1] - f.breaks()[i]);
  return acc;
}

template <class Profile>
double step_sup(const Profile& f, double shift) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v - shift));
  return m;
}

}  // namespace

double phi1(double z) {
  if (std::abs(z) < kPhiTaylorCut)
    return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
  return -std::expm1(-z) / z;
}

double phi2(double z) {
  if (std::abs(z) < kPhiTaylorCut)
    return 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
  return (std::expm1(-z) + z) / (z * z);
}

ForceModel ForceModel::euler_poisson(double alpha, double beta) {
  ForceModel f;
  f.variant_ = Variant::EulerPoisson;
  f.alpha_ = alpha;
  f.beta_ = beta;
  return f;
}

ForceModel ForceModel::damped(double alpha, double beta, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("damped: gamma must be >= 0");
  ForceModel f;
  f.variant_ = Variant::DampedEulerPoisson;
  f.alpha_ = alpha;
  f.beta_ = beta;
  f.gamma_ = gamma;
  return f;
}

ForceModel ForceModel::confined(double lambda, double gamma, double beta) {
  if (!(lambda > 0.0)) throw std::invalid_argument("confined: lambda must be > 0");
  if (gamma < 0.0) throw std::invalid_argument("confined: gamma must be >= 0");
  if (!(lambda > gamma / 2.0))
    throw std::invalid_argument("confined: requires lambda > gamma/2 (underdamped)");
  ForceModel f;
  f.variant_ = Variant::ConfinedRepulsive;
  f.alpha_ = -2.0 * lambda * lambda;
  f.beta_ = beta;
  f.gamma_ = gamma;
  f.lambda_ = lambda;
  f.sigma_ = std::sqrt(lambda * lambda - gamma * gamma / 4.0);
  return f;
}

std::vector<double> ForceModel::discrete_acceleration(
    const std::vector<double>& theta) const {
  if (theta.size() < 2 || std::abs(theta.front()) > 1e-15 ||
      std::abs(theta.back() - 1.0) > 1e-9)
    throw std::invalid_argument("discrete_acceleration: bad mass partition");
  std::vector<double> a(theta.size() - 1);
  for (size_t i = 0; i + 1 < theta.size(); ++i)
    a[i] = -(alpha_ / 2.0) * (theta[i] + theta[i + 1] - 1.0) - beta_;
  return a;
}

MeanState ForceModel::mean_dynamics(double x0, double v0, double t) const {
  MeanState s;
  double z = gamma_ * t;
  s.x = x0 + v0 * t * phi1(z) - beta_ * t * t * phi2(z);
  s.v = std::exp(-z) * v0 - beta_ * t * phi1(z);
  return s;
}

FluxFunction::FluxFunction(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw std::invalid_argument("FluxFunction: empty");
  if (std::abs(segments_.front().lo) > 1e-12 ||
      std::abs(segments_.back().hi - 1.0) > 1e-9)
    throw std::invalid_argument("FluxFunction: segments must tile [0,1]");
  prefix_.resize(segments_.size());
  double acc = 0.0;
  for (size_t k = 0; k < segments_.size(); ++k) {
    const Segment& s = segments_[k];
    if (!(s.hi > s.lo)) throw std::invalid_argument("FluxFunction: empty segment");
    if (k > 0 && std::abs(s.lo - segments_[k - 1].hi) > 1e-12)
      throw std::invalid_argument("FluxFunction: gap between segments");
    acc += (s.hi - s.lo) * 0.5 * (s.v_lo + s.v_hi);
    prefix_[k] = acc;
  }
}

double FluxFunction::operator()(double m) const {
  m = std::clamp(m, 0.0, 1.0);
  size_t k = 0;
  // Segments are few in practice; binary search over right endpoints.
  size_t lo = 0, hi = segments_.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (segments_[mid].hi < m)
      lo = mid + 1;
    else
      hi = mid;
  }
  k = lo;
  const Segment& s = segments_[k];
  double base = (k == 0) ? 0.0 : prefix_[k - 1];
  double slope = (s.v_hi - s.v_lo) / (s.hi - s.lo);
  double d = m - s.lo;
  return base + d * (s.v_lo + 0.5 * slope * d);
}

double FluxFunction::slope(double m) const {
  m = std::clamp(m, 0.0, 1.0);
  size_t lo = 0, hi = segments_.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    // Right limit: segment with s.lo <= m < s.hi (except at m = 1).
    if (segments_[mid].hi <= m)
      lo = mid + 1;
    else
      hi = mid;
  }
  const Segment& s = segments_[lo];
  double sl = (s.v_hi - s.v_lo) / (s.hi - s.lo);
  return s.v_lo + sl * (m - s.lo);
}

FluxFunction FluxFunction::for_initial_data(const ForceModel& model,
                                            const MonotoneStepMap& X0,
                                            const StepProfile& V0, double t) {
  // Coefficients of the density  U(t,m) = cV V0(m) + cX X0(m)
  //                                      + cA A(m) + cLin (2m-1) + c0.
  double cV = 0.0, cX = 0.0, cA = 0.0, cLin = 0.0, c0 = 0.0;
  switch (model.variant()) {
    case Variant::EulerPoisson:
      cV = 1.0;
      cA = t;
      break;
    case Variant::DampedEulerPoisson:
      cV = std::exp(-model.gamma() * t);
      cA = t * phi1(model.gamma() * t);
      break;
    case Variant::ConfinedRepulsive: {
      double kap = model.kappa(), sig = model.sigma(), lam = model.lambda();
      double e = std::exp(-kap * t);
      double C = e * (std::cos(sig * t) - (kap / sig) * std::sin(sig * t));
      double S = e * std::sin(sig * t) / sig;
      double xbar0 = step_mean(X0), vbar0 = step_mean(V0);
      MeanState mean = model.mean_dynamics(xbar0, vbar0, t);
      cV = C;
      cX = -lam * lam * S;
      cLin = lam * lam * S;
      c0 = mean.v - C * vbar0 + lam * lam * S * xbar0;
      break;
    }
  }
  // Merge the breakpoints of both step maps.
  std::vector<double> nodes{0.0};
  {
    size_t i = 0, j = 0;
    const auto& bx = X0.breaks();
    const auto& bv = V0.breaks();
    while (i < bx.size() || j < bv.size()) {
      double b;
      if (j == bv.size() || (i < bx.size() && bx[i] < bv[j]))
        b = bx[i++];
      else if (i == bx.size() || bv[j] < bx[i])
        b = bv[j++];
      else {
        b = bx[i];
        ++i;
        ++j;
      }
      if (b > nodes.back() + 1e-15) nodes.push_back(b);
    }
    nodes.back() = 1.0;
  }
  std::vector<Segment> segs;
  segs.reserve(nodes.size() - 1);
  for (size_t k = 0; k + 1 < nodes.size(); ++k) {
    double lo = nodes[k], hi = nodes[k + 1];
    double mid = 0.5 * (lo + hi);
    double xv = X0(mid), vv = V0(mid);
    auto dens = [&](double m) {
      double A = -(model.alpha() / 2.0) * (2.0 * m - 1.0) - model.beta();
      return cV * vv + cX * xv + cA * A + cLin * (2.0 * m - 1.0) + c0;
    };
    segs.push_back({lo, hi, dens(lo), dens(hi)});
  }
  return FluxFunction(std::move(segs));
}

double FluxFunction::l1_lipschitz_bound(const ForceModel& model,
                                        const MonotoneStepMap& X0,
                                        const StepProfile& V0, double t) {
  // The flux splits as a sum of time coefficients times monotone m-profiles;
  // the W1 speed is bounded by the sum over terms of
  // (sup-norm of the profile derivative) * (sup over [0,t] of the coefficient).
  double supA = std::abs(model.alpha()) / 2.0 + std::abs(model.beta());
  double supV = step_sup(V0, 0.0);
  switch (model.variant()) {
    case Variant::EulerPoisson:
      return supV + t * supA;
    case Variant::DampedEulerPoisson:
      // Coefficient of the acceleration profile is r*phi1(gamma*r), which is
      // increasing in r, so its sup over [0,t] is attained at r = t.
      return supV + t * phi1(model.gamma() * t) * supA;
    case Variant::ConfinedRepulsive: {
      double sig = model.sigma(), lam = model.lambda();
      double xbar0 = step_mean(X0), vbar0 = step_mean(V0);
      double supVc = step_sup(V0, vbar0);
      // sup over pieces and endpoints of |X0(m) - (2m-1) - xbar0|.
      double supX = 0.0;
      for (int i = 0; i < X0.pieces(); ++i) {
        double v = X0.values()[i];
        for (double b : {X0.breaks()[i], X0.breaks()[i + 1]})
          supX = std::max(supX, std::abs(v - (2.0 * b - 1.0) - xbar0));
      }
      // Mean velocity obeys |vbar(r)| <= |vbar0| + |beta| r; the fluctuation
      // kernels satisfy |e^{-kr}(cos(sr) + (k/s) sin(sr))| <= lam/sig and
      // |e^{-kr} sin(sr)/sig| <= 1/sig, with time derivatives bounded by
      // lam^2/sig and lam/sig respectively.
      return (std::abs(vbar0) + std::abs(model.beta()) * t) +
             (lam / sig) * supVc + (lam * lam / sig) * supX;
    }
  }
  return supV + t * supA;
}

}  // namespace sticky
