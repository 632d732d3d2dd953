#include "sticky1d/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sticky {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFdStep = 1e-5;

double graze_gap_tol(double scale) { return 1e-9 * (1.0 + std::abs(scale)); }

// Closed-form state at absolute time t of an entity that at time t0 sat at
// (x0, v0), has position-independent acceleration abar, and carries the mass
// interval with offset s = theta_lo + theta_hi - 1. The global mean anchors
// (xbar0, vbar0) refer to time zero.
void eval_motion(const ForceModel& mdl, double xbar0, double vbar0, double s,
                 double t0, double x0, double v0, double abar, double t,
                 double* x_out, double* v_out) {
  const double dt = t - t0;
  switch (mdl.variant()) {
    case Variant::EulerPoisson: {
      *x_out = x0 + v0 * dt + 0.5 * abar * dt * dt;
      *v_out = v0 + abar * dt;
      return;
    }
    case Variant::DampedEulerPoisson: {
      const double z = mdl.gamma() * dt;
      *x_out = x0 + v0 * dt * phi1(z) + abar * dt * dt * phi2(z);
      *v_out = std::exp(-z) * v0 + abar * dt * phi1(z);
      return;
    }
    case Variant::ConfinedRepulsive: {
      const double kap = mdl.kappa(), sig = mdl.sigma(), lam = mdl.lambda();
      const MeanState m0 = mdl.mean_dynamics(xbar0, vbar0, t0);
      const MeanState mt = mdl.mean_dynamics(xbar0, vbar0, t);
      const double h0 = x0 - s - m0.x;
      const double hd0 = v0 - m0.v;
      const double e = std::exp(-kap * dt);
      const double cs = std::cos(sig * dt), sn = std::sin(sig * dt);
      *x_out = s + mt.x + e * (h0 * cs + ((hd0 + kap * h0) / sig) * sn);
      *v_out = mt.v + e * (hd0 * cs - ((lam * lam * h0 + kap * hd0) / sig) * sn);
      return;
    }
  }
}

// Bracketed bisection; requires f(a) > 0 >= f(b).
template <class F>
double bisect_root(const F& f, double a, double b) {
  for (int it = 0; it < 120 && (b - a) > kRootTol * (1.0 + std::abs(b)); ++it) {
    double m = 0.5 * (a + b);
    if (f(m) > 0.0)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

// Real roots of c2 x^2 + c1 x + c0, numerically stable.
void quad_roots(double c2, double c1, double c0, double out[2], int* count) {
  *count = 0;
  if (std::abs(c2) < 1e-14 * (std::abs(c1) + std::abs(c0) + 1.0)) {
    if (c1 != 0.0) out[(*count)++] = -c0 / c1;
    return;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = (c1 >= 0.0) ? -0.5 * (c1 + sq) : -0.5 * (c1 - sq);
  out[(*count)++] = q / c2;
  if (q != 0.0)
    out[(*count)++] = c0 / q;
  else
    out[(*count)++] = 0.0;
}

}  // namespace

const char* to_string(Event::Kind k) {
  switch (k) {
    case Event::Kind::Collision:
      return "collision";
    case Event::Kind::Split:
      return "split";
    case Event::Kind::Graze:
      return "graze";
  }
  return "unknown";
}

ParticleSystem::ParticleSystem(const ParticleSeed& seed, const ForceModel& model)
    : model_(model) {
  const std::size_t n = seed.masses.size();
  if (n == 0 || seed.positions.size() != n || seed.velocities.size() != n)
    throw std::invalid_argument("ParticleSystem: seed arrays empty or mismatched");
  double total = 0.0;
  for (double m : seed.masses) {
    if (!(m > 0.0))
      throw std::invalid_argument("ParticleSystem: masses must be positive");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("ParticleSystem: masses must sum to 1");

  mass_ = seed.masses;
  theta_.resize(n + 1);
  theta_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) theta_[i + 1] = theta_[i] + mass_[i];
  theta_[n] = 1.0;
  accel_ = model_.discrete_acceleration(theta_);
  u0_ = seed.velocities;

  std::vector<double> pos = seed.positions;
  for (std::size_t i = 1; i < n; ++i) {
    if (pos[i] < pos[i - 1]) {
      if (pos[i - 1] - pos[i] > pos_tol(std::max(std::abs(pos[i]), std::abs(pos[i - 1]))))
        throw std::invalid_argument("ParticleSystem: positions must be nondecreasing");
      pos[i] = pos[i - 1];
    }
  }
  xbar0_ = vbar0_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xbar0_ += mass_[i] * pos[i];
    vbar0_ += mass_[i] * u0_[i];
  }

  // Members sharing a position pool their velocities monotonically; any
  // dissipative pooling is itself a time-zero collision.
  const BlockStructure groups = blocks_from_positions(pos);
  for (const MemberRange& grp : groups.groups) {
    if (grp.size() == 1) {
      Block b;
      b.lo = b.hi = grp.lo;
      b.x0 = pos[grp.lo];
      b.v0 = u0_[grp.lo];
      b.abar = accel_[grp.lo];
      b.mass = mass_[grp.lo];
      blocks_.push_back(b);
      continue;
    }
    WeightedVector wv;
    double keb = 0.0;
    for (int j = grp.lo; j <= grp.hi; ++j) {
      wv.weights.push_back(mass_[j]);
      wv.values.push_back(u0_[j]);
      keb += 0.5 * mass_[j] * u0_[j] * u0_[j];
    }
    const ConeProjection proj = project_cone_pools(wv);
    // Pools with matching velocities at a one-point contact still form one
    // block: attracting accelerations must act on the union, and the
    // break-up pass below restores separate parts when they in fact repel.
    std::vector<MemberRange> pools;
    for (const MemberRange& p : proj.pools.groups) {
      if (!pools.empty() &&
          std::abs(proj.values[p.lo] - proj.values[pools.back().lo]) <= kVelTol)
        pools.back().hi = p.hi;
      else
        pools.push_back(p);
    }
    double kea = 0.0;
    for (const MemberRange& p : pools) {
      Block b;
      b.lo = grp.lo + p.lo;
      b.hi = grp.lo + p.hi;
      b.x0 = pos[grp.lo];
      b.mass = theta_[b.hi + 1] - theta_[b.lo];
      double vsum = 0.0, asum = 0.0;
      for (int j = b.lo; j <= b.hi; ++j) {
        vsum += mass_[j] * u0_[j];
        asum += mass_[j] * accel_[j];
      }
      b.v0 = vsum / b.mass;
      b.abar = asum / b.mass;
      blocks_.push_back(b);
      kea += 0.5 * b.mass * b.v0 * b.v0;
    }
    if (keb - kea > 1e-15 * (1.0 + keb)) {
      Event ev;
      ev.t = 0.0;
      ev.kind = Event::Kind::Collision;
      ev.lo = grp.lo;
      ev.hi = grp.hi;
      ev.ke_before = keb;
      ev.ke_after = kea;
      ev.detail = "initial";
      events_.push_back(ev);
    }
  }
  rebuild_member_index();
  event_budget_ = 10 * n * n + 1000;

  // Marginal contacts in the data break up immediately.
  recompute_roots();
  double first_split = kInf;
  for (double v : split_time_) first_split = std::min(first_split, v);
  if (first_split <= kEventTol) process_events_at(0.0, true);
}

void ParticleSystem::rebuild_member_index() {
  block_of_.assign(mass_.size(), 0);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (int j = blocks_[b].lo; j <= blocks_[b].hi; ++j) block_of_[j] = static_cast<int>(b);
}

double ParticleSystem::block_position(const Block& b, double t) const {
  double x = 0.0, v = 0.0;
  eval_motion(model_, xbar0_, vbar0_, theta_[b.lo] + theta_[b.hi + 1] - 1.0, b.t0,
              b.x0, b.v0, b.abar, t, &x, &v);
  return x;
}

double ParticleSystem::block_velocity(const Block& b, double t) const {
  double x = 0.0, v = 0.0;
  eval_motion(model_, xbar0_, vbar0_, theta_[b.lo] + theta_[b.hi + 1] - 1.0, b.t0,
              b.x0, b.v0, b.abar, t, &x, &v);
  return v;
}

double ParticleSystem::member_prescribed(int j, double t) const {
  const Block& b = blocks_[block_of_[j]];
  const double dt = t - b.t0;
  const double g = model_.gamma();
  const double vb = block_velocity(b, t);
  const double d0 = u0_[j] - b.v0;
  const double K = accel_[j] - b.abar;
  return vb + std::exp(-g * dt) * d0 + K * dt * phi1(g * dt);
}

std::vector<double> ParticleSystem::member_positions() const {
  std::vector<double> out(mass_.size());
  for (const Block& b : blocks_) {
    const double x = block_position(b, t_);
    for (int j = b.lo; j <= b.hi; ++j) out[j] = x;
  }
  return out;
}

std::vector<double> ParticleSystem::member_velocities() const {
  std::vector<double> out(mass_.size());
  for (const Block& b : blocks_) {
    const double v = block_velocity(b, t_);
    for (int j = b.lo; j <= b.hi; ++j) out[j] = v;
  }
  return out;
}

std::vector<double> ParticleSystem::member_prescribed_all() const {
  std::vector<double> out(mass_.size());
  for (std::size_t j = 0; j < mass_.size(); ++j)
    out[j] = member_prescribed(static_cast<int>(j), t_);
  return out;
}

Snapshot ParticleSystem::snapshot() const {
  Snapshot s;
  s.t = t_;
  s.x = member_positions();
  s.v = member_velocities();
  s.u = member_prescribed_all();
  s.blocks = blocks_;
  s.fd_speed.reserve(blocks_.size());
  for (const Block& b : blocks_) {
    double sp;
    if (t_ - b.t0 >= kFdStep) {
      sp = (block_position(b, t_ + kFdStep) - block_position(b, t_ - kFdStep)) /
           (2.0 * kFdStep);
    } else {
      sp = (-3.0 * block_position(b, t_) + 4.0 * block_position(b, t_ + kFdStep) -
            block_position(b, t_ + 2.0 * kFdStep)) /
           (2.0 * kFdStep);
    }
    s.fd_speed.push_back(sp);
  }
  return s;
}

double ParticleSystem::kinetic_in_range(int lo, int hi, double t) const {
  double ke = 0.0;
  for (int b = block_of_[lo]; b <= block_of_[hi]; ++b) {
    const double v = block_velocity(blocks_[b], t);
    ke += 0.5 * blocks_[b].mass * v * v;
  }
  return ke;
}

double ParticleSystem::split_roots(const Block& b, std::vector<NodeRoot>* out) const {
  if (b.size() == 1) return kInf;
  const double g = model_.gamma();
  double S = 0.0, P = 0.0, best = kInf;
  for (int l = 0; l + 1 < b.size(); ++l) {
    const int j = b.lo + l;
    S += mass_[j] * (u0_[j] - b.v0);
    P += mass_[j] * (accel_[j] - b.abar);
    if (P < 0.0) {
      const double zstar = -std::max(S, 0.0) / P;
      const double delta = (g > kSmallDamping) ? std::log1p(g * zstar) / g : zstar;
      if (out) out->push_back({l + 1, delta});
      best = std::min(best, delta);
    }
  }
  return best;
}

double ParticleSystem::collision_root(const Block& bl, const Block& br) const {
  const double H = horizon_ - t_;
  if (!(H > 0.0)) return kInf;
  double xl, vl, xr, vr;
  eval_motion(model_, xbar0_, vbar0_, theta_[bl.lo] + theta_[bl.hi + 1] - 1.0, bl.t0,
              bl.x0, bl.v0, bl.abar, t_, &xl, &vl);
  eval_motion(model_, xbar0_, vbar0_, theta_[br.lo] + theta_[br.hi + 1] - 1.0, br.t0,
              br.x0, br.v0, br.abar, t_, &xr, &vr);
  const double gap0 = xr - xl;
  const double relv = vr - vl;
  const double scale = std::max(std::abs(xl), std::abs(xr));
  const double ptol = pos_tol(scale);
  const double gtol = graze_gap_tol(scale);
  if (gap0 <= ptol) {
    if (relv < -1e-11) return t_;  // unresolved contact: due now
    if (relv <= 1e-11) {
      // Tangential contact: a second-order approach (attracting
      // accelerations) is due immediately; separation is left to the
      // root scan below.
      const double probe = 1e-5 * (1.0 + std::abs(t_));
      double xlp, vlp, xrp, vrp;
      eval_motion(model_, xbar0_, vbar0_, theta_[bl.lo] + theta_[bl.hi + 1] - 1.0,
                  bl.t0, bl.x0, bl.v0, bl.abar, t_ + probe, &xlp, &vlp);
      eval_motion(model_, xbar0_, vbar0_, theta_[br.lo] + theta_[br.hi + 1] - 1.0,
                  br.t0, br.x0, br.v0, br.abar, t_ + probe, &xrp, &vrp);
      if (xrp - xlp < -10.0 * ptol) return t_;
    }
  }

  const bool exponential = model_.gamma() > kSmallDamping;
  switch (model_.variant()) {
    case Variant::ConfinedRepulsive: {
      const double kap = model_.kappa(), sig = model_.sigma();
      const double ds = (theta_[br.lo] + theta_[br.hi + 1]) -
                        (theta_[bl.lo] + theta_[bl.hi + 1]);
      const double A = gap0 - ds;
      const double B = (relv + kap * A) / sig;
      const auto f = [&](double d) {
        return ds + std::exp(-kap * d) * (A * std::cos(sig * d) + B * std::sin(sig * d));
      };
      const auto fneg = [&](double d) {  // -f' for minimum bracketing
        return -std::exp(-kap * d) * ((sig * B - kap * A) * std::cos(sig * d) -
                                      (sig * A + kap * B) * std::sin(sig * d));
      };
      const double step = std::min(0.01, M_PI / (50.0 * sig));
      double a = kEventTol;
      if (gap0 <= ptol) {
        // Freshly separated contact: skip the zone where the analytic gap is
        // below floating-point noise (gap ~ lambda^2 ds d^2 / 2 there).
        const double curv = model_.lambda() * model_.lambda() * std::max(ds, 1e-12);
        const double skip = std::sqrt(2.4e-12 * (1.0 + std::abs(ds)) / curv);
        a = std::clamp(skip, kEventTol, std::min(0.01, M_PI / (4.0 * sig)));
      }
      double fa = f(a);
      while (fa <= 0.0 && a < H) {  // exiting a microscopic overlap
        a += step;
        fa = f(a);
      }
      double fpa = -fneg(a);
      while (a < H) {
        const double b = std::min(a + step, H);
        const double fb = f(b);
        const double fpb = -fneg(b);
        if (fa > 0.0 && fb <= 0.0) return t_ + bisect_root(f, a, b);
        if (fpa < 0.0 && fpb >= 0.0) {
          const double dm = bisect_root(fneg, a, b);
          const double val = f(dm);
          if (val <= 0.0) return t_ + bisect_root(f, a, dm);
          if (dm > kEventTol && val <= gtol) return t_ + dm;
        }
        a = b;
        fa = fb;
        fpa = fpb;
      }
      return kInf;
    }
    case Variant::DampedEulerPoisson:
      if (exponential) {
        const double g = model_.gamma();
        const double C1 = (br.abar - bl.abar) / g;
        const double wl =
            (bl.v0 - bl.abar / g) * std::exp(-g * (t_ - bl.t0));
        const double wr =
            (br.v0 - br.abar / g) * std::exp(-g * (t_ - br.t0));
        const double C2 = -(wr - wl) / g;
        const double C0 = gap0 - C2;
        const auto f = [&](double d) { return C0 + C1 * d + C2 * std::exp(-g * d); };
        double dm = kInf;
        if (C2 != 0.0) {
          const double ratio = C1 / (g * C2);
          if (ratio > 0.0) dm = -std::log(ratio) / g;
        }
        std::vector<double> bounds{kEventTol};
        if (dm > kEventTol && dm < H) bounds.push_back(dm);
        bounds.push_back(H);
        for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
          const double a = bounds[s], b = bounds[s + 1];
          if (!(b > a)) continue;
          if (f(a) > 0.0 && f(b) <= 0.0) return t_ + bisect_root(f, a, b);
        }
        if (C2 > 0.0 && dm > kEventTol && dm < H) {  // interior minimum
          const double val = f(dm);
          if (val > 0.0 && val <= gtol) return t_ + dm;
        }
        return kInf;
      }
      [[fallthrough]];  // gamma == 0 reduces to the quadratic flow
    case Variant::EulerPoisson: {
      const double c2 = 0.5 * (br.abar - bl.abar);
      const double c1 = relv;
      const double c0 = gap0;
      double roots[2];
      int count = 0;
      quad_roots(c2, c1, c0, roots, &count);
      double best = kInf;
      for (int i = 0; i < count; ++i)
        if (std::isfinite(roots[i]) && roots[i] > kEventTol && roots[i] <= H)
          best = std::min(best, roots[i]);
      if (best == kInf && c2 > 0.0) {
        const double dv = -c1 / (2.0 * c2);
        if (dv > kEventTol && dv <= H) {
          const double val = c0 + dv * (c1 + c2 * dv);
          if (val > 0.0 && val <= gtol) best = dv;
        }
      }
      return best == kInf ? kInf : t_ + best;
    }
  }
  return kInf;
}

void ParticleSystem::recompute_roots() {
  const std::size_t B = blocks_.size();
  split_time_.assign(B, kInf);
  for (std::size_t b = 0; b < B; ++b) {
    const double d = split_roots(blocks_[b], nullptr);
    if (d < kInf) split_time_[b] = blocks_[b].t0 + d;
  }
  pair_time_.assign(B > 0 ? B - 1 : 0, kInf);
  for (std::size_t i = 0; i + 1 < B; ++i)
    pair_time_[i] = collision_root(blocks_[i], blocks_[i + 1]);
  roots_dirty_ = false;
}

void ParticleSystem::process_events_at(double tau) { process_events_at(tau, false); }

void ParticleSystem::process_events_at(double tau, bool constructing) {
  t_ = std::max(t_, tau);
  tau = t_;

  struct GroupRec {
    int mlo = 0, mhi = 0;
    double ke_before = 0.0;
    std::vector<Block> saved;
    std::vector<double> saved_u0;
  };
  std::vector<GroupRec> recs;
  std::vector<char> pending(blocks_.size(), 0);

  // ---- contacts: pool prescribed velocities over each due contact chain ----
  bool any_due = false;
  std::vector<char> due(pair_time_.size(), 0);
  for (std::size_t i = 0; i < pair_time_.size(); ++i) {
    due[i] = pair_time_[i] <= tau + kEventTol;
    any_due |= due[i];
  }
  if (any_due) {
    std::vector<Block> nb;
    std::vector<char> npend;
    nb.reserve(blocks_.size());
    std::size_t b = 0;
    while (b < blocks_.size()) {
      if (b < due.size() && due[b]) {
        std::size_t k = b;
        while (k < due.size() && due[k]) ++k;  // pairs b..k-1 due: blocks b..k
        GroupRec rec;
        rec.mlo = blocks_[b].lo;
        rec.mhi = blocks_[k].hi;
        rec.ke_before = kinetic_in_range(rec.mlo, rec.mhi, tau);
        rec.saved.assign(blocks_.begin() + b, blocks_.begin() + k + 1);
        rec.saved_u0.assign(u0_.begin() + rec.mlo, u0_.begin() + rec.mhi + 1);
        double M = 0.0, xm = 0.0;
        for (std::size_t q = b; q <= k; ++q) {
          M += blocks_[q].mass;
          xm += blocks_[q].mass * block_position(blocks_[q], tau);
        }
        const double xc = xm / M;
        WeightedVector wv;
        for (int j = rec.mlo; j <= rec.mhi; ++j) {
          wv.weights.push_back(mass_[j]);
          wv.values.push_back(member_prescribed(j, tau));
        }
        const ConeProjection proj = project_cone_pools(wv);
        for (int j = rec.mlo; j <= rec.mhi; ++j) u0_[j] = wv.values[j - rec.mlo];
        // Same-velocity pools at a one-point contact act as one block (the
        // break-up pass separates them again when they in fact repel, which
        // is exactly the grazing outcome).
        std::vector<MemberRange> pools;
        for (const MemberRange& p : proj.pools.groups) {
          if (!pools.empty() &&
              std::abs(proj.values[p.lo] - proj.values[pools.back().lo]) <=
                  kVelTol)
            pools.back().hi = p.hi;
          else
            pools.push_back(p);
        }
        for (const MemberRange& p : pools) {
          Block blk;
          blk.lo = rec.mlo + p.lo;
          blk.hi = rec.mlo + p.hi;
          blk.t0 = tau;
          blk.x0 = xc;
          blk.mass = theta_[blk.hi + 1] - theta_[blk.lo];
          double vsum = 0.0, asum = 0.0;
          for (int j = blk.lo; j <= blk.hi; ++j) {
            vsum += mass_[j] * wv.values[j - rec.mlo];
            asum += mass_[j] * accel_[j];
          }
          blk.v0 = vsum / blk.mass;
          blk.abar = asum / blk.mass;
          nb.push_back(blk);
          npend.push_back(1);
        }
        recs.push_back(std::move(rec));
        b = k + 1;
      } else {
        nb.push_back(blocks_[b]);
        npend.push_back(0);
        ++b;
      }
    }
    blocks_ = std::move(nb);
    pending = std::move(npend);
    rebuild_member_index();
  }

  // ---- break-ups: split every block whose prefix deviation hits zero ----
  for (int pass = 0; pass <= member_count() + 1; ++pass) {
    bool any_split = false;
    std::vector<Block> nb;
    std::vector<char> npend;
    nb.reserve(blocks_.size() + 4);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const Block& blk = blocks_[b];
      std::vector<NodeRoot> nodes;
      const double mind = split_roots(blk, &nodes);
      const double due_delta = (tau - blk.t0) + kEventTol;
      if (!(mind <= due_delta)) {
        nb.push_back(blk);
        npend.push_back(pending[b]);
        continue;
      }
      std::vector<int> cuts;
      for (const NodeRoot& nr : nodes)
        if (nr.delta <= due_delta) cuts.push_back(nr.node);
      cuts.push_back(blk.size());
      std::vector<double> utau(blk.size());
      for (int j = blk.lo; j <= blk.hi; ++j)
        utau[j - blk.lo] = member_prescribed(j, tau);
      const double xpar = block_position(blk, tau);
      const double vpar = block_velocity(blk, tau);
      double kea = 0.0;
      int plo = blk.lo;
      for (int c : cuts) {
        Block part;
        part.lo = plo;
        part.hi = blk.lo + c - 1;
        part.t0 = tau;
        part.x0 = xpar;
        part.mass = theta_[part.hi + 1] - theta_[part.lo];
        double vsum = 0.0, asum = 0.0;
        for (int j = part.lo; j <= part.hi; ++j) {
          vsum += mass_[j] * utau[j - blk.lo];
          asum += mass_[j] * accel_[j];
        }
        part.v0 = vsum / part.mass;
        part.abar = asum / part.mass;
        nb.push_back(part);
        npend.push_back(pending[b]);
        kea += 0.5 * part.mass * part.v0 * part.v0;
        plo = part.hi + 1;
      }
      for (int j = blk.lo; j <= blk.hi; ++j) u0_[j] = utau[j - blk.lo];
      if (!pending[b]) {
        Event ev;
        ev.t = tau;
        ev.kind = Event::Kind::Split;
        ev.lo = blk.lo;
        ev.hi = blk.hi;
        ev.ke_before = 0.5 * blk.mass * vpar * vpar;
        ev.ke_after = kea;
        ev.detail = "parts=" + std::to_string(cuts.size());
        if (constructing) ev.detail += ";initial";
        events_.push_back(ev);
      }
      any_split = true;
    }
    if (!any_split) break;
    blocks_ = std::move(nb);
    pending = std::move(npend);
    rebuild_member_index();
  }

  // ---- classify each contact chain: pure graze restores the old anchors ----
  for (GroupRec& rec : recs) {
    const int b0 = block_of_[rec.mlo];
    const int b1 = block_of_[rec.mhi];
    bool same = (b1 - b0 + 1) == static_cast<int>(rec.saved.size());
    if (same)
      for (std::size_t k = 0; k < rec.saved.size(); ++k)
        if (blocks_[b0 + k].lo != rec.saved[k].lo ||
            blocks_[b0 + k].hi != rec.saved[k].hi)
          same = false;
    Event ev;
    ev.t = tau;
    ev.lo = rec.mlo;
    ev.hi = rec.mhi;
    ev.ke_before = rec.ke_before;
    if (same) {
      for (std::size_t k = 0; k < rec.saved.size(); ++k)
        blocks_[b0 + k] = rec.saved[k];
      std::copy(rec.saved_u0.begin(), rec.saved_u0.end(), u0_.begin() + rec.mlo);
      ev.kind = Event::Kind::Graze;
      ev.ke_after = rec.ke_before;
      ev.detail = "contact";
    } else {
      ev.kind = Event::Kind::Collision;
      ev.ke_after = kinetic_in_range(rec.mlo, rec.mhi, tau);
      ev.detail = "blocks=" + std::to_string(rec.saved.size()) + "->" +
                  std::to_string(b1 - b0 + 1);
    }
    if (constructing) ev.detail += ";initial";
    events_.push_back(ev);
  }

  if (events_.size() > event_budget_) {
    aborted_ = true;
    abort_reason_ =
        "event budget exhausted; alternating merge/split cascade suspected";
  }
  roots_dirty_ = true;
}

void ParticleSystem::advance(double t_end) {
  if (t_end < t_ - kEventTol)
    throw std::invalid_argument("advance: time must not decrease");
  if (t_end <= t_) return;
  if (t_end > horizon_) {
    horizon_ = t_end;
    roots_dirty_ = true;
  }
  while (!aborted_) {
    if (roots_dirty_) recompute_roots();
    double tau = kInf;
    for (double v : pair_time_) tau = std::min(tau, v);
    for (double v : split_time_) tau = std::min(tau, v);
    if (!(tau <= t_end)) break;
    process_events_at(tau, false);
  }
  if (!aborted_) t_ = t_end;
}

SimResult simulate(const ParticleSeed& seed, const ForceModel& model, double t_end,
                   const std::vector<double>& sample_times) {
  SimResult r;
  ParticleSystem sys(seed, model);
  for (double s : sample_times) {
    if (s < sys.time() - kEventTol)
      throw std::invalid_argument("simulate: sample times must be nondecreasing");
    if (s > t_end + kEventTol)
      throw std::invalid_argument("simulate: sample time beyond end time");
    if (sys.aborted()) break;
    sys.advance(std::min(s, t_end));
    r.snapshots.push_back(sys.snapshot());
  }
  if (!sys.aborted()) sys.advance(t_end);
  r.events = sys.events();
  r.aborted = sys.aborted();
  r.abort_reason = sys.abort_reason();
  return r;
}

std::vector<Snapshot> simulate_projected(const ParticleSeed& seed,
                                         const ForceModel& model,
                                         const std::vector<double>& sample_times) {
  const std::size_t n = seed.masses.size();
  if (n == 0 || seed.positions.size() != n || seed.velocities.size() != n)
    throw std::invalid_argument("simulate_projected: seed arrays mismatched");
  std::vector<double> theta(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) theta[i + 1] = theta[i] + seed.masses[i];
  theta[n] = 1.0;
  const std::vector<double> accel = model.discrete_acceleration(theta);
  double xbar0 = 0.0, vbar0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xbar0 += seed.masses[i] * seed.positions[i];
    vbar0 += seed.masses[i] * seed.velocities[i];
  }

  const auto free_state = [&](double t, std::vector<double>* xs,
                              std::vector<double>* vs) {
    xs->resize(n);
    vs->resize(n);
    for (std::size_t j = 0; j < n; ++j)
      eval_motion(model, xbar0, vbar0, theta[j] + theta[j + 1] - 1.0, 0.0,
                  seed.positions[j], seed.velocities[j], accel[j], t, &(*xs)[j],
                  &(*vs)[j]);
  };
  // Projected positions pooled over the given structure, mean per pool.
  const auto pool_means = [&](double t, const BlockStructure& pools,
                              std::vector<double>* means) {
    std::vector<double> xs, vs;
    free_state(t, &xs, &vs);
    const ConeProjection pr = project_cone_pools({seed.masses, xs});
    means->clear();
    for (const MemberRange& p : pools.groups) {
      double m = 0.0, s = 0.0;
      for (int j = p.lo; j <= p.hi; ++j) {
        m += seed.masses[j];
        s += seed.masses[j] * pr.values[j];
      }
      means->push_back(s / m);
    }
  };

  std::vector<Snapshot> out;
  out.reserve(sample_times.size());
  for (double t : sample_times) {
    std::vector<double> xs, vs;
    free_state(t, &xs, &vs);
    const ConeProjection proj = project_cone_pools({seed.masses, xs});
    const WeightedVector vp = project_flat({seed.masses, vs}, proj.pools);
    Snapshot s;
    s.t = t;
    s.x = proj.values;
    s.v = vp.values;
    s.u = vs;
    for (const MemberRange& p : proj.pools.groups) {
      Block b;
      b.lo = p.lo;
      b.hi = p.hi;
      b.t0 = t;
      b.x0 = proj.values[p.lo];
      b.v0 = vp.values[p.lo];
      b.mass = theta[p.hi + 1] - theta[p.lo];
      double asum = 0.0;
      for (int j = p.lo; j <= p.hi; ++j) asum += seed.masses[j] * accel[j];
      b.abar = asum / b.mass;
      s.blocks.push_back(b);
    }
    std::vector<double> m_minus, m_plus, m_0, m_2;
    if (t >= kFdStep) {
      pool_means(t - kFdStep, proj.pools, &m_minus);
      pool_means(t + kFdStep, proj.pools, &m_plus);
      for (std::size_t p = 0; p < proj.pools.groups.size(); ++p)
        s.fd_speed.push_back((m_plus[p] - m_minus[p]) / (2.0 * kFdStep));
    } else {
      pool_means(t, proj.pools, &m_0);
      pool_means(t + kFdStep, proj.pools, &m_plus);
      pool_means(t + 2.0 * kFdStep, proj.pools, &m_2);
      for (std::size_t p = 0; p < proj.pools.groups.size(); ++p)
        s.fd_speed.push_back(
            (-3.0 * m_0[p] + 4.0 * m_plus[p] - m_2[p]) / (2.0 * kFdStep));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sticky
