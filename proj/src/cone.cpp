#include "sticky1d/cone.hpp"

#include <cmath>
#include <stdexcept>

namespace sticky {

namespace {

void check(const WeightedVector& y) {
  if (y.weights.size() != y.values.size() || y.values.empty())
    throw std::invalid_argument("WeightedVector: size mismatch or empty");
  for (double w : y.weights)
    if (!(w > 0.0))
      throw std::invalid_argument("WeightedVector: weights must be positive");
}

}  // namespace

ConeProjection project_cone_pools(const WeightedVector& y) {
  check(y);
  const int n = y.size();
  // Stack of pools (start index, total weight, weighted mean). Pools merge
  // while the mean sequence decreases; the classic O(n) sweep.
  std::vector<int> start;
  std::vector<double> pw, pm;
  start.reserve(n);
  pw.reserve(n);
  pm.reserve(n);
  for (int i = 0; i < n; ++i) {
    start.push_back(i);
    pw.push_back(y.weights[i]);
    pm.push_back(y.values[i]);
    while (start.size() > 1 && pm[pm.size() - 2] >= pm.back()) {
      double w = pw[pw.size() - 2] + pw.back();
      double m = (pw[pw.size() - 2] * pm[pm.size() - 2] + pw.back() * pm.back()) / w;
      start.pop_back();
      pw.pop_back();
      pm.pop_back();
      pw.back() = w;
      pm.back() = m;
    }
  }
  ConeProjection out;
  out.values.resize(n);
  out.pools.groups.reserve(start.size());
  for (size_t k = 0; k < start.size(); ++k) {
    int hi = (k + 1 < start.size()) ? start[k + 1] : n;
    out.pools.groups.push_back({start[k], hi - 1});
    for (int i = start[k]; i < hi; ++i) out.values[i] = pm[k];
  }
  return out;
}

WeightedVector project_cone(const WeightedVector& y) {
  ConeProjection p = project_cone_pools(y);
  return {y.weights, std::move(p.values)};
}

EnvelopeResult lower_convex_envelope(const std::vector<double>& nodes,
                                     const std::vector<double>& vals) {
  if (nodes.size() != vals.size() || nodes.size() < 2)
    throw std::invalid_argument("lower_convex_envelope: need >= 2 nodes");
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw std::invalid_argument("lower_convex_envelope: nodes must increase");

  // Monotone-chain lower hull over the ordered abscissae.
  EnvelopeResult res;
  auto cross_ok = [&](int a, int b, int c) {
    // Keep b iff it lies strictly below chord a-c:
    // (vals[b]-vals[a])*(nodes[c]-nodes[a]) < (vals[c]-vals[a])*(nodes[b]-nodes[a]).
    double lhs = (vals[b] - vals[a]) * (nodes[c] - nodes[a]);
    double rhs = (vals[c] - vals[a]) * (nodes[b] - nodes[a]);
    return lhs < rhs;
  };
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    while (res.keep.size() >= 2 &&
           !cross_ok(res.keep[res.keep.size() - 2], res.keep.back(), i))
      res.keep.pop_back();
    res.keep.push_back(i);
  }
  res.slopes.reserve(res.keep.size() - 1);
  for (size_t k = 0; k + 1 < res.keep.size(); ++k) {
    int a = res.keep[k], b = res.keep[k + 1];
    res.slopes.push_back((vals[b] - vals[a]) / (nodes[b] - nodes[a]));
  }
  return res;
}

WeightedVector project_cone_envelope(const WeightedVector& y) {
  check(y);
  const int n = y.size();
  std::vector<double> nodes(n + 1), prim(n + 1);
  nodes[0] = 0.0;
  prim[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    nodes[i + 1] = nodes[i] + y.weights[i];
    prim[i + 1] = prim[i] + y.weights[i] * y.values[i];
  }
  EnvelopeResult env = lower_convex_envelope(nodes, prim);
  WeightedVector out{y.weights, std::vector<double>(n)};
  size_t seg = 0;
  for (int i = 0; i < n; ++i) {
    // Piece i lives on (nodes[i], nodes[i+1]); advance to the envelope
    // segment containing it and take that segment's slope.
    while (env.keep[seg + 1] < i + 1) ++seg;
    out.values[i] = env.slopes[seg];
  }
  return out;
}

WeightedVector project_flat(const WeightedVector& u, const BlockStructure& blocks) {
  check(u);
  if (blocks.member_count() != u.size())
    throw std::invalid_argument("project_flat: block structure size mismatch");
  WeightedVector out = u;
  for (const auto& g : blocks.groups) {
    if (g.size() == 1) continue;
    double w = 0.0, s = 0.0;
    for (int i = g.lo; i <= g.hi; ++i) {
      w += u.weights[i];
      s += u.weights[i] * u.values[i];
    }
    double mean = s / w;
    for (int i = g.lo; i <= g.hi; ++i) out.values[i] = mean;
  }
  return out;
}

WeightedVector project_tangent_cone(const WeightedVector& u,
                                    const BlockStructure& blocks) {
  check(u);
  if (blocks.member_count() != u.size())
    throw std::invalid_argument("project_tangent_cone: size mismatch");
  WeightedVector out = u;
  for (const auto& g : blocks.groups) {
    if (g.size() == 1) continue;
    WeightedVector sub;
    sub.weights.assign(u.weights.begin() + g.lo, u.weights.begin() + g.hi + 1);
    sub.values.assign(u.values.begin() + g.lo, u.values.begin() + g.hi + 1);
    WeightedVector proj = project_cone(sub);
    for (int i = g.lo; i <= g.hi; ++i) out.values[i] = proj.values[i - g.lo];
  }
  return out;
}

bool normal_cone_member(const WeightedVector& w, const BlockStructure& blocks,
                        double tol) {
  check(w);
  if (blocks.member_count() != w.size())
    throw std::invalid_argument("normal_cone_member: size mismatch");
  const int n = w.size();
  double xi = 0.0;
  for (int i = 0; i < n; ++i) {
    xi += w.weights[i] * w.values[i];
    bool last = (i == n - 1);
    if (xi < -tol) return false;
    // Node i+1 follows member i; at the final node and at nodes outside flat
    // groups the primitive must vanish.
    if ((last || !blocks.node_inside_group(i + 1)) && std::abs(xi) > tol)
      return false;
  }
  return true;
}

bool oleinik_admissible(const std::vector<double>& weights,
                        const std::vector<double>& values, double tol) {
  if (weights.size() != values.size() || weights.empty())
    throw std::invalid_argument("oleinik_admissible: size mismatch or empty");
  const int n = static_cast<int>(weights.size());
  double tw = 0.0, ts = 0.0;
  for (int i = 0; i < n; ++i) {
    tw += weights[i];
    ts += weights[i] * values[i];
  }
  const double mean = ts / tw;
  double w = 0.0, s = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    w += weights[i];
    s += weights[i] * values[i];
    if (s / w < mean - tol) return false;                      // left prefix
    if ((ts - s) / (tw - w) > mean + tol) return false;        // right suffix
  }
  return true;
}

}  // namespace sticky
