#pragma once

// Geometry of the closed convex cone of nondecreasing vectors under the
// mass-weighted inner product <v,w> = sum m_i v_i w_i: metric projection onto
// the cone (two independent algorithms), the lower convex envelope of the
// mass primitive that underlies it, projections onto the flat subspace and
// tangent cone of a given block structure, and the discrete normal-cone /
// chord-admissibility tests that characterize entropic velocities.

#include <vector>

#include "sticky1d/measures.hpp"

namespace sticky {

struct WeightedVector {
  std::vector<double> weights;  // positive
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
};

// Isotonic regression by pool-adjacent-violators: the unique weighted-L2
// projection of `y` onto nondecreasing vectors. Each pooled run carries the
// weighted mean of its members. This is the production path.
WeightedVector project_cone(const WeightedVector& y);

// Same projection, also reporting the contiguous pooled runs. Adjacent runs
// whose means tie are pooled together (maximal runs).
struct ConeProjection {
  std::vector<double> values;
  BlockStructure pools;
};
ConeProjection project_cone_pools(const WeightedVector& y);

// Same projection via the derivative of the lower convex envelope of the
// cumulative primitive P(theta_i) = sum_{j<=i} w_j y_j. Kept as a permanently
// shipped cross-check of project_cone.
WeightedVector project_cone_envelope(const WeightedVector& y);

// Lower convex envelope of the graph {(nodes[i], vals[i])}: indices of the
// touching nodes (always including the endpoints) and the slope of each
// envelope segment (nondecreasing).
struct EnvelopeResult {
  std::vector<int> keep;
  std::vector<double> slopes;
};
EnvelopeResult lower_convex_envelope(const std::vector<double>& nodes,
                                     const std::vector<double>& vals);

// Projection onto the subspace of vectors constant on each group (identity
// elsewhere): group entries are replaced by their weighted mean. Preserves
// the weighted sum.
WeightedVector project_flat(const WeightedVector& u, const BlockStructure& blocks);

// Projection onto the tangent cone at a configuration with the given flat
// groups: identity outside groups, per-group isotonic regression inside.
WeightedVector project_tangent_cone(const WeightedVector& u,
                                    const BlockStructure& blocks);

// Discrete normal-cone membership at a configuration whose flat intervals are
// `blocks`: with Xi(theta_i) = sum_{j<=i} w_j v_j, requires Xi >= -tol at all
// interior nodes, |Xi| <= tol at interior nodes not strictly inside a group,
// and |Xi(1)| <= tol.
bool normal_cone_member(const WeightedVector& w, const BlockStructure& blocks,
                        double tol = kXiTol);

// Chord condition for one glued group: every left-prefix weighted mean of
// `values` is >= the total mean - tol AND every right-suffix weighted mean is
// <= the total mean + tol. Exact ties are admissible (closed cone).
bool oleinik_admissible(const std::vector<double>& weights,
                        const std::vector<double>& values, double tol = kXiTol);

}  // namespace sticky
