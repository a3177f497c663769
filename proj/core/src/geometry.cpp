#include "pivotlab/geometry.hpp"

namespace pivotlab {

std::int64_t distance_to_geodesic(const ReducedWord& a, const ReducedWord& x, const ReducedWord& y) {
  const HalfInt g = gromov_product(x, y, a);
  // In a tree the product is an integer: the branch point is a vertex.
  return g.floor();
}

bool check_fellowtravel_lemma(const ReducedWord& a, const ReducedWord& x, const ReducedWord& y,
                              const ReducedWord& g, HalfInt C, HalfInt K, HalfInt delta) {
  if (HalfInt(distance_to_geodesic(a, x, y)) > C) {
    throw PreconditionViolation("fellow-travel: a is farther than C from [x, y]");
  }
  if (HalfInt(dist(x, g * x)) > K || HalfInt(dist(y, g * y)) > K) {
    throw PreconditionViolation("fellow-travel: g moves an endpoint by more than K");
  }
  return HalfInt(dist(a, g * a)) <= C * 2 + K * 2 + delta * 4;
}

}  // namespace pivotlab
