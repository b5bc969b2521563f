#pragma once
// Base change k[Z] -> k(Z_U)[Z_W] for a set U of independent variables, and
// the reverse direction: clearing tower denominators back into k[Z].  Shared
// by the multiplicity and primary decomposition routines.

#include "effalg/mpoly.hpp"

namespace effalg {

struct LocalRing {
  RingPtr S;               ///< original ring k[Z]
  std::vector<int> U, W;   ///< inverted / kept variable indices (ascending)
  std::vector<FieldPtr> chain;  ///< chain[0] = k, chain[j] = k(U_1..U_j)
  RingPtr Sloc;            ///< chain.back()[Z_W]

  MPoly to_loc(const MPoly& f) const;
  /// clear denominators: num ∈ k[Z] with num/den = g, den ∈ k[U] ⊆ k[Z]
  MPoly unfrac(const MPoly& g, MPoly* den = nullptr) const;
};

LocalRing make_local(const RingPtr& S, const std::vector<int>& U);

}  // namespace effalg
