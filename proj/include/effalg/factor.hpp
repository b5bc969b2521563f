#pragma once
/// \file factor.hpp
/// \brief Univariate factorization over every tower constructor: distinct/
/// equal-degree splitting over finite fields, Hensel lifting over ℚ, the
/// norm/resultant reduction over separable extensions, Kronecker substitution
/// over rational function fields, and the purely inseparable / perfect-closure
/// reductions.

#include "effalg/field.hpp"

namespace effalg {

struct UFactor {
  FElem unit;                                ///< leading unit
  std::vector<std::pair<UPoly, int>> factors;  ///< monic irreducible, multiplicity
};

/// Complete factorization into irreducibles, deterministic output order
/// (degree, then canonical coefficient order).  ZeroPolynomial on f = 0.
UFactor factor_upoly(const FieldPtr& K, const UPoly& f, uint64_t seed = 1);

/// Squarefree decomposition: pairwise coprime squarefree g_i with f = u·Πg_i^{e_i}.
std::vector<std::pair<UPoly, int>> squarefree_decomp(const FieldPtr& K, const UPoly& f);
/// Product of the distinct irreducible factors, each once.
UPoly squarefree_part(const FieldPtr& K, const UPoly& f);

bool is_irreducible(const FieldPtr& K, const UPoly& f, uint64_t seed = 1);
/// Roots of f lying in K itself (each once).
std::vector<FElem> roots_in_field(const FieldPtr& K, const UPoly& f, uint64_t seed = 1);

}  // namespace effalg
