#pragma once
/// \file groebner.hpp
/// \brief Gröbner engine for submodules of S^n over any FieldTower:
/// Buchberger with chain/product criteria and sugar selection, transforms,
/// normal forms with division certificates, Schreyer syzygies, elimination
/// and the derived ideal arithmetic.

#include "effalg/mpoly.hpp"

namespace effalg {

using Ideal = std::vector<MPoly>;

struct GB {
  int rank = 1;                              ///< ambient S^rank
  int ngens = 0;                             ///< width of the transform rows
  std::vector<MVec> basis;                   ///< reduced, canonically sorted
  std::vector<std::vector<MPoly>> transform; ///< basis[i] = Σ_j transform[i][j]·gens[j]
};

/// reduced Gröbner basis of the submodule of S^rank spanned by gens
GB groebner(const RingPtr& R, int rank, const std::vector<MVec>& gens);

/// normal form of v against the basis; when quotients is nonnull it receives
/// q with v = Σ q_i·basis_i + nf
MVec normal_form(const RingPtr& R, const GB& gb, const MVec& v,
                 std::vector<MPoly>* quotients = nullptr);

/// membership with certificate over the *original* generators
bool membership(const RingPtr& R, const GB& gb, const MVec& v,
                std::vector<MPoly>* cert = nullptr);

/// generators of ker(S^m -> S^rank), m = #gens
std::vector<MVec> syzygies(const RingPtr& R, int rank, const std::vector<MVec>& gens);

/// ideal (rank 1) conveniences
GB groebner_ideal(const RingPtr& R, const Ideal& I);
MPoly nf_ideal(const RingPtr& R, const GB& gb, const MPoly& f);
bool ideal_member(const RingPtr& R, const GB& gb, const MPoly& f,
                  std::vector<MPoly>* cert = nullptr);
bool ideal_contains_one(const RingPtr& R, const Ideal& I);
bool ideal_eq(const RingPtr& R, const Ideal& I, const Ideal& J);

/// I ∩ K[keep]; the result lives in a fresh ring on the kept variables
/// (grevlex), returned via out_ring
Ideal eliminate(const RingPtr& R, const Ideal& I, const std::vector<int>& keep,
                RingPtr* out_ring);
/// same, but keep the result inside R (kept variables only appear)
Ideal eliminate_in_ring(const RingPtr& R, const Ideal& I, const std::vector<int>& keep);

Ideal ideal_intersect(const RingPtr& R, const Ideal& I, const Ideal& J);
Ideal ideal_colon(const RingPtr& R, const Ideal& I, const Ideal& J);
Ideal ideal_saturate(const RingPtr& R, const Ideal& I, const Ideal& J);
bool radical_member(const RingPtr& R, const MPoly& g, const Ideal& I);

/// exact division f / g (fails when not exact)
MPoly mp_divide_exact(const RingPtr& R, const MPoly& f, const MPoly& g);

/// the induced tower K[Z]/𝔪 for a maximal ideal 𝔪, via elimination ideals;
/// returns the tower together with the images of Z₁,…,Z_d in it
FieldPtr extend_field_maximal(const RingPtr& R, const Ideal& m,
                              std::vector<FElem>* images = nullptr);

}  // namespace effalg
