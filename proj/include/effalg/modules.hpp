#pragma once
/// \file modules.hpp
/// \brief Finitely presented modules and algebras over quotients R = S/I:
/// kernels/images/cokernels, tensor/Hom, Tor/Ext, Hilbert data, Rees and
/// associated graded algebras, multiplicities, primary decomposition,
/// normalization, smooth loci, pinchings, Noether normalization and the
/// morphism analysis toolbox.

#include <optional>

#include "effalg/groebner.hpp"

namespace effalg {

// ---------------------------------------------------------------------------
// quotient rings

struct QuotientRing;
using QRingPtr = std::shared_ptr<const QuotientRing>;

/// R = S/I with the defining ideal stored as a reduced Gröbner basis, so
/// element equality is decided by normal form.
struct QuotientRing {
  RingPtr S;
  Ideal I;   ///< reduced basis (empty for a polynomial ring)
  GB gb;

  static QRingPtr make(const RingPtr& S, const Ideal& gens);

  MPoly nf(const MPoly& f) const;
  bool is_zero_elt(const MPoly& f) const;
  bool elt_eq(const MPoly& f, const MPoly& g) const;
  bool is_zero_ring() const;
  bool is_unit(const MPoly& f) const;
  int dim() const;  ///< Krull dimension of S/I; -1 for the zero ring
};

bool qring_eq(const QRingPtr& A, const QRingPtr& B);

/// reduced basis of the lifted ideal I_A + (gens) inside A->S
Ideal qr_ideal(const QRingPtr& A, const Ideal& gens);

// ---------------------------------------------------------------------------
// combinatorial dimension helpers (leads taken from a reduced basis)

/// Krull dimension of S/I; -1 when I = (1)
int ideal_dim(const RingPtr& S, const Ideal& Ired);
/// a maximal independent set U (in(I) ∩ k[U] = 0) of maximal size, by
/// ascending variable index; empty when dim <= 0
std::vector<int> max_independent_set(const RingPtr& S, const Ideal& Ired);
/// k-dimension of S/I; fails (UsageError) when infinite
Int ideal_vdim(const RingPtr& S, const Ideal& Ired);

// ---------------------------------------------------------------------------
// module presentations

/// M = Coker(φ : Rᵐ → Rⁿ); the columns of φ are the relation vectors.  The
/// rows I·e_i of the defining ideal are absorbed at construction, so the
/// presentation is simultaneously an S-module presentation.  `shifts` carries
/// the degree shifts of the ambient basis for graded modules (empty =
/// ungraded / all zero).
struct ModulePresentation {
  QRingPtr R;
  int rank = 0;
  std::vector<MVec> rels;
  GB relgb;
  std::vector<int> shifts;
};

ModulePresentation mod_make(const QRingPtr& R, int rank, std::vector<MVec> rels,
                            std::vector<int> shifts = {});
ModulePresentation mod_free(const QRingPtr& R, int rank, std::vector<int> shifts = {});
/// cyclic module R/J
ModulePresentation mod_cyclic(const QRingPtr& R, const Ideal& J);

bool mod_is_zero(const ModulePresentation& M);
bool mod_finite_dim(const ModulePresentation& M);
Int mod_vdim(const ModulePresentation& M);  ///< fails (UsageError) when infinite

/// presentation of (⟨gens⟩ + ⟨rels⟩)/⟨rels⟩ ⊆ R^rank/⟨rels⟩ on the given
/// generators
ModulePresentation mod_subquotient(const QRingPtr& R, int rank,
                                   const std::vector<MVec>& gens,
                                   const std::vector<MVec>& rels);

// ---------------------------------------------------------------------------
// morphisms

struct ModuleMorphism {
  ModulePresentation src, dst;
  std::vector<MVec> lift;  ///< images of the ambient basis of src
};

/// validates that the lift descends to the quotients (IllFormedMorphism /
/// RingMismatch)
ModuleMorphism mor_make(ModulePresentation src, ModulePresentation dst,
                        std::vector<MVec> lift);
ModuleMorphism mor_zero(const ModulePresentation& src, const ModulePresentation& dst);
ModuleMorphism mor_identity(const ModulePresentation& M);
ModuleMorphism mor_compose(const ModuleMorphism& g, const ModuleMorphism& f);
MVec mor_apply(const ModuleMorphism& a, const MVec& v);
bool mor_is_zero(const ModuleMorphism& a);

struct KerImCoker {
  ModulePresentation ker, im, coker;
  ModuleMorphism ker_incl;    ///< Ker α → P
  ModuleMorphism im_incl;     ///< Im α → Q
  ModuleMorphism coker_proj;  ///< Q → Coker α
};

KerImCoker kernel_image_cokernel(const ModuleMorphism& alpha);

// ---------------------------------------------------------------------------
// functors on modules and submodules

ModulePresentation mod_tensor(const ModulePresentation& P, const ModulePresentation& Q);

/// Hom_R(P, Q) together with its generators realized as explicit lifts
/// F_P → F_Q (gen_maps[g][j] = image of e_j in the ambient of Q)
struct HomData {
  ModulePresentation hom;
  std::vector<std::vector<MVec>> gen_maps;
};
HomData mod_hom(const ModulePresentation& P, const ModulePresentation& Q);

/// annihilator (0 : M), as a reduced lifted ideal of R
Ideal mod_annihilator(const ModulePresentation& M);
/// transporter ideal (N : N') for submodules of M given by generators
Ideal mod_transporter(const ModulePresentation& M, const std::vector<MVec>& N,
                      const std::vector<MVec>& Np);
/// submodule (N : J) = {x ∈ M : Jx ⊆ N}, returned by generators
std::vector<MVec> mod_colon_sub(const ModulePresentation& M,
                                const std::vector<MVec>& N, const Ideal& J);
std::vector<MVec> mod_sum_sub(const std::vector<MVec>& N1, const std::vector<MVec>& N2);
std::vector<MVec> mod_intersect_sub(const ModulePresentation& M,
                                    const std::vector<MVec>& N1,
                                    const std::vector<MVec>& N2);
bool mod_sub_contains(const ModulePresentation& M, const std::vector<MVec>& N,
                      const MVec& v);
bool mod_sub_eq(const ModulePresentation& M, const std::vector<MVec>& N1,
                const std::vector<MVec>& N2);

// ---------------------------------------------------------------------------
// resolutions, Tor, Ext

/// F_len → … → F_1 → F_0 (→ M → 0); maps[i] holds the columns of
/// F_{i+1} → F_i, so maps[0] is the presentation matrix.  complete is set
/// when the last syzygy module vanished.
struct Resolution {
  std::vector<int> ranks;
  std::vector<std::vector<int>> shifts;  ///< filled for graded input
  std::vector<std::vector<MVec>> maps;
  bool complete = false;
};

Resolution mod_resolution(const ModulePresentation& M, int length, bool prune = false);

ModulePresentation mod_tor(const ModulePresentation& P, const ModulePresentation& Q, int i);
ModulePresentation mod_ext(const ModulePresentation& P, const ModulePresentation& Q, int i);

// ---------------------------------------------------------------------------
// Hilbert data

bool mod_is_homogeneous(const ModulePresentation& M);

/// Hilbert function of a graded module: exact values up to the threshold n0,
/// and the Hilbert polynomial (coefficients over ℚ, poly[i] the coefficient
/// of n^i) valid for all n ≥ n0.  dimension = deg P + 1 with the zero module
/// at -1; multiplicity = (deg P)!·lc(P).
struct HilbertData {
  int lo = 0;               ///< values[i] = H(lo + i)
  std::vector<Int> values;  ///< exact values for lo … n0 + 2
  int n0 = 0;
  std::vector<FElem> poly;  ///< over Field::Q()
  int dimension = -1;
  Int multiplicity = 0;
};

/// computed from a pruned graded free resolution over the ambient
/// polynomial ring (NonHomogeneous when the presentation is not graded)
HilbertData hilbert(const ModulePresentation& M);
/// evaluate the Hilbert data at n (exact for every n)
Int hilbert_value(const HilbertData& H, int n);

// ---------------------------------------------------------------------------
// module elimination

/// generators of ⟨rows⟩ ∩ (k[kept vars])^rank for a submodule of R^rank;
/// the result lives in a fresh ring on the kept variables
std::vector<MVec> module_eliminate(const RingPtr& R, int rank,
                                   const std::vector<MVec>& rows,
                                   const std::vector<int>& elim, RingPtr* out_ring);

// ---------------------------------------------------------------------------
// Rees algebra and associated graded

struct ReesData {
  QRingPtr rees;    ///< S[T₁…T_r]/L
  QRingPtr graded;  ///< S[T₁…T_r]/(L + J)
  std::vector<int> tvars;       ///< indices of T₁…T_r in rees->S
  std::vector<std::string> tnames;
  std::optional<ModulePresentation> reesModule, gradedModule;
};

ReesData rees_and_graded(const QRingPtr& R, const Ideal& Jgens,
                         const ModulePresentation* M = nullptr);

/// mult_{R_𝔭}(𝔭, M_𝔭): normalized leading coefficient of the Hilbert
/// polynomial of gr_𝔭 M_𝔭 over κ_𝔭 (NotPrime when 𝔭 is not prime)
Int multiplicity(const QRingPtr& R, const Ideal& prime, const ModulePresentation& M);
/// upper bound for mult_{R_𝔭}(𝔞, M_𝔭) for an 𝔭-primary 𝔞, via a computed
/// r with 𝔭^r ⊆ 𝔞
Int mult_upper_bound(const QRingPtr& R, const Ideal& primaryIdeal,
                     const ModulePresentation& M);

// ---------------------------------------------------------------------------
// primary decomposition

struct PrimaryComponent {
  Ideal primary;  ///< reduced basis, contains the input ideal
  Ideal prime;    ///< reduced basis of the associated prime
  int dim = 0;
  int power = 1;  ///< prime^power ⊆ primary
};

/// I = ∩ primary, associated primes pairwise distinct; every output is
/// verified before it is returned.  Sorted by (dim desc, canonical key).
std::vector<PrimaryComponent> primary_decomposition(const RingPtr& S, const Ideal& I);
Ideal ideal_radical(const RingPtr& S, const Ideal& I);
bool ideal_is_prime(const RingPtr& S, const Ideal& I);
bool ideal_is_primary(const RingPtr& S, const Ideal& I);
std::vector<Ideal> minimal_primes(const RingPtr& S, const Ideal& I);

// ---------------------------------------------------------------------------
// algebra morphisms (A → B between presented algebras)

struct AlgebraMorphism {
  QRingPtr A, B;
  std::vector<MPoly> images;  ///< image of each variable of A, lifted to B->S
};

/// validates the defining relations (NotAMorphism)
AlgebraMorphism alg_morphism(const QRingPtr& A, const QRingPtr& B,
                             const std::vector<MPoly>& images);

Ideal am_kernel(const AlgebraMorphism& f);  ///< reduced lifted ideal of A
bool am_is_injective(const AlgebraMorphism& f);
bool am_is_surjective(const AlgebraMorphism& f);
/// localization loci: radical ideals of A
Ideal am_locus_inj(const AlgebraMorphism& f);
Ideal am_locus_surj(const AlgebraMorphism& f);
Ideal am_locus_iso(const AlgebraMorphism& f);
/// open-immersion test; when true and witness is nonnull it receives the
/// coefficients writing 1 from the images of the iso locus in B
bool am_is_open_immersion(const AlgebraMorphism& f, std::vector<MPoly>* witness = nullptr);
/// finiteness test; when finite and pres/mons are nonnull they receive the
/// module presentation of B over A on the monomial generators
bool am_is_finite(const AlgebraMorphism& f, ModulePresentation* pres = nullptr,
                  std::vector<Expo>* mons = nullptr);

// ---------------------------------------------------------------------------
// Noether normalization, pinching, smooth locus, normalization

struct NoetherData {
  RingPtr P;                  ///< k[u₁…u_d], d = dim A
  std::vector<MPoly> images;  ///< u_i as an element of A (lifted)
  ModulePresentation module;  ///< A as a P-module
  std::vector<Expo> mons;     ///< its monomial generators (exponents in A->S)
};

NoetherData noether_normalization(const QRingPtr& A);  ///< ZeroRing on A = 0

/// presentation of B = A ⊕ I (pinching of A along I); tnames receives the
/// names of the adjoined module variables
QRingPtr pinch_algebra(const QRingPtr& A, const Ideal& Igens,
                       std::vector<std::string>* tnames = nullptr);

/// ideal of the non-smooth locus of Spec B over the base field, lifted to
/// B->S (unit ideal iff smooth); computed per irreducible component with
/// codimension-sized jacobian minors
Ideal smooth_locus_ideal(const QRingPtr& B);

struct NormalizeResult {
  QRingPtr tilde;
  AlgebraMorphism map;  ///< A → Ã
  int iterations = 0;   ///< total End-loop steps over all components
  bool s2_applied = false;
  std::optional<Int> iterationCap;  ///< a-priori cap reported when dim A = 1
  std::vector<QRingPtr> components; ///< normalized pieces, one per minimal prime
};

NormalizeResult normalize(const QRingPtr& A);  ///< NotReduced

}  // namespace effalg
