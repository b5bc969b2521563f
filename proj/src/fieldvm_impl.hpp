#pragma once
/// \file fieldvm_impl.hpp
/// \brief Internal helpers shared by the fieldvm translation units:
/// coefficient lifting between the base field and sample fields, integer
/// normal forms for the ℤ base, prime extraction from certificates, and
/// conjunctive satisfiability over each base.

#include <set>
#include <string>
#include <vector>

#include "effalg/fieldvm.hpp"

namespace effalg {
namespace vmdetail {

/// Rational value of a prime-field or ℚ coefficient.
Rat felem_rat(const FieldPtr& K, const FElem& c);

/// Image of a rational in K; UsageError when the denominator dies mod p.
FElem rat_to_field(const Rat& q, const FieldPtr& K);

/// ℤ form over the ℚ ring: cleared denominators, content preserved,
/// positive leading coefficient.
MPoly zb_clear(const RingPtr& R, MPoly f);

/// Canonical atom polynomial: monic over field bases, integer form over ℤ.
MPoly atom_normalize(const FormulaCtx& c, MPoly f);

void int_prime_factors(Int n, std::set<Int>& out);
void rat_den_primes(const Rat& q, std::set<Int>& out);
void poly_den_primes(const RingPtr& R, const MPoly& f, std::set<Int>& out);
void poly_coeff_primes(const RingPtr& R, const MPoly& f, std::set<Int>& out);

/// Reduction of an integer-coefficient polynomial into a ring over 𝔽_p
/// with the same variables.
MPoly poly_mod_p(const RingPtr& Rq, const MPoly& f, const RingPtr& Rp);

/// Deterministic sort/equality key.
std::string poly_key(const RingPtr& R, const MPoly& f);

/// Evaluate with coefficients lifted through felem_rat/rat_to_field.
FElem mpoly_eval(const RingPtr& R, const MPoly& f, const FieldPtr& K,
                 const std::vector<FElem>& pt);

/// Satisfiability of ∧ eqs = 0 ∧ neqs ≠ 0 over the algebraically closed
/// fields of the base (every characteristic when the base is ℤ).
bool conj_satisfiable(const FormulaCtx& c, const std::vector<MPoly>& eqs,
                      const std::vector<MPoly>& neqs);

/// Integer representative of an 𝔽_p polynomial in a ℚ ring.
MPoly poly_lift_p(const RingPtr& Rp, const MPoly& f, const RingPtr& Rq);

/// Reduce a ℤ-base formula into a fixed-characteristic context mod p.
FormulaPtr bf_mod_p(const FormulaCtx& cz, const FormulaPtr& f,
                    const FormulaCtx& cp);

/// Primes dividing any numerator or denominator of any atom coefficient.
std::set<Int> formula_coeff_primes(const FormulaCtx& c, const FormulaPtr& f);

/// Fresh variable name based on `stem` avoiding the ring's names.
std::string fresh_name(const RingPtr& R, const std::string& stem);

}  // namespace vmdetail
}  // namespace effalg
