#pragma once
/// \file field.hpp
/// \brief Computable fields: towers built from 𝔽ₚ or ℚ by adjoining
/// transcendentals, separable algebraic elements, p-th roots, or passing to
/// the perfect closure.  Every field carries exact arithmetic, decidable
/// equality, univariate factorization (see factor.hpp) and, in positive
/// characteristic, an explicit finite p-basis with an expansion algorithm.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace effalg {

using Int = mpz_class;
using Rat = mpq_class;

/// Error with a stable machine-readable code (mirrors the CLI error enums).
struct EffError : std::runtime_error {
  std::string code;
  EffError(std::string c, const std::string& msg)
      : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};
[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
  throw EffError(code, msg);
}

struct FElem;

/// Rational function num/den over the base field (den monic, gcd(num,den)=1).
struct FracV {
  std::vector<FElem> num, den;
};
/// Residue class modulo the minimal polynomial (degree < deg minPoly).
struct ResV {
  std::vector<FElem> c;
};
/// Perfect-closure value: canonical pair (e, a) representing a^(1/p^e),
/// with e = 0 or a not a p-th power in the base field.
struct PerfV {
  int e = 0;
  std::vector<FElem> a;  // exactly one entry
};

/// A field element.  The active alternative matches the owning Field's kind:
///  Rat       — rationals (root ℚ)
///  int64_t   — prime field 𝔽ₚ value in [0, p)
///  FracV     — transcendental extension K(T)
///  ResV      — algebraic extension K[x]/(minPoly)
///  PerfV     — perfect closure
struct FElem {
  std::variant<Rat, int64_t, FracV, ResV, PerfV> v;
  FElem() : v(int64_t(0)) {}
  explicit FElem(Rat r) : v(std::move(r)) {}
  explicit FElem(int64_t n) : v(n) {}
  explicit FElem(FracV f) : v(std::move(f)) {}
  explicit FElem(ResV r) : v(std::move(r)) {}
  explicit FElem(PerfV p) : v(std::move(p)) {}
};

bool felem_equal(const FElem& a, const FElem& b);
/// Total order on canonical representations (for deterministic sorting only).
int felem_cmp(const FElem& a, const FElem& b);

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Dense univariate polynomial over some field; coefficient of x^i at index i.
/// Normalized form has no trailing zero (zero polynomial = empty vector).
using UPoly = std::vector<FElem>;

/// A computable field node.  Concrete towers are linked lists through `sub`.
class Field : public std::enable_shared_from_this<Field> {
 public:
  enum Kind { kQ, kFp, kTrans, kAlgSep, kAlgInsep, kPerf };

  Kind kind;
  FieldPtr sub;          ///< base field (null for kQ/kFp)
  long p = 0;            ///< characteristic (0 iff root is ℚ)
  std::string gen;       ///< generator name (kTrans/kAlgSep/kAlgInsep)
  UPoly minpoly;         ///< monic irreducible over sub (kAlgSep; kAlgInsep: x^p − a)
  FElem insep_a;         ///< kAlgInsep: the base element whose p-th root is adjoined

  // ---- construction (validating; ReduciblePolynomial / AlreadyPthPower) ----
  static FieldPtr Q();
  static FieldPtr Fp(long p);
  static FieldPtr trans(const FieldPtr& K, const std::string& var);
  static FieldPtr algsep(const FieldPtr& K, const std::string& gen, const UPoly& minpoly);
  static FieldPtr alginsep(const FieldPtr& K, const std::string& gen, const FElem& a);
  static FieldPtr perf(const FieldPtr& K);
  /// Adjoin a root of an irreducible polynomial, dispatching on separability.
  static FieldPtr algext(const FieldPtr& K, const std::string& gen, const UPoly& minpoly);

  long characteristic() const { return p; }
  bool is_perfect() const;
  bool is_finite() const;
  Int size() const;           ///< cardinality (finite fields only)
  int ext_degree() const;     ///< [this : sub] for algebraic steps
  int tower_height() const;
  FElem generator() const;    ///< the adjoined generator as an element of *this*

  // ---- arithmetic (canonical in, canonical out) ----
  FElem zero() const;
  FElem one() const;
  FElem from_int(const Int& n) const;
  FElem from_rat(const Rat& r) const;
  FElem embed(const FElem& x) const;  ///< sub-element into *this*
  FElem add(const FElem& a, const FElem& b) const;
  FElem sub_(const FElem& a, const FElem& b) const;
  FElem neg(const FElem& a) const;
  FElem mul(const FElem& a, const FElem& b) const;
  FElem inv(const FElem& a) const;  ///< DivisionByZero on 0
  FElem div(const FElem& a, const FElem& b) const;
  FElem pow(const FElem& a, const Int& e) const;
  bool is_zero(const FElem& a) const;
  bool is_one(const FElem& a) const;
  bool eq(const FElem& a, const FElem& b) const;

  FElem frob(const FElem& a) const;      ///< x ↦ x^p (identity in char 0)
  FElem frob_pow(const FElem& a, int e) const;
  FElem frob_inv(const FElem& a) const;  ///< FrobInvUnavailable unless perfect (id in char 0)
  /// p-th root if one exists (any char-p field); returns false otherwise.
  bool pth_root(FElem& out, const FElem& a) const;
  bool is_pth_power(const FElem& a) const;

  // ---- p-basis (char p; CharZero error otherwise) ----
  /// Canonical p-basis induced by the tower (transcendentals and inseparable
  /// roots, from the bottom of the tower up).
  std::vector<FElem> p_basis() const;
  int p_rank() const;
  /// x = Σ w^p · b₁^{i₁}⋯b_r^{i_r} over monomials with 0 ≤ i < p.
  /// Returns (exponent tuple, w) pairs for the nonzero w, sorted by tuple.
  std::vector<std::pair<std::vector<int>, FElem>> p_expand(const FElem& x) const;
  /// Recombine an expansion (inverse of p_expand).
  FElem p_recombine(const std::vector<std::pair<std::vector<int>, FElem>>& terms) const;
  bool p_independent(const std::vector<FElem>& elems) const;

  // ---- enumeration / sampling ----
  /// k-th element of a fixed injective enumeration (for finite fields k < size).
  FElem nth_element(uint64_t k) const;
  FElem random_element(std::mt19937_64& rng, int size_hint = 2) const;

  // ---- text ----
  std::string to_string(const FElem& x) const;
  std::string descriptor() const;
  static FieldPtr parse_descriptor(const std::string& s);
  FElem parse_element(const std::string& s) const;

  UPoly frob_gen() const;     ///< α^p mod minPoly (algebraic steps)
  int exchange_slot() const;  ///< replaced p-basis slot (kAlgInsep)

 private:
  Field() = default;
  friend FieldPtr make_node(Field&&);
};

/// Names of all generators of the tower, bottom-up, paired with their field
/// node (used when resolving identifiers in element/polynomial strings).
std::vector<std::pair<std::string, FieldPtr>> tower_generators(const FieldPtr& K);

}  // namespace effalg
