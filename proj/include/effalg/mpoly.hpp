#pragma once
/// \file mpoly.hpp
/// \brief Multivariate polynomials over a FieldTower with grevlex / lex /
/// block elimination orders, canonical term-sorted representation, parsing
/// and printing, and the ring-map plumbing shared by the ideal calculus.

#include <memory>
#include <string>
#include <vector>

#include "effalg/field.hpp"
#include "effalg/upoly.hpp"

namespace effalg {

using Expo = std::vector<int>;

enum class OrdKind { Grevlex, Lex, Block };

/// Block: the first `block` variables form an elimination block (grevlex on
/// the block, ties broken by grevlex on the remaining variables).
struct MOrder {
  OrdKind kind = OrdKind::Grevlex;
  int block = 0;
};

struct PolyRing;
using RingPtr = std::shared_ptr<const PolyRing>;

struct PolyRing {
  FieldPtr K;
  std::vector<std::string> vars;
  MOrder ord;

  static RingPtr make(const FieldPtr& K, const std::vector<std::string>& vars,
                      MOrder ord = {});
  int nvars() const { return (int)vars.size(); }
  int var_index(const std::string& name) const;  ///< -1 when absent
};

/// strictly order-sorted, leading term first, no zero coefficients
struct MTerm {
  Expo e;
  FElem c;
};
using MPoly = std::vector<MTerm>;

/// monomials
int mono_deg(const Expo& a);
Expo mono_mul(const Expo& a, const Expo& b);
bool mono_divides(const Expo& a, const Expo& b);  ///< a | b
Expo mono_div(const Expo& b, const Expo& a);      ///< b / a
Expo mono_lcm(const Expo& a, const Expo& b);
/// order comparison: negative/zero/positive like strcmp
int mono_cmp(const RingPtr& R, const Expo& a, const Expo& b);

/// arithmetic (inputs canonical, outputs canonical)
void mp_norm(const RingPtr& R, MPoly& f);
bool mp_is_zero(const MPoly& f);
MPoly mp_const(const RingPtr& R, const FElem& c);
MPoly mp_from_int(const RingPtr& R, long n);
MPoly mp_var(const RingPtr& R, int i, int e = 1);
MPoly mp_add(const RingPtr& R, const MPoly& a, const MPoly& b);
MPoly mp_sub(const RingPtr& R, const MPoly& a, const MPoly& b);
MPoly mp_neg(const RingPtr& R, const MPoly& a);
MPoly mp_mul(const RingPtr& R, const MPoly& a, const MPoly& b);
MPoly mp_scale(const RingPtr& R, const FElem& c, const MPoly& a);
MPoly mp_mul_term(const RingPtr& R, const FElem& c, const Expo& e, const MPoly& a);
MPoly mp_pow(const RingPtr& R, const MPoly& a, int n);
MPoly mp_monic(const RingPtr& R, const MPoly& a);
bool mp_eq(const RingPtr& R, const MPoly& a, const MPoly& b);
int mp_cmp(const RingPtr& R, const MPoly& a, const MPoly& b);  ///< canonical total order
int mp_total_deg(const MPoly& f);
int mp_deg_in(const MPoly& f, int var);
MPoly mp_deriv(const RingPtr& R, const MPoly& f, int var);

/// substitution of a polynomial for one variable
MPoly mp_subst(const RingPtr& R, const MPoly& f, int var, const MPoly& value);
/// ring map: send variable i of the source to images[i] in R_to; coefficients
/// are mapped with coeff_map (identity embed when null)
MPoly mp_map(const RingPtr& R_from, const MPoly& f, const RingPtr& R_to,
             const std::vector<MPoly>& images,
             const std::function<FElem(const FElem&)>& coeff_map = nullptr);

/// univariate bridges
bool mp_is_univariate(const MPoly& f, int var);
UPoly mp_to_upoly(const RingPtr& R, const MPoly& f, int var);
MPoly mp_from_upoly(const RingPtr& R, const UPoly& f, int var);

/// text form: `2*x^2*y - (T+1)*z + 1`
std::string mp_to_string(const RingPtr& R, const MPoly& f);
MPoly mp_parse(const RingPtr& R, const std::string& s);

/// free-module vectors (ambient S^n), position-over-term order
using MVec = std::vector<MPoly>;

MVec mv_zero(int n);
bool mv_is_zero(const MVec& v);
MVec mv_add(const RingPtr& R, const MVec& a, const MVec& b);
MVec mv_sub(const RingPtr& R, const MVec& a, const MVec& b);
MVec mv_scale(const RingPtr& R, const MPoly& c, const MVec& a);
MVec mv_mul_term(const RingPtr& R, const FElem& c, const Expo& e, const MVec& a);
bool mv_eq(const RingPtr& R, const MVec& a, const MVec& b);
int mv_cmp(const RingPtr& R, const MVec& a, const MVec& b);
/// leading position/term under position-over-term; component -1 when zero
struct MvLead {
  int comp = -1;
  Expo e;
  FElem c;
};
MvLead mv_lead(const RingPtr& R, const MVec& v);
std::string mv_to_string(const RingPtr& R, const MVec& v);

}  // namespace effalg
