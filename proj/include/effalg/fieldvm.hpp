#pragma once
/// \file fieldvm.hpp
/// \brief Constructible sets and the black-box field computation model:
/// boolean formulas over 𝔽_p and ℤ, F-rational functions with Frobenius
/// depth, stratified (piecewise-constructible) functions, quantifier
/// elimination, symmetric descent, and an interpreter for field programs
/// with a concrete and a symbolic (dynamic-evaluation) backend.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "effalg/groebner.hpp"
#include "effalg/mpoly.hpp"

namespace effalg {

/// Base of the computation model: a fixed characteristic (p prime, or the
/// exponent characteristic 1 meaning characteristic zero), or ℤ meaning
/// all characteristics at once.  Over ℤ, formulas may contain constant
/// atoms such as `2 = 0` that carve out individual characteristics.
struct VmBase {
  bool overZ = false;
  long p = 1;  ///< ignored when overZ; 1 selects characteristic zero
};

VmBase vm_fp(long p);
VmBase vm_z();
bool vm_eq(const VmBase& a, const VmBase& b);
std::string vm_to_string(const VmBase& b);

/// A formula context fixes the base and the ordered variable list.  The
/// coefficient field of the ring is 𝔽_p for a fixed prime base and ℚ
/// otherwise; over ℤ all polynomials are kept with integer coefficients
/// (cleared denominators, content preserved, positive leading sign).
struct FormulaCtx {
  VmBase base;
  RingPtr R;
};

FormulaCtx formula_ctx(const VmBase& b, const std::vector<std::string>& vars);
/// Context on the first nvars - k variables (k trailing variables dropped).
FormulaCtx ctx_drop(const FormulaCtx& c, int k = 1);
/// Context extended by fresh trailing variable names.
FormulaCtx ctx_append(const FormulaCtx& c, const std::vector<std::string>& names);

struct BoolFormula;
using FormulaPtr = std::shared_ptr<const BoolFormula>;

/// Formula tree.  Eq0 holds a polynomial of the context ring; And and Or
/// are n-ary (empty And = true, empty Or = false); Not is unary.
struct BoolFormula {
  enum Kind { Eq0, And, Or, Not };
  Kind kind = Eq0;
  MPoly poly;
  std::vector<FormulaPtr> kids;
};

FormulaPtr bf_eq0(const FormulaCtx& c, const MPoly& f);
FormulaPtr bf_true();
FormulaPtr bf_false();
FormulaPtr bf_and(std::vector<FormulaPtr> kids);
FormulaPtr bf_or(std::vector<FormulaPtr> kids);
FormulaPtr bf_not(FormulaPtr f);
bool bf_is_true(const FormulaPtr& f);
bool bf_is_false(const FormulaPtr& f);

/// Grammar: disjunction of conjunctions of possibly negated atoms,
/// `|`, `&`, `!`, parentheses, atoms `f = g` (or `f == g`, `f != g`).
FormulaPtr bf_parse(const FormulaCtx& c, const std::string& s);
std::string bf_to_string(const FormulaCtx& c, const FormulaPtr& f);

/// One purely conjunctive disjunct: all of `eqs` vanish, no `neqs` does.
struct Disjunct {
  std::vector<MPoly> eqs;
  std::vector<MPoly> neqs;
};

std::vector<Disjunct> bf_dnf(const FormulaCtx& c, const FormulaPtr& f);
FormulaPtr bf_from_dnf(const FormulaCtx& c, const std::vector<Disjunct>& ds);

/// Emptiness of the solution set over every algebraically closed field of
/// the base (all characteristics when the base is ℤ).
bool bf_is_empty(const FormulaCtx& c, const FormulaPtr& f);
bool bf_implies(const FormulaCtx& c, const FormulaPtr& f, const FormulaPtr& g);
bool bf_equals(const FormulaCtx& c, const FormulaPtr& f, const FormulaPtr& g);
/// Zariski closure of the solution set, as a positive (Not-free) formula.
FormulaPtr bf_closure(const FormulaCtx& c, const FormulaPtr& f);

/// Truth at a concrete point with coordinates in K; K's characteristic
/// must be compatible with the base (anything goes over ℤ).
bool bf_eval(const FormulaCtx& c, const FormulaPtr& f, const FieldPtr& K,
             const std::vector<FElem>& pt);

/// Transport into a context with a superset of the variables (matched by
/// name).  Errors: BaseMismatch, UnknownVariable.
FormulaPtr bf_extend(const FormulaCtx& from, const FormulaPtr& f,
                     const FormulaCtx& to);

/// F-rational function: Frob_p^{-depth} ∘ (num/den) on the variables of R.
/// Kept in lowest terms with canonical scaling; depth is 0 in
/// characteristic zero and over ℤ.
struct FRational {
  VmBase base;
  RingPtr R;
  int depth = 0;
  MPoly num;
  MPoly den;
};

FRational fr_make(const FormulaCtx& c, const MPoly& num, const MPoly& den,
                  int depth = 0);
FRational fr_const(const FormulaCtx& c, const Int& n);
FRational fr_var(const FormulaCtx& c, int i);
std::string fr_to_string(const FRational& u);
FRational fr_add(const FRational& a, const FRational& b);
FRational fr_sub(const FRational& a, const FRational& b);
FRational fr_neg(const FRational& a);
FRational fr_mul(const FRational& a, const FRational& b);
FRational fr_div(const FRational& a, const FRational& b);
bool fr_eq(const FRational& a, const FRational& b);
bool fr_is_zero(const FRational& a);
/// u ∘ (args): every argument shares one context; depths add.
FRational fr_compose(const FRational& u, const std::vector<FRational>& args);
/// Evaluation at a point of K.  Errors: UndefinedAtPoint (denominator
/// vanishes), UsageError (characteristic mismatch or missing p-th root).
FElem fr_eval(const FRational& u, const FieldPtr& K,
              const std::vector<FElem>& pt);
/// Graph formula in graphCtx, whose variable yIndex plays the role of the
/// value: y^{p^depth}·den − num = 0 ∧ den ≠ 0.  Remaining variables are
/// matched by name.
FormulaPtr fr_graph(const FRational& u, const FormulaCtx& graphCtx,
                    int yIndex);

/// Value of one piece of a stratified function: a natural number or an
/// F-rational function of the inputs.
struct SFValue {
  enum Kind { Nat, Rat } kind = Nat;
  Int nat = 0;
  std::optional<FRational> rat;
};

SFValue sv_nat(const Int& n);
SFValue sv_rat(FRational u);
bool sv_eq(const SFValue& a, const SFValue& b);
std::string sv_to_string(const SFValue& v);

struct SFPiece {
  FormulaPtr phi;
  SFValue val;
};

/// Ordered pieces with first-match semantics: the value at a point is the
/// one of the first piece whose formula holds, provided every earlier
/// formula is defined and false; undefined where no piece matches.
struct StratifiedFunction {
  FormulaCtx ctx;
  std::vector<SFPiece> pieces;
  bool total = false;  ///< pairwise exclusive and jointly exhaustive, certified
};

/// Pull-based lazy stream of pieces.
struct PieceStream {
  FormulaCtx ctx;
  std::function<std::optional<SFPiece>()> next;
};

PieceStream sf_stream(const StratifiedFunction& f);
/// Collect at most maxPieces pieces (the stream may be infinite).
StratifiedFunction sf_collect(PieceStream& s, int maxPieces);

/// Rewrite with pairwise exclusive pieces (same function, same order).
StratifiedFunction sf_exclusive(const StratifiedFunction& f);
/// Check exclusivity and exhaustiveness, setting/clearing `total`.
bool sf_certify_total(StratifiedFunction& f);
std::optional<SFValue> sf_eval(const StratifiedFunction& f, const FieldPtr& K,
                               const std::vector<FElem>& pt);
std::string sf_to_string(const StratifiedFunction& f);

/// Binary decision tree over formulas; leaves carry values.
struct DecisionTree {
  std::optional<SFValue> val;  ///< set iff leaf
  FormulaPtr test;
  std::shared_ptr<const DecisionTree> yes;
  std::shared_ptr<const DecisionTree> no;
};
using DTreePtr = std::shared_ptr<const DecisionTree>;

DTreePtr sf_to_tree(const StratifiedFunction& f);
StratifiedFunction tree_to_sf(const FormulaCtx& c, const DTreePtr& t);

/// ∃-projection of the last context variable.  The result lives in
/// ctx_drop(c) and is equivalent to ∃y φ over every algebraically closed
/// field of the base.
FormulaPtr qe_project(const FormulaCtx& c, const FormulaPtr& f);

enum class Quant { Forall, Exists, Min, Max };

/// Quantify the last variable of h's context away.  Forall/Exists treat
/// the values as predicates (0 = holds); the result is {0,1}-valued with
/// the three-way definedness semantics.  Min/Max require ℕ-valued h,
/// total in y on the optional range (a formula in h's context; all y when
/// absent).
StratifiedFunction lift_quantifier(const StratifiedFunction& h, Quant which,
                                   const FormulaPtr& range = nullptr);

/// Univariate polynomial in an auxiliary variable Y with coefficients in
/// the context ring, ascending degree (u[k] multiplies Y^k).
using ParamUPoly = std::vector<MPoly>;

struct UniqueRootResult {
  StratifiedFunction flag;  ///< {0,1}-valued over the context
  StratifiedFunction xi;    ///< F-rational valued, covering the flag = 1 locus
};

/// Stratify, over the parameter space of the context, whether the common
/// roots of the f's avoiding the zeros of g contain exactly one point,
/// and return that point (possibly through an inverse-Frobenius depth).
UniqueRootResult unique_root(const FormulaCtx& c,
                             const std::vector<ParamUPoly>& fs,
                             const ParamUPoly& g);

/// h(z̄, y) valued in {0,1}: where the y with h = 1 is unique, return it
/// (as an F-rational of z̄); the output is unspecified elsewhere.
StratifiedFunction select_unique(const StratifiedFunction& h);

/// Equations (in the trailing nsym variables; leading variables are
/// parameters) cutting out the same set as F, but symmetric.  Errors:
/// NotSymmetric when V(F) is not invariant under permuting the trailing
/// variables.
std::vector<MPoly> symmetrize_closed(const FormulaCtx& c,
                                     const std::vector<MPoly>& F, int nsym);
/// Boolean combination of symmetric equalities equivalent to φ.
FormulaPtr symmetrize_formula(const FormulaCtx& c, const FormulaPtr& f,
                              int nsym);

/// Value returned by the relaxed descend variant on inputs where the
/// function fails to be invariant under permuting the roots.
inline const long kNotSymmetricSentinel = 42;

/// h(z̄, x₁..x_n) symmetric in the trailing n variables becomes
/// f(z̄, c₁..c_n) = h(z̄, roots of Xⁿ + c₁X^{n-1} + ⋯ + c_n).  With
/// strict = true, NotSymmetric is raised when h is not symmetric; with
/// strict = false the sentinel value is returned on the offending locus.
StratifiedFunction descend_symmetric(const StratifiedFunction& h, int nsym,
                                     bool strict = true);

/// Field program instruction set.  Registers come in three sorts:
/// naturals n0,n1,…; field elements f0,f1,…; root multisets m0,m1,….
enum class FOp {
  NatConst,  // a ← imm
  NatAdd,    // a ← b + c
  NatSub,    // a ← b ∸ c (saturating)
  NatMul,    // a ← b · c
  NatInput,  // a ← natural input #imm
  FldConst,  // a ← image of imm
  FldInput,  // a ← field input #imm
  FldAdd,    // a ← b + c
  FldNeg,    // a ← −b
  FldMul,    // a ← b · c
  FldInv,    // a ← b⁻¹
  FrobInv,   // a ← Frob_p⁻¹(b)
  Jmp,       // goto imm
  Jz,        // if f_a = 0 goto imm
  NatJz,     // if n_a = 0 goto imm
  Roots,     // m_a ← roots (with multiplicity) of Y^k + f_{regs[0]}·Y^{k-1} + ⋯ + f_{regs[k-1]}
  MsSize,    // n_a ← |m_b| (with multiplicity)
  MsPick,    // f_a ← some element of m_b, removed (invariance contract!)
  HaltNat,   // return n_a
  HaltFld,   // return f_a
};

struct FInstr {
  FOp op = FOp::Jmp;
  int a = 0, b = 0, c = 0;
  Int imm = 0;
  std::vector<int> regs;
};

struct FieldProgram {
  std::vector<FInstr> code;
  int nNat = 0, nFld = 0, nMs = 0;  ///< register file sizes
  int natInputs = 0, fldInputs = 0;
};

/// Line-oriented assembly: `nconst n0 5`, `finput f0 0`, `fadd f2 f0 f1`,
/// `finv f1 f0`, `frobinv f1 f0`, `jz f0 lbl`, `njz n0 lbl`, `jmp lbl`,
/// `roots m0 f1 f2`, `msize n0 m0`, `mpick f0 m0`, `haltn n0`,
/// `haltf f0`, labels `lbl:`, comments `; …`.  Errors: BadProgram.
FieldProgram fp_parse(const std::string& text);
std::string fp_to_string(const FieldProgram& p);

struct ConcreteResult {
  bool isNat = true;
  Int nat = 0;
  FElem fld;
  FieldPtr K;  ///< field of fld; may extend the input field (factor oracle)
};

/// Direct interpretation over a concrete field.  Errors: DivisionByZero,
/// BudgetExceeded (steps), UsageError (arity/characteristic),
/// EmptyMultiset, FrobInvUnavailable propagated from the field layer.
ConcreteResult run_program_concrete(const FieldProgram& p, const FieldPtr& K,
                                    const std::vector<Int>& natIn,
                                    const std::vector<FElem>& fldIn,
                                    long budget = 200000);

/// Symbolic execution with the field inputs as indeterminates x0,…:
/// lazily enumerated pieces of the stratified function computed by the
/// program.  Every zero test splits the current étale algebra; paths that
/// divide by zero contribute undefined strata (no piece).  Errors (thrown
/// from next()): InvarianceViolation (output or oracle coefficients not
/// permutation-invariant: residual degree > 1), BudgetExceeded (per-path
/// step limit).
PieceStream run_program_symbolic(const FieldProgram& p, const VmBase& base,
                                 const std::vector<Int>& natIn,
                                 long stepBudget = 10000);

struct TotalityResult {
  enum Kind { Total, NotTotal, Unknown } kind = Unknown;
  StratifiedFunction fn;  ///< Total: truncated, exclusive normal form
  int pieces = 0;         ///< Total: prefix length consumed
  FormulaPtr witness;     ///< NotTotal: nonempty complement of the union
};

/// Pull at most `budget` pieces, testing after each prefix whether the
/// union of the piece formulas already covers the space.
TotalityResult totality(PieceStream& s, int budget);

struct P0Data {
  Int p0;          ///< 1 + the largest prime mentioned by the stratification
  SFValue stable;  ///< value at the integer point, valid in every char ≥ p0
};

/// For a total stratified function over the ℤ base and an integer input
/// point: the threshold p₀ beyond which the value no longer depends on
/// the characteristic, with the stable value (reduce mod p to evaluate).
P0Data p0_threshold(const StratifiedFunction& f, const std::vector<Int>& pt);

}  // namespace effalg
