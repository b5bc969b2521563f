#include <cstdio>
#include <string>
#include <vector>

#include "effalg/fieldvm.hpp"

using namespace effalg;

static int failures = 0;
#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      failures++;                                                    \
      std::printf("FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond);    \
    }                                                                \
  } while (0)

#define CHECK_CODE(expr, code_)                    \
  do {                                             \
    bool thrown_ = false;                          \
    try {                                          \
      expr;                                        \
    } catch (const EffError& e_) {                 \
      thrown_ = true;                              \
      CHECK(e_.code == code_);                     \
    }                                              \
    CHECK(thrown_);                                \
  } while (0)

static FormulaPtr pf(const FormulaCtx& c, const std::string& s) {
  return bf_parse(c, s);
}

static bool feq(const FormulaCtx& c, const FormulaPtr& f,
                const std::string& s) {
  return bf_equals(c, f, pf(c, s));
}

static void test_parse_print() {
  FormulaCtx c = formula_ctx(vm_fp(1), {"x", "y"});
  for (const char* s :
       {"x = 0", "x != 0", "x = 0 & y != 0", "x = 0 | (y = 0 & x != 0)",
        "!(x = 0 & y = 0)", "true", "false", "x^2 + y = 1",
        "(x + y)*(x - y) = 0"}) {
    FormulaPtr f = pf(c, s);
    FormulaPtr g = pf(c, bf_to_string(c, f));
    CHECK(bf_equals(c, f, g));
  }
  CHECK(bf_is_true(pf(c, "true")));
  CHECK(bf_is_false(pf(c, "false")));
  CHECK(bf_is_true(pf(c, "0 = 0")));
  CHECK(bf_is_false(pf(c, "1 = 0")));
  CHECK_CODE(pf(c, "x ="), "SchemaError");
  CHECK_CODE(pf(c, "x = 0 &"), "SchemaError");
  CHECK_CODE(pf(c, "z = 0"), "SchemaError");
  std::printf("  parse/print ok\n");
}

static void test_dnf() {
  FormulaCtx c = formula_ctx(vm_fp(1), {"x", "y"});
  auto ds = bf_dnf(c, pf(c, "!(x = 0 & y = 0)"));
  CHECK(ds.size() == 2);
  FormulaPtr back = bf_from_dnf(c, ds);
  CHECK(feq(c, back, "x != 0 | y != 0"));
  // syntactic contradictions inside a disjunct are dropped
  ds = bf_dnf(c, pf(c, "x = 0 & x != 0"));
  CHECK(ds.empty());
  ds = bf_dnf(c, pf(c, "(x = 0 | y = 0) & (x != 0 | y != 0)"));
  CHECK(ds.size() == 2);
  std::printf("  dnf ok\n");
}

static void test_emptiness() {
  FormulaCtx c = formula_ctx(vm_fp(1), {"x"});
  CHECK(bf_is_empty(c, pf(c, "x = 0 & x != 0")));
  // nonempty over the algebraic closure even without a rational point
  CHECK(!bf_is_empty(c, pf(c, "x^2 + 1 = 0")));
  CHECK(bf_implies(c, pf(c, "x = 0"), pf(c, "x^3 = 0")));
  CHECK(bf_implies(c, pf(c, "x^3 = 0"), pf(c, "x = 0")));
  CHECK(bf_equals(c, pf(c, "x = 0"), pf(c, "x^3 = 0")));
  CHECK(!bf_equals(c, pf(c, "x = 0"), pf(c, "x^2 = 1")));

  FormulaCtx c2 = formula_ctx(vm_fp(5), {"x", "y"});
  CHECK(bf_is_empty(c2, pf(c2, "x*y = 1 & x = 0")));
  CHECK(!bf_is_empty(c2, pf(c2, "x*y = 1 & x = 2")));
  CHECK(bf_implies(c2, pf(c2, "x = 2 & y = 3"), pf(c2, "x*y = 1")));
  std::printf("  emptiness ok\n");
}

static void test_z_base() {
  FormulaCtx c = formula_ctx(vm_z(), {"x"});
  // a prime constant vanishes exactly in its own characteristic
  CHECK(!bf_is_empty(c, pf(c, "2 = 0")));
  CHECK(bf_is_empty(c, pf(c, "2 = 0 & 3 = 0")));
  CHECK(bf_is_empty(c, pf(c, "6 = 0 & x != x")));
  CHECK(!bf_is_empty(c, pf(c, "6 = 0 & 2 = 0")));
  CHECK(bf_implies(c, pf(c, "2 = 0 & x = 1"), pf(c, "x^2 = 1")));
  // 2x = 0 admits char-2 points with x free, so it is strictly weaker
  CHECK(bf_implies(c, pf(c, "x = 0"), pf(c, "2*x = 0")));
  CHECK(!bf_implies(c, pf(c, "2*x = 0"), pf(c, "x = 0")));
  CHECK(!bf_equals(c, pf(c, "2*x = 0"), pf(c, "x = 0")));
  CHECK(bf_equals(c, pf(c, "2*x = 0"), pf(c, "x = 0 | 2 = 0")));
  // Rabinowitsch certificates with denominator 2 must surface char 2,
  // where 2x = 1 has no solution at all
  CHECK(bf_is_empty(c, pf(c, "2*x = 1 & 2 = 0")));
  CHECK(!bf_is_empty(c, pf(c, "2*x = 1 & 3 = 0")));
  CHECK(bf_is_empty(c, pf(c, "2*x = 1 & x = 0")));
  CHECK(bf_is_empty(c, pf(c, "2*x = 1 & x = 1")));
  CHECK(bf_equals(c, pf(c, "2*x = 1 & x = 2"), pf(c, "3 = 0 & x = 2")));
  std::printf("  Z base ok\n");
}

static void test_closure() {
  FormulaCtx c = formula_ctx(vm_fp(1), {"x", "y"});
  CHECK(bf_is_true(bf_closure(c, pf(c, "x != 0"))));
  CHECK(feq(c, bf_closure(c, pf(c, "x = 0 & y != 0")), "x = 0"));
  CHECK(feq(c, bf_closure(c, pf(c, "x = 0 | y = 0")), "x*y = 0"));
  CHECK(feq(c, bf_closure(c, pf(c, "x*y = 1")), "x*y = 1"));
  CHECK(bf_is_false(bf_closure(c, pf(c, "false"))));
  // closure is the identity on closed sets and is idempotent
  FormulaPtr f = pf(c, "x^2 = y & x != y");
  FormulaPtr cl = bf_closure(c, f);
  CHECK(bf_implies(c, f, cl));
  CHECK(bf_equals(c, bf_closure(c, cl), cl));
  std::printf("  closure ok\n");
}

static void test_eval_extend() {
  FormulaCtx c = formula_ctx(vm_fp(5), {"x"});
  FieldPtr F5 = Field::Fp(5);
  CHECK(bf_eval(c, pf(c, "x^2 + 1 = 0"), F5, {F5->from_int(2)}));
  CHECK(!bf_eval(c, pf(c, "x^2 + 1 = 0"), F5, {F5->from_int(1)}));
  CHECK_CODE(bf_eval(c, pf(c, "x = 0"), Field::Fp(3), {Field::Fp(3)->zero()}),
             "UsageError");
  CHECK_CODE(bf_eval(c, pf(c, "x = 0"), F5, {}), "UsageError");

  FormulaCtx cz = formula_ctx(vm_z(), {"x"});
  CHECK(bf_eval(cz, pf(cz, "5 = 0"), F5, {F5->zero()}));
  CHECK(!bf_eval(cz, pf(cz, "3 = 0"), F5, {F5->zero()}));
  FieldPtr Q = Field::Q();
  CHECK(!bf_eval(cz, pf(cz, "3 = 0"), Q, {Q->zero()}));

  FormulaCtx big = formula_ctx(vm_fp(5), {"a", "x", "b"});
  FormulaPtr moved = bf_extend(c, pf(c, "x^2 + 1 = 0"), big);
  CHECK(bf_eval(big, moved, F5, {F5->zero(), F5->from_int(2), F5->zero()}));
  FormulaCtx miss = formula_ctx(vm_fp(5), {"a", "b"});
  CHECK_CODE(bf_extend(c, pf(c, "x = 0"), miss), "UnknownVariable");
  FormulaCtx other = formula_ctx(vm_fp(3), {"x"});
  CHECK_CODE(bf_extend(c, pf(c, "x = 0"), other), "BaseMismatch");
  std::printf("  eval/extend ok\n");
}

static void test_frational() {
  FormulaCtx c = formula_ctx(vm_fp(5), {"x"});
  FieldPtr F5 = Field::Fp(5);
  FRational u = fr_var(c, 0);
  CHECK(F5->eq(fr_eval(u, F5, {F5->from_int(3)}), F5->from_int(3)));
  FRational inv = fr_div(fr_const(c, 1), u);
  CHECK_CODE(fr_eval(inv, F5, {F5->zero()}), "UndefinedAtPoint");
  CHECK(F5->eq(fr_eval(inv, F5, {F5->from_int(2)}), F5->from_int(3)));

  // arithmetic and reduction
  FRational sum = fr_add(inv, u);
  CHECK(fr_eq(sum, fr_make(c, mp_parse(c.R, "x^2 + 1"), mp_parse(c.R, "x"))));
  FRational red = fr_make(c, mp_parse(c.R, "x^2 - 1"), mp_parse(c.R, "x - 1"));
  CHECK(fr_eq(red, fr_make(c, mp_parse(c.R, "x + 1"), mp_parse(c.R, "1"))));
  CHECK(fr_is_zero(fr_sub(sum, sum)));
  CHECK_CODE(fr_div(u, fr_sub(sum, sum)), "DivisionByZero");

  // composition: (1/x) ∘ (x + 1) = 1/(x + 1)
  FRational shift = fr_add(u, fr_const(c, 1));
  FRational comp = fr_compose(inv, {shift});
  CHECK(fr_eq(comp, fr_div(fr_const(c, 1), shift)));
  CHECK_CODE(fr_eval(comp, F5, {F5->from_int(4)}), "UndefinedAtPoint");

  // inverse Frobenius depth
  FormulaCtx c2 = formula_ctx(vm_fp(2), {"x"});
  FRational fro = fr_make(c2, mp_var(c2.R, 0), mp_from_int(c2.R, 1), 1);
  CHECK(fro.depth == 1);
  // x² at depth 1 collapses to x at depth 0
  FRational sq = fr_make(c2, mp_parse(c2.R, "x^2"), mp_from_int(c2.R, 1), 1);
  CHECK(sq.depth == 0 && fr_eq(sq, fr_var(c2, 0)));
  // composing Frob⁻¹(x) with itself doubles the depth
  FRational fro2 = fr_compose(fro, {fro});
  CHECK(fro2.depth == 2);
  UPoly quad = {Field::Fp(2)->one(), Field::Fp(2)->one(), Field::Fp(2)->one()};
  FieldPtr F4 = Field::algext(Field::Fp(2), "g", quad);
  FElem g = F4->generator();
  CHECK(F4->eq(fr_eval(fro, F4, {g}), F4->frob_inv(g)));
  CHECK(F4->eq(fr_eval(fro2, F4, {g}), F4->frob_inv(F4->frob_inv(g))));

  // graphs
  FormulaCtx cg = formula_ctx(vm_fp(2), {"x", "y"});
  FormulaPtr gr = fr_graph(fro, cg, 1);
  CHECK(bf_equals(cg, gr, bf_parse(cg, "y^2 - x = 0")));
  FormulaCtx cq = formula_ctx(vm_fp(5), {"x", "y"});
  FormulaPtr gi = fr_graph(inv, cq, 1);
  CHECK(bf_equals(cq, gi, bf_parse(cq, "x*y - 1 = 0 & x != 0")));
  CHECK_CODE(fr_graph(fro, cq, 1), "BaseMismatch");

  // mixed-base arithmetic is rejected
  FRational u3 = fr_var(formula_ctx(vm_fp(3), {"x"}), 0);
  CHECK_CODE(fr_add(u, u3), "BaseMismatch");
  std::printf("  frational ok\n");
}

static void test_stratified_basics() {
  FormulaCtx c = formula_ctx(vm_fp(1), {"x", "y"});
  StratifiedFunction f;
  f.ctx = c;
  f.pieces.push_back(SFPiece{pf(c, "x = 0"), sv_nat(0)});
  f.pieces.push_back(SFPiece{pf(c, "x = 0 | y = 0"), sv_nat(1)});
  f.pieces.push_back(SFPiece{pf(c, "true"), sv_nat(2)});

  StratifiedFunction ex = sf_exclusive(f);
  CHECK(ex.pieces.size() == 3);
  CHECK(sf_certify_total(ex));
  StratifiedFunction part;
  part.ctx = c;
  part.pieces.push_back(SFPiece{pf(c, "x = 0"), sv_nat(0)});
  CHECK(!sf_certify_total(part));

  FieldPtr Q = Field::Q();
  auto at = [&](long a, long b) {
    return sf_eval(f, Q, {Q->from_int(a), Q->from_int(b)});
  };
  CHECK(at(0, 7) && at(0, 7)->nat == 0);
  CHECK(at(3, 0) && at(3, 0)->nat == 1);
  CHECK(at(3, 4) && at(3, 4)->nat == 2);
  CHECK(!sf_eval(part, Q, {Q->from_int(1), Q->from_int(1)}));

  // streams
  PieceStream s = sf_stream(f);
  StratifiedFunction g2 = sf_collect(s, 2);
  CHECK(g2.pieces.size() == 2);
  CHECK(!s.next() || g2.pieces.size() == 2);

  // decision-tree round trip preserves the function
  DTreePtr t = sf_to_tree(f);
  StratifiedFunction back = tree_to_sf(c, t);
  FieldPtr F5 = Field::Fp(5);
  FormulaCtx c5 = formula_ctx(vm_fp(5), {"x", "y"});
  (void)c5;
  for (long a = 0; a < 4; a++)
    for (long b = 0; b < 4; b++) {
      auto v1 = sf_eval(f, Q, {Q->from_int(a), Q->from_int(b)});
      auto v2 = sf_eval(back, Q, {Q->from_int(a), Q->from_int(b)});
      CHECK(v1 && v2 && sv_eq(*v1, *v2));
    }

  std::string doc = sf_to_string(ex);
  CHECK(doc.find("total") != std::string::npos);
  CHECK(doc.find("->") != std::string::npos);
  std::printf("  stratified basics ok\n");
}

int main() {
  test_parse_print();
  test_dnf();
  test_emptiness();
  test_z_base();
  test_closure();
  test_eval_extend();
  test_frational();
  test_stratified_basics();
  if (failures) {
    std::printf("test_fieldvm_formula: %d failure(s)\n", failures);
    return 1;
  }
  std::printf("test_fieldvm_formula: all checks passed\n");
  return 0;
}
