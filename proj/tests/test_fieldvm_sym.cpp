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
  } while (0)

static FormulaPtr pf(const FormulaCtx& c, const std::string& s) {
  return bf_parse(c, s);
}

static bool feq(const FormulaCtx& c, const FormulaPtr& f,
                const std::string& s) {
  return bf_equals(c, f, pf(c, s));
}

/// Every polynomial atom of f must be invariant under swapping the two
/// trailing variables.
static bool atoms_symmetric(const FormulaCtx& c, const FormulaPtr& f,
                            int nsym) {
  int nv = c.R->nvars();
  std::vector<MPoly> images;
  for (int i = 0; i < nv; i++) images.push_back(mp_var(c.R, i));
  for (int i = 0; i + 1 < nsym; i++) {
    std::vector<MPoly> sw = images;
    std::swap(sw[nv - nsym + i], sw[nv - nsym + i + 1]);
    for (const Disjunct& d : bf_dnf(c, f))
      for (const auto* side : {&d.eqs, &d.neqs})
        for (const MPoly& g : *side)
          if (!mp_eq(c.R, g, mp_map(c.R, g, c.R, sw))) return false;
  }
  return true;
}

static FormulaPtr conj_eq0(const FormulaCtx& c, const std::vector<MPoly>& F) {
  std::vector<FormulaPtr> atoms;
  for (const MPoly& f : F) atoms.push_back(bf_eq0(c, f));
  return bf_and(std::move(atoms));
}

static void test_symmetrize_closed() {
  FormulaCtx c = formula_ctx(vm_fp(1), {"x1", "x2"});
  std::vector<MPoly> F = {mp_var(c.R, 0), mp_var(c.R, 1)};
  std::vector<MPoly> out = symmetrize_closed(c, F, 2);
  CHECK(out.size() == 2);
  CHECK(mp_eq(c.R, out[0], mp_parse(c.R, "x1 + x2")));
  CHECK(mp_eq(c.R, out[1], mp_parse(c.R, "x1*x2")));
  CHECK(bf_equals(c, conj_eq0(c, out), pf(c, "x1 = 0 & x2 = 0")));

  CHECK_CODE(symmetrize_closed(c, {mp_var(c.R, 0)}, 2), "NotSymmetric");

  // already-symmetric generator passes through
  std::vector<MPoly> s1 = symmetrize_closed(c, {mp_parse(c.R, "x1 + x2")}, 2);
  CHECK(s1.size() == 1 && mp_eq(c.R, s1[0], mp_parse(c.R, "x1 + x2")));

  // the diagonal: generator is only anti-symmetric, output must be
  std::vector<MPoly> s2 = symmetrize_closed(c, {mp_parse(c.R, "x1 - x2")}, 2);
  CHECK(bf_equals(c, conj_eq0(c, s2), pf(c, "x1 = x2")));
  CHECK(atoms_symmetric(c, conj_eq0(c, s2), 2));

  // leading parameter stays untouched
  FormulaCtx cz = formula_ctx(vm_fp(1), {"z", "x1", "x2"});
  std::vector<MPoly> F2 = {mp_parse(cz.R, "x1 - z"), mp_parse(cz.R, "x2 - z")};
  std::vector<MPoly> out2 = symmetrize_closed(cz, F2, 2);
  CHECK(bf_equals(cz, conj_eq0(cz, out2), pf(cz, "x1 = z & x2 = z")));
  CHECK(atoms_symmetric(cz, conj_eq0(cz, out2), 2));

  CHECK_CODE(symmetrize_closed(c, F, 3), "UsageError");
  std::printf("  symmetrize_closed ok\n");
}

static void test_symmetrize_formula() {
  FormulaCtx c = formula_ctx(vm_fp(1), {"x1", "x2"});
  FormulaPtr r1 = symmetrize_formula(c, pf(c, "x1 = 0 | x2 = 0"), 2);
  CHECK(feq(c, r1, "x1*x2 = 0"));
  CHECK(atoms_symmetric(c, r1, 2));

  FormulaPtr xo = pf(c, "(x1 = 0 & x2 != 0) | (x2 = 0 & x1 != 0)");
  FormulaPtr r2 = symmetrize_formula(c, xo, 2);
  CHECK(bf_equals(c, r2, xo));
  CHECK(bf_equals(c, r2,
                  pf(c, "x1*x2 = 0 & !(x1 + x2 = 0 & x1*x2 = 0)")));
  CHECK(atoms_symmetric(c, r2, 2));

  FormulaPtr r3 = symmetrize_formula(c, pf(c, "x1 = x2"), 2);
  CHECK(feq(c, r3, "x1 = x2"));
  CHECK(atoms_symmetric(c, r3, 2));

  CHECK_CODE(symmetrize_formula(c, pf(c, "x1 = 0"), 2), "NotSymmetric");
  CHECK_CODE(symmetrize_formula(c, pf(c, "x1 = 0 & x2 != 0"), 2),
             "NotSymmetric");

  // mixed equalities and inequalities with a coincidence locus
  FormulaPtr tricky = pf(c, "x1*x2 = 1 | (x1 + x2 = 0 & x1 != 0)");
  FormulaPtr r4 = symmetrize_formula(c, tricky, 2);
  CHECK(bf_equals(c, r4, tricky));
  CHECK(atoms_symmetric(c, r4, 2));
  FieldPtr F7 = Field::Fp(7);
  for (long a = 0; a < 7; a++)
    for (long b = 0; b < 7; b++) {
      std::vector<FElem> pt = {F7->from_int(a), F7->from_int(b)};
      CHECK(bf_eval(c, tricky, F7, pt) == bf_eval(c, r4, F7, pt));
    }

  // three symmetric variables: at least two coordinates vanish
  FormulaCtx c3 = formula_ctx(vm_fp(1), {"x1", "x2", "x3"});
  FormulaPtr two0 = pf(
      c3, "(x1 = 0 & x2 = 0) | (x1 = 0 & x3 = 0) | (x2 = 0 & x3 = 0)");
  FormulaPtr r5 = symmetrize_formula(c3, two0, 3);
  CHECK(bf_equals(c3, r5, two0));
  CHECK(feq(c3, r5,
            "x1*x2 + x1*x3 + x2*x3 = 0 & x1*x2*x3 = 0"));
  CHECK(atoms_symmetric(c3, r5, 3));
  std::printf("  symmetrize_formula ok\n");
}

static StratifiedFunction indicator(const FormulaCtx& c,
                                    const std::string& s) {
  StratifiedFunction h;
  h.ctx = c;
  h.pieces.push_back(SFPiece{pf(c, s), sv_nat(1)});
  h.pieces.push_back(SFPiece{bf_true(), sv_nat(0)});
  return h;
}

static void test_descend_nat() {
  FormulaCtx c = formula_ctx(vm_fp(1), {"x1", "x2"});
  StratifiedFunction d = descend_symmetric(indicator(c, "x1 = x2"), 2);
  const FormulaCtx& co = d.ctx;
  CHECK(co.R->nvars() == 2);
  CHECK(co.R->vars[0] == "c1" && co.R->vars[1] == "c2");
  FieldPtr Q = Field::Q();
  // X^2 - 3X + 2 = (X-1)(X-2): distinct roots
  auto v = sf_eval(d, Q, {Q->from_int(-3), Q->from_int(2)});
  CHECK(v && v->nat == 0);
  // X^2 - 2X + 1 = (X-1)^2: double root
  v = sf_eval(d, Q, {Q->from_int(-2), Q->from_int(1)});
  CHECK(v && v->nat == 1);
  bool found = false;
  for (const SFPiece& p : d.pieces)
    if (p.val.nat == 1) {
      found = true;
      CHECK(feq(co, p.phi, "c1^2 - 4*c2 = 0"));
    }
  CHECK(found);

  CHECK_CODE(descend_symmetric(indicator(c, "x1 = 0"), 2), "NotSymmetric");

  StratifiedFunction rel = descend_symmetric(indicator(c, "x1 = 0"), 2, false);
  // both roots zero
  v = sf_eval(rel, Q, {Q->from_int(0), Q->from_int(0)});
  CHECK(v && v->nat == 1);
  // roots 0 and -1: the answer depends on the ordering
  v = sf_eval(rel, Q, {Q->from_int(1), Q->from_int(0)});
  CHECK(v && v->nat == kNotSymmetricSentinel);
  // no zero root
  v = sf_eval(rel, Q, {Q->from_int(0), Q->from_int(1)});
  CHECK(v && v->nat == 0);

  // sampling invariant: h(x) == descended(elementary symmetric values)
  FormulaCtx c5 = formula_ctx(vm_fp(5), {"x1", "x2"});
  StratifiedFunction h5;
  h5.ctx = c5;
  h5.pieces.push_back(SFPiece{pf(c5, "x1*x2 = 0"), sv_nat(5)});
  h5.pieces.push_back(SFPiece{bf_true(), sv_nat(7)});
  StratifiedFunction d5 = descend_symmetric(h5, 2);
  FieldPtr F5 = Field::Fp(5);
  for (long a = 0; a < 5; a++)
    for (long b = 0; b < 5; b++) {
      std::vector<FElem> x = {F5->from_int(a), F5->from_int(b)};
      std::vector<FElem> cc = {F5->from_int(-(a + b)), F5->from_int(a * b)};
      auto hv = sf_eval(h5, F5, x);
      auto fv = sf_eval(d5, F5, cc);
      CHECK(hv && fv && hv->nat == fv->nat);
    }

  // parameter in front: does some root equal z?
  FormulaCtx cz = formula_ctx(vm_fp(1), {"z", "x1", "x2"});
  StratifiedFunction dz = descend_symmetric(indicator(cz, "x1 = z"), 2, false);
  CHECK(dz.ctx.R->nvars() == 3);
  CHECK(dz.ctx.R->vars[0] == "z");
  // X^2 - 2X + 1 at z = 1: double root equal to z
  v = sf_eval(dz, Q, {Q->from_int(1), Q->from_int(-2), Q->from_int(1)});
  CHECK(v && v->nat == 1);
  // roots 1,2 at z = 1: one ordering matches, the other does not
  v = sf_eval(dz, Q, {Q->from_int(1), Q->from_int(-3), Q->from_int(2)});
  CHECK(v && v->nat == kNotSymmetricSentinel);
  // roots 2,3 at z = 1: no ordering matches
  v = sf_eval(dz, Q, {Q->from_int(1), Q->from_int(-5), Q->from_int(6)});
  CHECK(v && v->nat == 0);

  // mixed value kinds are rejected
  StratifiedFunction mixed;
  mixed.ctx = c;
  mixed.pieces.push_back(SFPiece{pf(c, "x1 = x2"), sv_nat(1)});
  mixed.pieces.push_back(SFPiece{bf_true(), sv_rat(fr_var(c, 0))});
  CHECK_CODE(descend_symmetric(mixed, 2), "UsageError");
  CHECK_CODE(descend_symmetric(indicator(c, "x1 = x2"), 0), "UsageError");
  std::printf("  descend_symmetric (naturals) ok\n");
}

static void test_descend_nat_z() {
  FormulaCtx c = formula_ctx(vm_z(), {"x1", "x2"});
  StratifiedFunction d = descend_symmetric(indicator(c, "x1 = x2"), 2);
  bool found = false;
  for (const SFPiece& p : d.pieces)
    if (p.val.nat == 1) {
      found = true;
      CHECK(feq(d.ctx, p.phi, "c1^2 - 4*c2 = 0"));
    }
  CHECK(found);
  FieldPtr F2 = Field::Fp(2);
  // over F2 the double-root condition X^2+c1X+c2 degenerates to c1 = 0
  auto v = sf_eval(d, F2, {F2->from_int(0), F2->from_int(1)});
  CHECK(v && v->nat == 1);
  v = sf_eval(d, F2, {F2->from_int(1), F2->from_int(1)});
  CHECK(v && v->nat == 0);
  std::printf("  descend_symmetric over Z ok\n");
}

static void test_descend_rat() {
  FormulaCtx c = formula_ctx(vm_fp(1), {"x1", "x2"});
  StratifiedFunction e1;
  e1.ctx = c;
  e1.pieces.push_back(
      SFPiece{bf_true(), sv_rat(fr_make(c, mp_parse(c.R, "x1 + x2"),
                                        mp_from_int(c.R, 1)))});
  StratifiedFunction d1 = descend_symmetric(e1, 2);
  const FormulaCtx& co = d1.ctx;
  CHECK(d1.pieces.size() == 1);
  CHECK(feq(co, d1.pieces[0].phi, "true"));
  CHECK(fr_eq(*d1.pieces[0].val.rat,
              fr_make(co, mp_neg(co.R, mp_var(co.R, 0)),
                      mp_from_int(co.R, 1))));

  StratifiedFunction e2;
  e2.ctx = c;
  e2.pieces.push_back(
      SFPiece{bf_true(), sv_rat(fr_make(c, mp_parse(c.R, "x1^2 + x2^2"),
                                        mp_from_int(c.R, 1)))});
  StratifiedFunction d2 = descend_symmetric(e2, 2);
  CHECK(d2.pieces.size() == 1);
  CHECK(fr_eq(*d2.pieces[0].val.rat,
              fr_make(co, mp_parse(co.R, "c1^2 - 2*c2"),
                      mp_from_int(co.R, 1))));

  // projection to the first root is not symmetric
  StratifiedFunction pr1;
  pr1.ctx = c;
  pr1.pieces.push_back(SFPiece{bf_true(), sv_rat(fr_var(c, 0))});
  CHECK_CODE(descend_symmetric(pr1, 2), "NotSymmetric");
  StratifiedFunction rel = descend_symmetric(pr1, 2, false);
  FieldPtr Q = Field::Q();
  auto v = sf_eval(rel, Q, {Q->from_int(-2), Q->from_int(1)});
  CHECK(v && v->kind == SFValue::Rat);
  CHECK(Q->eq(fr_eval(*v->rat, Q, {Q->from_int(-2), Q->from_int(1)}),
              Q->from_int(1)));
  v = sf_eval(rel, Q, {Q->from_int(-3), Q->from_int(2)});
  CHECK(v && v->kind == SFValue::Rat);
  CHECK(Q->eq(fr_eval(*v->rat, Q, {Q->from_int(-3), Q->from_int(2)}),
              Q->from_int(kNotSymmetricSentinel)));

  // sampling invariant over F7 for a rational value with a pole
  FormulaCtx c7 = formula_ctx(vm_fp(7), {"x1", "x2"});
  StratifiedFunction h7;
  h7.ctx = c7;
  h7.pieces.push_back(
      SFPiece{pf(c7, "x1 + x2 != 0"),
              sv_rat(fr_make(c7, mp_parse(c7.R, "x1*x2"),
                             mp_parse(c7.R, "x1 + x2")))});
  StratifiedFunction d7 = descend_symmetric(h7, 2);
  FieldPtr F7 = Field::Fp(7);
  for (long a = 0; a < 7; a++)
    for (long b = 0; b < 7; b++) {
      std::vector<FElem> x = {F7->from_int(a), F7->from_int(b)};
      std::vector<FElem> cc = {F7->from_int(-(a + b)), F7->from_int(a * b)};
      auto hv = sf_eval(h7, F7, x);
      auto fv = sf_eval(d7, F7, cc);
      CHECK(!hv == !fv);
      if (hv && fv)
        CHECK(F7->eq(fr_eval(*hv->rat, F7, x), fr_eval(*fv->rat, F7, cc)));
    }
  std::printf("  descend_symmetric (field values) ok\n");
}

int main() {
  test_symmetrize_closed();
  test_symmetrize_formula();
  test_descend_nat();
  test_descend_nat_z();
  test_descend_rat();
  if (failures) {
    std::printf("test_fieldvm_sym: %d failure(s)\n", failures);
    return 1;
  }
  std::printf("test_fieldvm_sym: all checks passed\n");
  return 0;
}
