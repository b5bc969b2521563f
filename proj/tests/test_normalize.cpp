#include <cstdio>
#include <string>
#include <vector>

#include "effalg/modules.hpp"

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

static Ideal parse_all(const RingPtr& R, const std::vector<std::string>& ss) {
  Ideal out;
  for (auto& s : ss) out.push_back(mp_parse(R, s));
  return out;
}

static bool ideq(const RingPtr& R, const Ideal& I,
                 const std::vector<std::string>& ss) {
  return ideal_eq(R, I, parse_all(R, ss));
}

// does f lie in the subalgebra generated by the first n variables of B?
// checked with an elimination order that pushes the added variables first
static bool in_subalgebra(const QRingPtr& B, int n, const MPoly& f) {
  const RingPtr& S = B->S;
  int m = S->nvars() - n;
  if (m == 0) return true;
  std::vector<std::string> names;
  for (int i = 0; i < m; i++) names.push_back(S->vars[n + i]);
  for (int i = 0; i < n; i++) names.push_back(S->vars[i]);
  RingPtr T = PolyRing::make(S->K, names, MOrder{OrdKind::Block, m});
  std::vector<MPoly> img(S->nvars());
  for (int i = 0; i < n; i++) img[i] = mp_var(T, m + i);
  for (int i = 0; i < m; i++) img[n + i] = mp_var(T, i);
  Ideal IT;
  for (const MPoly& g : B->I) IT.push_back(mp_map(S, g, T, img));
  GB gb = groebner_ideal(T, IT);
  MPoly r = nf_ideal(T, gb, mp_map(S, f, T, img));
  for (const MTerm& t : r)
    for (int i = 0; i < m; i++)
      if (t.e[i] > 0) return false;
  return true;
}

/* ============================= algebra morphisms ========================== */

static void test_alg_morphism() {
  RingPtr S1 = PolyRing::make(Field::Q(), {"x"});
  QRingPtr A1 = QuotientRing::make(S1, {});

  // identity on k[x]
  AlgebraMorphism id = alg_morphism(A1, A1, {mp_parse(S1, "x")});
  CHECK(am_kernel(id).empty());
  CHECK(am_is_injective(id));
  CHECK(am_is_surjective(id));
  std::vector<Expo> mons;
  ModulePresentation pres;
  CHECK(am_is_finite(id, &pres, &mons));
  CHECK(mons.size() == 1 && pres.rank == 1 && pres.rels.empty());
  CHECK(am_is_open_immersion(id, nullptr));

  // validation
  QRingPtr Adual = QuotientRing::make(S1, parse_all(S1, {"x^2"}));
  CHECK_CODE(alg_morphism(Adual, A1, {mp_parse(S1, "x")}), "NotAMorphism");
  CHECK_CODE(alg_morphism(A1, A1, {}), "SchemaError");
  RingPtr S5 = PolyRing::make(Field::Fp(5), {"x"});
  QRingPtr A5 = QuotientRing::make(S5, {});
  CHECK_CODE(alg_morphism(A1, A5, {mp_parse(S5, "x")}), "RingMismatch");

  // k[x] → k[x,y]: injective, not surjective, not finite
  RingPtr S2 = PolyRing::make(Field::Q(), {"x", "y"});
  QRingPtr A2 = QuotientRing::make(S2, {});
  AlgebraMorphism incl = alg_morphism(A1, A2, {mp_parse(S2, "x")});
  CHECK(am_kernel(incl).empty());
  CHECK(am_is_injective(incl));
  CHECK(!am_is_surjective(incl));
  CHECK(!am_is_finite(incl, nullptr, nullptr));

  // k[x,y] → k[x], y ↦ x^2: kernel is the parabola, surjective
  AlgebraMorphism par =
      alg_morphism(A2, A1, {mp_parse(S1, "x"), mp_parse(S1, "x^2")});
  CHECK(ideq(S2, am_kernel(par), {"y - x^2"}));
  CHECK(!am_is_injective(par));
  CHECK(am_is_surjective(par));
  CHECK(ideq(S2, am_locus_inj(par), {}));

  // k[x] → k[x,t]/(xt-1): an open immersion with iso locus (x)
  RingPtr St = PolyRing::make(Field::Q(), {"x", "t"});
  QRingPtr B = QuotientRing::make(St, parse_all(St, {"x*t - 1"}));
  AlgebraMorphism loc = alg_morphism(A1, B, {mp_parse(St, "x")});
  CHECK(am_kernel(loc).empty());
  CHECK(!am_is_surjective(loc));
  CHECK(!am_is_finite(loc, nullptr, nullptr));
  CHECK(ideq(S1, am_locus_inj(loc), {"1"}));
  CHECK(ideq(S1, am_locus_surj(loc), {"x"}));
  Ideal iso = am_locus_iso(loc);
  CHECK(ideq(S1, iso, {"x"}));
  std::vector<MPoly> wit;
  CHECK(am_is_open_immersion(loc, &wit));
  // the witness recombines to 1 in B
  CHECK(wit.size() == iso.size());
  MPoly one;
  for (size_t i = 0; i < iso.size(); i++) {
    MPoly img = mp_map(S1, iso[i], St, {mp_parse(St, "x")});
    one = mp_add(St, one, mp_mul(St, wit[i], img));
  }
  CHECK(B->elt_eq(one, mp_parse(St, "1")));

  // k[x] → k[x,y]/(y^2 - x): finite and free on {1, y}
  QRingPtr C = QuotientRing::make(S2, parse_all(S2, {"y^2 - x"}));
  AlgebraMorphism fin = alg_morphism(A1, C, {mp_parse(S2, "x")});
  CHECK(am_is_finite(fin, &pres, &mons));
  CHECK(mons.size() == 2 && pres.rank == 2 && pres.rels.empty());
  CHECK(mons[0] == Expo({0, 0}) && mons[1] == Expo({0, 1}));
  CHECK(!am_is_open_immersion(fin, nullptr));
}

/* ============================ Noether normalization ======================= */

static void test_noether() {
  RingPtr S1 = PolyRing::make(Field::Q(), {"x"});
  QRingPtr A1 = QuotientRing::make(S1, {});
  NoetherData n1 = noether_normalization(A1);
  CHECK(n1.P->nvars() == 1);
  CHECK(mp_eq(S1, n1.images[0], mp_parse(S1, "x")));
  CHECK(n1.module.rank == 1 && n1.module.rels.empty());

  // cusp: k[x] inside, free of rank two
  RingPtr S2 = PolyRing::make(Field::Q(), {"x", "y"});
  QRingPtr cusp = QuotientRing::make(S2, parse_all(S2, {"y^2 - x^3"}));
  NoetherData nc = noether_normalization(cusp);
  CHECK(nc.P->nvars() == 1);
  CHECK(mp_eq(S2, nc.images[0], mp_parse(S2, "x")));
  CHECK(nc.module.rank == 2 && nc.module.rels.empty());
  CHECK(nc.mons.size() == 2);

  // hyperbola: no coordinate subring works, the shear x+y does
  QRingPtr hyp = QuotientRing::make(S2, parse_all(S2, {"x*y - 1"}));
  NoetherData nh = noether_normalization(hyp);
  CHECK(nh.P->nvars() == 1);
  CHECK(mp_eq(S2, nh.images[0], mp_parse(S2, "x + y")));
  CHECK(nh.mons.size() == 2);

  // the result is always a finite injection
  QRingPtr cross = QuotientRing::make(S2, parse_all(S2, {"x*y"}));
  NoetherData nx = noether_normalization(cross);
  QRingPtr P = QuotientRing::make(nx.P, {});
  AlgebraMorphism f = alg_morphism(P, cross, nx.images);
  CHECK(am_is_finite(f, nullptr, nullptr));
  CHECK(am_is_injective(f));

  // dimension zero: an artinian ring over k[]
  QRingPtr art = QuotientRing::make(S1, parse_all(S1, {"x^2"}));
  NoetherData na = noether_normalization(art);
  CHECK(na.P->nvars() == 0);
  CHECK(na.module.rank == 2);

  CHECK_CODE(noether_normalization(QuotientRing::make(S1, parse_all(S1, {"1"}))),
             "ZeroRing");
}

/* ================================== pinch ================================= */

static void test_pinch() {
  RingPtr S = PolyRing::make(Field::Q(), {"x"});
  QRingPtr A = QuotientRing::make(S, {});

  std::vector<std::string> tn;
  QRingPtr B = pinch_algebra(A, parse_all(S, {"x"}), &tn);
  CHECK(tn.size() == 1 && tn[0] == "T1");
  CHECK(B->S->nvars() == 2);
  CHECK(ideq(B->S, B->I, {"T1^2 - x*T1"}));

  // pinching along (0) and (1)
  QRingPtr B0 = pinch_algebra(A, {}, nullptr);
  CHECK(B0->S->nvars() == 1 && B0->I.empty());
  QRingPtr B1 = pinch_algebra(A, parse_all(S, {"1"}), nullptr);
  CHECK(ideq(B1->S, B1->I, {"T1^2 - T1"}));

  // the two retractions agree exactly on V(I)
  AlgebraMorphism r0 =
      alg_morphism(B, A, {mp_parse(S, "x"), mp_parse(S, "0")});
  AlgebraMorphism r1 =
      alg_morphism(B, A, {mp_parse(S, "x"), mp_parse(S, "x")});
  Ideal eqz = qr_ideal(A, {mp_sub(S, r0.images[1], r1.images[1])});
  CHECK(ideq(S, eqz, {"x"}));

  // same invariant on a curve, pinched along a point
  RingPtr S2 = PolyRing::make(Field::Q(), {"x", "y"});
  QRingPtr cusp = QuotientRing::make(S2, parse_all(S2, {"y^2 - x^3"}));
  std::vector<std::string> tn2;
  QRingPtr P = pinch_algebra(cusp, parse_all(S2, {"x", "y"}), &tn2);
  CHECK(tn2.size() == 2);
  const RingPtr& SP = P->S;
  int n = 2;
  std::vector<MPoly> i0{mp_var(S2, 0), mp_var(S2, 1), mp_parse(S2, "0"),
                        mp_parse(S2, "0")};
  std::vector<MPoly> i1{mp_var(S2, 0), mp_var(S2, 1), mp_var(S2, 0),
                        mp_var(S2, 1)};
  (void)n;
  (void)SP;
  AlgebraMorphism q0 = alg_morphism(P, cusp, i0);
  AlgebraMorphism q1 = alg_morphism(P, cusp, i1);
  Ideal eqz2;
  for (size_t i = 0; i < q0.images.size(); i++)
    eqz2.push_back(mp_sub(S2, q0.images[i], q1.images[i]));
  CHECK(ideal_eq(S2, qr_ideal(cusp, eqz2),
                 qr_ideal(cusp, parse_all(S2, {"x", "y"}))));
}

/* =============================== smooth locus ============================= */

static void test_smooth_locus() {
  RingPtr S = PolyRing::make(Field::Q(), {"x", "y"});
  QRingPtr cusp = QuotientRing::make(S, parse_all(S, {"y^2 - x^3"}));
  CHECK(ideq(S, smooth_locus_ideal(cusp), {"x", "y"}));

  RingPtr S1 = PolyRing::make(Field::Q(), {"x"});
  CHECK(ideq(S1, smooth_locus_ideal(QuotientRing::make(S1, {})), {"1"}));

  QRingPtr cross = QuotientRing::make(S, parse_all(S, {"x*y"}));
  CHECK(ideq(S, smooth_locus_ideal(cross), {"x", "y"}));

  QRingPtr conic = QuotientRing::make(S, parse_all(S, {"y - x^2"}));
  CHECK(ideq(S, smooth_locus_ideal(conic), {"1"}));

  RingPtr S3 = PolyRing::make(Field::Q(), {"x", "y", "z"});
  QRingPtr umb = QuotientRing::make(S3, parse_all(S3, {"x^2 - y^2*z"}));
  CHECK(ideq(S3, smooth_locus_ideal(umb), {"x", "y"}));

  CHECK(ideq(S1, smooth_locus_ideal(QuotientRing::make(S1, parse_all(S1, {"1"}))),
             {"1"}));

  FieldPtr Ku = Field::trans(Field::Fp(3), "u");
  RingPtr Su = PolyRing::make(Ku, {"x"});
  CHECK_CODE(smooth_locus_ideal(QuotientRing::make(Su, {})), "UsageError");
}

/* ================================ normalize =============================== */

static void test_normalize_cusp() {
  RingPtr S = PolyRing::make(Field::Q(), {"x", "y"});
  QRingPtr A = QuotientRing::make(S, parse_all(S, {"y^2 - x^3"}));
  NormalizeResult r = normalize(A);
  CHECK(r.iterations >= 1);
  CHECK(!r.s2_applied);
  CHECK(r.components.size() == 1);
  CHECK(r.iterationCap.has_value());
  CHECK(*r.iterationCap >= Int(r.iterations));

  CHECK(am_is_injective(r.map));
  CHECK(am_is_finite(r.map, nullptr, nullptr));
  CHECK(!am_is_surjective(r.map));

  // the parameter t with t^2 = x and t^3 = y appears among the new variables
  const QRingPtr& T = r.tilde;
  const RingPtr& ST = T->S;
  bool found = false;
  for (int v = 2; v < ST->nvars(); v++) {
    MPoly t = mp_var(ST, v);
    if (T->is_zero_elt(mp_sub(ST, mp_mul(ST, t, t), mp_var(ST, 0))) &&
        T->is_zero_elt(
            mp_sub(ST, mp_mul(ST, t, mp_var(ST, 0)), mp_var(ST, 1))))
      found = true;
  }
  CHECK(found);

  // the conductor contains (x, y)
  for (int v = 2; v < ST->nvars(); v++) {
    CHECK(in_subalgebra(T, 2, mp_mul(ST, mp_var(ST, 0), mp_var(ST, v))));
    CHECK(in_subalgebra(T, 2, mp_mul(ST, mp_var(ST, 1), mp_var(ST, v))));
  }

  // normalizing again is the identity, and a normal curve is smooth
  NormalizeResult r2 = normalize(T);
  CHECK(r2.iterations == 0);
  CHECK(am_is_surjective(r2.map));
  CHECK(ideq(ST, smooth_locus_ideal(T), {"1"}));
}

static void test_normalize_node_f5() {
  RingPtr S = PolyRing::make(Field::Fp(5), {"x", "y"});
  QRingPtr A = QuotientRing::make(S, parse_all(S, {"y^2 - x^3 - x^2"}));
  NormalizeResult r = normalize(A);
  CHECK(r.iterations >= 1);
  const QRingPtr& T = r.tilde;
  const RingPtr& ST = T->S;

  // slope variable: t^2 = x + 1 and x t = y
  bool found = false;
  for (int v = 2; v < ST->nvars(); v++) {
    MPoly t = mp_var(ST, v);
    MPoly sq = mp_sub(ST, mp_mul(ST, t, t),
                      mp_add(ST, mp_var(ST, 0), mp_parse(ST, "1")));
    MPoly lin = mp_sub(ST, mp_mul(ST, t, mp_var(ST, 0)), mp_var(ST, 1));
    if (T->is_zero_elt(sq) && T->is_zero_elt(lin)) found = true;
  }
  CHECK(found);

  // conductor contains (x, y)
  for (int v = 2; v < ST->nvars(); v++) {
    CHECK(in_subalgebra(T, 2, mp_mul(ST, mp_var(ST, 0), mp_var(ST, v))));
    CHECK(in_subalgebra(T, 2, mp_mul(ST, mp_var(ST, 1), mp_var(ST, v))));
  }
}

static void test_normalize_product() {
  RingPtr S = PolyRing::make(Field::Q(), {"x", "y"});
  QRingPtr A = QuotientRing::make(S, parse_all(S, {"x*y"}));
  NormalizeResult r = normalize(A);
  CHECK(r.components.size() == 2);
  CHECK(r.iterations == 0);
  // the normalization map of a reduced ring is injective
  CHECK(am_is_injective(r.map));
  CHECK(am_is_finite(r.map, nullptr, nullptr));
  CHECK(!am_is_surjective(r.map));
  for (auto& c : r.components) CHECK(c->dim() == 1);
}

static void test_normalize_umbrella() {
  RingPtr S = PolyRing::make(Field::Q(), {"x", "y", "z"});
  QRingPtr A = QuotientRing::make(S, parse_all(S, {"x^2 - y^2*z"}));
  NormalizeResult r = normalize(A);
  CHECK(r.s2_applied);
  CHECK(r.iterations >= 1);
  const QRingPtr& T = r.tilde;
  const RingPtr& ST = T->S;
  bool found = false;
  for (int v = 3; v < ST->nvars(); v++) {
    MPoly t = mp_var(ST, v);
    MPoly sq = mp_sub(ST, mp_mul(ST, t, t), mp_var(ST, 2));
    MPoly lin = mp_sub(ST, mp_mul(ST, t, mp_var(ST, 1)), mp_var(ST, 0));
    if (T->is_zero_elt(sq) && T->is_zero_elt(lin)) found = true;
  }
  CHECK(found);

  NormalizeResult r2 = normalize(T);
  CHECK(r2.iterations == 0);
  CHECK(am_is_surjective(r2.map));
}

static void test_normalize_s2_surface() {
  // k[t^4, t^3 s, t s^3, s^4]: a non-CM toric surface whose S2-closure
  // already fills the single hole t^2 s^2, so the End loop has nothing to do
  RingPtr S = PolyRing::make(Field::Q(), {"a", "b", "c", "d"});
  Ideal I = parse_all(
      S, {"a*d - b*c", "a*c^2 - b^2*d", "b^3 - a^2*c", "c^3 - b*d^2"});
  QRingPtr A = QuotientRing::make(S, I);
  CHECK(A->dim() == 2);
  CHECK(ideal_is_prime(S, A->I));

  NormalizeResult r = normalize(A);
  CHECK(r.s2_applied);
  CHECK(r.iterations == 0);
  CHECK(!am_is_surjective(r.map));

  // tilde/A is exactly one dimension over k
  ModulePresentation pres;
  std::vector<Expo> mons;
  CHECK(am_is_finite(r.map, &pres, &mons));
  int u0 = -1;
  for (size_t u = 0; u < mons.size(); u++)
    if (mono_deg(mons[u]) == 0) u0 = (int)u;
  CHECK(u0 >= 0);
  std::vector<MVec> rels = pres.rels;
  MVec unit = mv_zero(pres.rank);
  unit[u0] = mp_parse(S, "1");
  rels.push_back(unit);
  ModulePresentation coker = mod_make(A, pres.rank, rels);
  CHECK(mod_finite_dim(coker));
  CHECK(mod_vdim(coker) == 1);
}

static void test_normalize_guards() {
  RingPtr S = PolyRing::make(Field::Q(), {"x"});
  CHECK_CODE(normalize(QuotientRing::make(S, parse_all(S, {"x^2"}))),
             "NotReduced");
  CHECK_CODE(normalize(QuotientRing::make(S, parse_all(S, {"1"}))), "ZeroRing");

  FieldPtr Ku = Field::trans(Field::Fp(3), "u");
  RingPtr Su = PolyRing::make(Ku, {"x"});
  CHECK_CODE(normalize(QuotientRing::make(Su, {})), "UsageError");

  // already normal inputs come straight back
  RingPtr S2 = PolyRing::make(Field::Q(), {"x", "y"});
  NormalizeResult rp = normalize(QuotientRing::make(S2, {}));
  CHECK(rp.iterations == 0);
  CHECK(rp.s2_applied);
  CHECK(am_is_surjective(rp.map) && am_is_injective(rp.map));

  NormalizeResult rc =
      normalize(QuotientRing::make(S2, parse_all(S2, {"y - x^2"})));
  CHECK(rc.iterations == 0);
  CHECK(!rc.s2_applied);
  CHECK(am_is_surjective(rc.map));
}

int main() {
  test_alg_morphism();
  test_noether();
  test_pinch();
  test_smooth_locus();
  test_normalize_cusp();
  test_normalize_node_f5();
  test_normalize_product();
  test_normalize_umbrella();
  test_normalize_s2_surface();
  test_normalize_guards();
  if (failures) {
    std::printf("test_normalize: %d failure(s)\n", failures);
    return 1;
  }
  std::printf("test_normalize: all checks passed\n");
  return 0;
}
