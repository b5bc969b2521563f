#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "effalg/field.hpp"
#include "effalg/groebner.hpp"
#include "effalg/mpoly.hpp"

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

/* ============== test-side helpers, built on mpoly primitives ============== */

// Long division against a list, straight from the definition.  Used to verify
// the Gröbner property (every S-vector reduces to zero) without trusting the
// library's reducer bookkeeping.
static MVec t_nf(const RingPtr& R, const std::vector<MVec>& B, MVec v) {
  MVec r = mv_zero((int)v.size());
  while (!mv_is_zero(v)) {
    MvLead l = mv_lead(R, v);
    bool hit = false;
    for (auto& b : B) {
      MvLead lb = mv_lead(R, b);
      if (lb.comp == l.comp && mono_divides(lb.e, l.e)) {
        v = mv_sub(R, v,
                   mv_mul_term(R, R->K->div(l.c, lb.c), mono_div(l.e, lb.e), b));
        hit = true;
        break;
      }
    }
    if (!hit) {
      r[l.comp] = mp_add(R, r[l.comp], MPoly{MTerm{l.e, l.c}});
      v[l.comp].erase(v[l.comp].begin());
    }
  }
  return r;
}

// Every S-vector of same-component basis pairs reduces to zero, and every
// generator does too.
static bool is_groebner_basis(const RingPtr& R, const std::vector<MVec>& basis,
                              const std::vector<MVec>& gens) {
  for (size_t i = 0; i < basis.size(); i++)
    for (size_t j = i + 1; j < basis.size(); j++) {
      MvLead a = mv_lead(R, basis[i]);
      MvLead b = mv_lead(R, basis[j]);
      if (a.comp != b.comp) continue;
      Expo L = mono_lcm(a.e, b.e);
      MVec sp = mv_sub(
          R, mv_mul_term(R, R->K->inv(a.c), mono_div(L, a.e), basis[i]),
          mv_mul_term(R, R->K->inv(b.c), mono_div(L, b.e), basis[j]));
      if (!mv_is_zero(t_nf(R, basis, sp))) return false;
    }
  for (auto& g : gens)
    if (!mv_is_zero(t_nf(R, basis, g))) return false;
  return true;
}

// basis[i] == Σ_j transform[i][j]·gens[j], expanded with plain arithmetic
static bool transform_expands(const RingPtr& R, const GB& gb,
                              const std::vector<MVec>& gens) {
  for (size_t i = 0; i < gb.basis.size(); i++) {
    MVec acc = mv_zero(gb.rank);
    for (size_t j = 0; j < gens.size(); j++)
      acc = mv_add(R, acc, mv_scale(R, gb.transform[i][j], gens[j]));
    if (!mv_eq(R, acc, gb.basis[i])) return false;
  }
  return true;
}

static bool row_kills_gens(const RingPtr& R, const MVec& row,
                           const std::vector<MVec>& gens) {
  MVec acc = mv_zero((int)gens[0].size());
  for (size_t j = 0; j < gens.size(); j++)
    acc = mv_add(R, acc, mv_scale(R, row[j], gens[j]));
  return mv_is_zero(acc);
}

static void enum_mons(int nv, int pos, int rem, Expo& cur,
                      std::vector<Expo>& out) {
  if (pos == nv) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= rem; e++) {
    cur[pos] = e;
    enum_mons(nv, pos + 1, rem - e, cur, out);
  }
  cur[pos] = 0;
}

// All syzygies with coefficients of degree <= D, found by linear algebra over
// the coefficient field.  Completeness oracle for syzygies().
static std::vector<MVec> brute_syz(const RingPtr& R,
                                   const std::vector<MVec>& gens, int D) {
  const FieldPtr& K = R->K;
  int m = (int)gens.size();
  std::vector<Expo> mons;
  Expo cur(R->nvars(), 0);
  enum_mons(R->nvars(), 0, D, cur, mons);
  int nm = (int)mons.size();

  std::vector<std::vector<MVec>> prod(m);
  std::map<std::pair<int, Expo>, int> rowid;
  for (int j = 0; j < m; j++)
    for (int t = 0; t < nm; t++) {
      MVec p = mv_mul_term(R, K->one(), mons[t], gens[j]);
      for (size_t c = 0; c < p.size(); c++)
        for (auto& tm : p[c])
          rowid.emplace(std::make_pair((int)c, tm.e), (int)rowid.size());
      prod[j].push_back(std::move(p));
    }
  std::vector<std::vector<FElem>> M(rowid.size(),
                                    std::vector<FElem>(m * nm, K->zero()));
  for (int j = 0; j < m; j++)
    for (int t = 0; t < nm; t++)
      for (size_t c = 0; c < prod[j][t].size(); c++)
        for (auto& tm : prod[j][t][c]) {
          int r = rowid[{(int)c, tm.e}];
          M[r][j * nm + t] = K->add(M[r][j * nm + t], tm.c);
        }
  std::vector<MVec> out;
  for (auto& x : linnull(K, M)) {
    MVec row(m);
    for (int j = 0; j < m; j++) {
      MPoly s;
      for (int t = 0; t < nm; t++)
        if (!K->is_zero(x[j * nm + t])) s.push_back({mons[t], x[j * nm + t]});
      mp_norm(R, s);
      row[j] = s;
    }
    out.push_back(std::move(row));
  }
  return out;
}

static std::string gb_strings(const RingPtr& R, const GB& gb) {
  std::string s;
  for (auto& v : gb.basis) s += mv_to_string(R, v) + ";";
  return s;
}

/* ============================== tests ============================== */

static void test_orders() {
  auto K = Field::Q();
  auto gl = PolyRing::make(K, {"x", "y", "z"});
  auto lx = PolyRing::make(K, {"x", "y", "z"}, MOrder{OrdKind::Lex, 0});
  auto bl = PolyRing::make(K, {"x", "y", "z"}, MOrder{OrdKind::Block, 1});

  // grevlex: degree first, then smaller exponent in the last differing spot wins
  CHECK(mono_cmp(gl, {2, 0, 0}, {1, 1, 0}) > 0);   // x^2 > xy
  CHECK(mono_cmp(gl, {1, 1, 0}, {0, 2, 0}) > 0);   // xy > y^2
  CHECK(mono_cmp(gl, {1, 0, 1}, {0, 2, 0}) < 0);   // xz < y^2
  CHECK(mono_cmp(gl, {0, 3, 0}, {1, 0, 1}) > 0);   // y^3 > xz (degree)
  CHECK(mono_cmp(gl, {1, 1, 1}, {1, 1, 1}) == 0);

  // lex: leftmost exponent decides
  CHECK(mono_cmp(lx, {1, 0, 0}, {0, 9, 9}) > 0);
  CHECK(mono_cmp(lx, {1, 2, 0}, {1, 1, 9}) > 0);

  // block: anything containing x beats anything without it
  CHECK(mono_cmp(bl, {1, 0, 0}, {0, 9, 9}) > 0);
  CHECK(mono_cmp(bl, {2, 1, 0}, {1, 9, 9}) > 0);
  CHECK(mono_cmp(bl, {0, 0, 2}, {0, 1, 0}) > 0);  // ties fall back to grevlex
}

static void test_mp_arith() {
  auto K = Field::Q();
  auto R = PolyRing::make(K, {"x", "y"});
  MPoly x = mp_var(R, 0), y = mp_var(R, 1);

  // (x+y)^2 = x^2 + 2xy + y^2
  MPoly s = mp_add(R, x, y);
  MPoly lhs = mp_mul(R, s, s);
  MPoly rhs = mp_add(R, mp_add(R, mp_mul(R, x, x),
                               mp_scale(R, K->from_int(2), mp_mul(R, x, y))),
                     mp_mul(R, y, y));
  CHECK(mp_eq(R, lhs, rhs));
  CHECK(mp_to_string(R, lhs) == "x^2 + 2*x*y + y^2");

  // parse / print fixpoints
  for (const char* t : {"x^2 + 2*x*y + y^2", "-x + 1", "1/2*x - 3/4",
                        "x^3*y - x*y^3", "0", "7"}) {
    MPoly f = mp_parse(R, t);
    CHECK(mp_to_string(R, f) == t);
    CHECK(mp_eq(R, mp_parse(R, mp_to_string(R, f)), f));
  }
  CHECK(mp_eq(R, mp_parse(R, "(x+y)*(x-y)"), mp_parse(R, "x^2 - y^2")));
  CHECK(mp_eq(R, mp_parse(R, "x/2"), mp_scale(R, K->parse_element("1/2"), x)));
  CHECK(mp_eq(R, mp_parse(R, "2^-2"), mp_const(R, K->parse_element("1/4"))));
  CHECK_CODE(mp_parse(R, "x/y"), "SchemaError");
  CHECK_CODE(mp_parse(R, "x +"), "SchemaError");
  CHECK_CODE(mp_parse(R, "w + 1"), "SchemaError");

  // coefficients from the tower
  auto F2T = Field::trans(Field::Fp(2), "T");
  auto RT = PolyRing::make(F2T, {"x", "y", "z"});
  const char* t = "x^2*y + (T + 1)*z + T";
  CHECK(mp_to_string(RT, mp_parse(RT, t)) == t);
  MPoly g = mp_parse(RT, "(T+1)*x + T*y");
  CHECK(mp_eq(RT, mp_add(RT, g, g), MPoly{}));  // char 2

  // substitution and derivative
  MPoly f = mp_parse(R, "x^2*y + y^2");
  CHECK(mp_eq(R, mp_subst(R, f, 0, y), mp_parse(R, "y^3 + y^2")));
  CHECK(mp_eq(R, mp_deriv(R, f, 0), mp_parse(R, "2*x*y")));
  CHECK(mp_eq(R, mp_deriv(R, f, 1), mp_parse(R, "x^2 + 2*y")));

  // exact division round trip
  MPoly a = mp_parse(R, "x^2 - y^2"), b = mp_parse(R, "x + y");
  CHECK(mp_eq(R, mp_divide_exact(R, a, b), mp_parse(R, "x - y")));
  CHECK(mp_eq(R, mp_divide_exact(R, mp_mul(R, f, b), b), f));
  CHECK_CODE(mp_divide_exact(R, mp_parse(R, "x^2 + 1"), b), "Internal");

  // univariate bridge
  MPoly u = mp_parse(R, "x^3 - 2*x + 1");
  CHECK(mp_is_univariate(u, 0) && !mp_is_univariate(f, 0));
  CHECK(mp_eq(R, mp_from_upoly(R, mp_to_upoly(R, u, 0), 0), u));
}

static void test_gb_examples() {
  auto K = Field::Q();
  auto R = PolyRing::make(K, {"x", "y"});

  // (x+y, x-y) has reduced basis {x, y}
  std::vector<MVec> gens = {{mp_parse(R, "x+y")}, {mp_parse(R, "x-y")}};
  GB gb = groebner(R, 1, gens);
  CHECK(gb.basis.size() == 2);
  CHECK(mp_to_string(R, gb.basis[0][0]) == "y");
  CHECK(mp_to_string(R, gb.basis[1][0]) == "x");
  CHECK(transform_expands(R, gb, gens));
  CHECK(is_groebner_basis(R, gb.basis, gens));

  // membership certificate over the original generators
  std::vector<MVec> gi = {{mp_parse(R, "x^2 + y^2")}, {mp_parse(R, "x*y")}};
  GB g2 = groebner(R, 1, gi);
  std::vector<MPoly> cert;
  CHECK(membership(R, g2, {mp_parse(R, "x^3")}, &cert));
  CHECK(cert.size() == 2);
  CHECK(mp_to_string(R, cert[0]) == "x");
  CHECK(mp_to_string(R, cert[1]) == "-y");
  MPoly recon = mp_add(R, mp_mul(R, cert[0], gi[0][0]), mp_mul(R, cert[1], gi[1][0]));
  CHECK(mp_eq(R, recon, mp_parse(R, "x^3")));
  CHECK(!membership(R, g2, {mp_parse(R, "x")}, nullptr));
  CHECK(!membership(R, g2, {mp_parse(R, "x^2")}, nullptr));

  // lex basis of the twisted cubic contains y^3 - z^2
  auto RL = PolyRing::make(K, {"x", "y", "z"}, MOrder{OrdKind::Lex, 0});
  GB g3 = groebner_ideal(RL, {mp_parse(RL, "y - x^2"), mp_parse(RL, "z - x^3")});
  bool found = false;
  for (auto& v : g3.basis)
    if (mp_eq(RL, v[0], mp_parse(RL, "y^3 - z^2"))) found = true;
  CHECK(found);

  // corner cases
  GB z0 = groebner_ideal(R, {});
  CHECK(z0.basis.empty());
  GB z1 = groebner_ideal(R, {MPoly{}});
  CHECK(z1.basis.empty());
  CHECK(membership(R, z1, {MPoly{}}, &cert) && cert.size() == 1);
  CHECK(ideal_contains_one(R, {mp_parse(R, "x"), mp_parse(R, "x+1")}));
  CHECK(!ideal_contains_one(R, {mp_parse(R, "x"), mp_parse(R, "y")}));
  CHECK(ideal_eq(R, {mp_parse(R, "x+y"), mp_parse(R, "x-y")},
                 {mp_parse(R, "y"), mp_parse(R, "x")}));
  CHECK(!ideal_eq(R, {mp_parse(R, "x")}, {mp_parse(R, "x^2")}));
}

static void test_normal_form_props() {
  auto K = Field::Q();
  auto R = PolyRing::make(K, {"x", "y"});
  Ideal I = {mp_parse(R, "x^2 + y^2"), mp_parse(R, "x*y")};
  GB gb = groebner_ideal(R, I);

  MPoly v = mp_parse(R, "x^4 + x*y^3 - 7");
  MPoly n1 = nf_ideal(R, gb, v);
  // invariance under adding ideal elements
  MPoly v2 = mp_add(R, v, mp_add(R, mp_mul(R, mp_parse(R, "x - 3*y^2"), I[0]),
                                 mp_mul(R, mp_parse(R, "y^5 + 1"), I[1])));
  CHECK(mp_eq(R, nf_ideal(R, gb, v2), n1));
  // idempotence and linearity
  CHECK(mp_eq(R, nf_ideal(R, gb, n1), n1));
  MPoly w = mp_parse(R, "x^3 - y");
  CHECK(mp_eq(R, nf_ideal(R, gb, mp_add(R, v, w)),
              mp_add(R, n1, nf_ideal(R, gb, w))));
  for (auto& b : gb.basis) CHECK(mp_is_zero(nf_ideal(R, gb, b[0])));
  // remainder terms are irreducible against the leading terms
  for (auto& tm : n1)
    for (auto& b : gb.basis) CHECK(!mono_divides(b[0][0].e, tm.e));
}

static void test_gb_random_props() {
  struct Cfg {
    FieldPtr K;
    const char* label;
  };
  std::vector<Cfg> cfgs = {
      {Field::Q(), "q"},
      {Field::Fp(5), "f5"},
      {Field::trans(Field::Fp(2), "T"), "f2t"},
      {Field::algext(Field::Q(), "r", {Field::Q()->from_int(-2), Field::Q()->zero(),
                                       Field::Q()->one()}),
       "qr"},
  };
  for (auto& cfg : cfgs) {
    auto R = PolyRing::make(cfg.K, {"x", "y", "z"});
    std::mt19937_64 rng(11);
    for (int inst = 0; inst < 4; inst++) {
      std::vector<MVec> gens;
      for (int j = 0; j < 3; j++) {
        MPoly f;
        for (int t = 0; t < 3; t++) {
          Expo e(3, 0);
          e[rng() % 3] = (int)(rng() % 3);
          e[rng() % 3] += (int)(rng() % 2);
          f.push_back({e, cfg.K->nth_element(rng() % 16)});
        }
        mp_norm(R, f);
        gens.push_back({f});
      }
      GB gb = groebner(R, 1, gens);
      CHECK(is_groebner_basis(R, gb.basis, gens));
      CHECK(transform_expands(R, gb, gens));
      for (size_t i = 0; i < gb.basis.size(); i++) {
        CHECK(cfg.K->is_one(gb.basis[i][0][0].c));
        for (size_t j = 0; j < gb.basis.size(); j++) {
          if (i == j) continue;
          // minimal and tail-reduced
          for (auto& tm : gb.basis[i][0])
            CHECK(!mono_divides(gb.basis[j][0][0].e, tm.e));
        }
      }
    }
  }
}

static void test_modules_pot() {
  auto K = Field::Fp(5);
  auto R = PolyRing::make(K, {"x", "y"});
  std::vector<MVec> gens = {{mp_parse(R, "x"), mp_parse(R, "y")},
                            {mp_parse(R, "y"), mp_parse(R, "x")}};
  GB gb = groebner(R, 2, gens);
  CHECK(gb.basis.size() == 3);
  CHECK(is_groebner_basis(R, gb.basis, gens));
  CHECK(transform_expands(R, gb, gens));
  CHECK(membership(R, gb, {mp_parse(R, "x+y"), mp_parse(R, "x+y")}, nullptr));
  CHECK(membership(R, gb, {MPoly{}, mp_parse(R, "x^2 - y^2")}, nullptr));
  CHECK(!membership(R, gb, {mp_parse(R, "1"), MPoly{}}, nullptr));
  CHECK(!membership(R, gb, {MPoly{}, mp_parse(R, "y^2")}, nullptr));

  // the two generators are independent: no syzygies at all
  CHECK(syzygies(R, 2, gens).empty());
  CHECK(brute_syz(R, gens, 6).empty());
}

static void test_syzygies() {
  auto K = Field::Q();
  auto R = PolyRing::make(K, {"x", "y"});

  // Koszul relation for (x, y)
  std::vector<MVec> xy = {{mp_parse(R, "x")}, {mp_parse(R, "y")}};
  auto s1 = syzygies(R, 1, xy);
  CHECK(s1.size() == 1);
  CHECK(mv_to_string(R, s1[0]) == "[y, -x]");
  CHECK(row_kills_gens(R, s1[0], xy));

  // duplicate generators
  std::vector<MVec> dup = {{mp_parse(R, "x")}, {mp_parse(R, "x")}};
  auto s2 = syzygies(R, 1, dup);
  CHECK(s2.size() == 1);
  CHECK(mv_to_string(R, s2[0]) == "[1, -1]");

  // a zero generator yields its unit row
  std::vector<MVec> withzero = {{MPoly{}}, {mp_parse(R, "x")}};
  auto s3 = syzygies(R, 1, withzero);
  CHECK(s3.size() == 1);
  CHECK(mv_to_string(R, s3[0]) == "[1, 0]");

  // completeness against linear algebra, degree <= 6
  auto R3 = PolyRing::make(K, {"x", "y", "z"});
  std::vector<std::vector<MVec>> cases = {
      {{mp_parse(R3, "x")}, {mp_parse(R3, "y")}, {mp_parse(R3, "z")}},
      {{mp_parse(R3, "x*y - z^2")}, {mp_parse(R3, "x^2 + y*z")}, {mp_parse(R3, "y^2 - x*z")}},
  };
  for (auto& gens : cases) {
    auto syz = syzygies(R3, 1, gens);
    for (auto& row : syz) CHECK(row_kills_gens(R3, row, gens));
    GB sgb = groebner(R3, (int)gens.size(), syz);
    for (auto& row : brute_syz(R3, gens, 6))
      CHECK(mv_is_zero(normal_form(R3, sgb, row)));
  }
  // same over a small field and with a generating set that is not minimal
  auto K5 = Field::Fp(5);
  auto R5 = PolyRing::make(K5, {"x", "y"});
  std::vector<MVec> g5 = {{mp_parse(R5, "x^2 + y^2")},
                          {mp_parse(R5, "x*y")},
                          {mp_parse(R5, "x^3 + x*y^2")}};
  auto syz5 = syzygies(R5, 1, g5);
  for (auto& row : syz5) CHECK(row_kills_gens(R5, row, g5));
  GB sgb5 = groebner(R5, 3, syz5);
  for (auto& row : brute_syz(R5, g5, 6))
    CHECK(mv_is_zero(normal_form(R5, sgb5, row)));
}

static void test_eliminate() {
  auto K = Field::Q();
  auto R = PolyRing::make(K, {"x", "y", "z"});
  Ideal I = {mp_parse(R, "y - x^2"), mp_parse(R, "z - x^3")};

  RingPtr Rout;
  Ideal E = eliminate(R, I, {1, 2}, &Rout);
  CHECK(Rout->vars == (std::vector<std::string>{"y", "z"}));
  CHECK(E.size() == 1);
  CHECK(mp_to_string(Rout, E[0]) == "y^3 - z^2");

  // forward containment: the eliminated generators lie in I
  GB gbI = groebner_ideal(R, I);
  Ideal Er = eliminate_in_ring(R, I, {1, 2});
  CHECK(Er.size() == 1);
  for (auto& f : Er) CHECK(ideal_member(R, gbI, f, nullptr));
  // reverse: known members of the elimination ideal reduce to zero
  GB gbE = groebner_ideal(Rout, E);
  CHECK(mp_is_zero(nf_ideal(Rout, gbE, mp_parse(Rout, "(y^3 - z^2)*(y + 7)"))));
  CHECK(!mp_is_zero(nf_ideal(Rout, gbE, mp_parse(Rout, "y^2 - z"))));

  // keeping everything is just the reduced basis; keeping nothing of a
  // proper ideal leaves nothing
  RingPtr Rall;
  Ideal all = eliminate(R, I, {0, 1, 2}, &Rall);
  GB red = groebner_ideal(R, I);
  CHECK(all.size() == red.basis.size());
  for (size_t i = 0; i < all.size(); i++) {
    CHECK(mp_eq(R, mp_parse(R, mp_to_string(Rall, all[i])), red.basis[i][0]));
  }
  RingPtr Rnone;
  CHECK(eliminate(R, I, {}, &Rnone).empty());
}

static void test_ideal_arith() {
  auto K = Field::Q();
  auto R = PolyRing::make(K, {"x", "y"});

  // (x) ∩ (y) = (xy)
  Ideal capxy = ideal_intersect(R, {mp_parse(R, "x")}, {mp_parse(R, "y")});
  CHECK(capxy.size() == 1);
  CHECK(mp_to_string(R, capxy[0]) == "x*y");

  // intersection invariants on a thicker example
  Ideal A = {mp_parse(R, "x^2"), mp_parse(R, "x*y")};
  Ideal B = {mp_parse(R, "y^2"), mp_parse(R, "x - y")};
  Ideal cap = ideal_intersect(R, A, B);
  GB ga = groebner_ideal(R, A), gbB = groebner_ideal(R, B);
  for (auto& f : cap) {
    CHECK(ideal_member(R, ga, f, nullptr));
    CHECK(ideal_member(R, gbB, f, nullptr));
  }
  GB gcap = groebner_ideal(R, cap);
  for (auto& f : A)
    for (auto& g : B) CHECK(ideal_member(R, gcap, mp_mul(R, f, g), nullptr));

  // ((x^2, xy) : (x)) = (x, y)
  Ideal col = ideal_colon(R, {mp_parse(R, "x^2"), mp_parse(R, "x*y")},
                          {mp_parse(R, "x")});
  CHECK(ideal_eq(R, col, {mp_parse(R, "x"), mp_parse(R, "y")}));
  for (auto& h : col)
    CHECK(ideal_member(R, ga, mp_mul(R, h, mp_parse(R, "x")), nullptr));

  // ((x^2 y, x y^2) : x^∞) = (y)
  Ideal sat = ideal_saturate(R, {mp_parse(R, "x^2*y"), mp_parse(R, "x*y^2")},
                             {mp_parse(R, "x")});
  CHECK(sat.size() == 1);
  CHECK(mp_to_string(R, sat[0]) == "y");

  // saturation is the stable iterated colon
  Ideal I0 = {mp_parse(R, "x^2*y"), mp_parse(R, "x*y^2")};
  Ideal it = I0;
  for (int k = 0; k < 4; k++) it = ideal_colon(R, it, {mp_parse(R, "x")});
  CHECK(ideal_eq(R, it, sat));

  // radical membership
  CHECK(radical_member(R, mp_parse(R, "x"), {mp_parse(R, "x^2")}));
  CHECK(!radical_member(R, mp_parse(R, "y"), {mp_parse(R, "x^2")}));
  CHECK(radical_member(R, mp_parse(R, "x + y"),
                       {mp_parse(R, "x^2"), mp_parse(R, "y^2")}));
  CHECK(radical_member(R, mp_parse(R, "x"), {mp_parse(R, "1")}));
  CHECK(radical_member(R, MPoly{}, {mp_parse(R, "x^2")}));

  auto K5 = Field::Fp(5);
  auto R5 = PolyRing::make(K5, {"x", "y"});
  CHECK(radical_member(R5, mp_parse(R5, "x + y"),
                       {mp_parse(R5, "x^2"), mp_parse(R5, "y^2")}));
  CHECK(!radical_member(R5, mp_parse(R5, "x + 1"),
                        {mp_parse(R5, "x^2"), mp_parse(R5, "y^2")}));
}

static void test_determinism() {
  // two independently built towers and rings must print identical results
  std::string out[2];
  for (int round = 0; round < 2; round++) {
    auto K = Field::trans(Field::Fp(3), "T");
    auto R = PolyRing::make(K, {"x", "y", "z"});
    std::mt19937_64 rng(4242);
    std::vector<MVec> gens;
    for (int j = 0; j < 3; j++) {
      MPoly f;
      for (int t = 0; t < 4; t++) {
        Expo e(3, 0);
        e[rng() % 3] = (int)(rng() % 3);
        f.push_back({e, K->nth_element(rng() % 32)});
      }
      mp_norm(R, f);
      gens.push_back({f});
    }
    GB gb = groebner(R, 1, gens);
    out[round] = gb_strings(R, gb);
    for (auto& row : syzygies(R, 1, gens)) out[round] += mv_to_string(R, row) + "|";
  }
  CHECK(!out[0].empty());
  CHECK(out[0] == out[1]);
}

static void test_extend_field() {
  // F_3[Z1,Z2]/(Z1^2+1, Z2-Z1) = F_9
  auto F3 = Field::Fp(3);
  auto R = PolyRing::make(F3, {"Z1", "Z2"});
  Ideal m = {mp_parse(R, "Z1^2 + 1"), mp_parse(R, "Z2 - Z1")};
  std::vector<FElem> im;
  FieldPtr F = extend_field_maximal(R, m, &im);
  CHECK(F->is_finite());
  CHECK(F->size() == Int(9));
  CHECK(im.size() == 2);
  CHECK(felem_cmp(im[0], im[1]) == 0);
  {
    auto RF = PolyRing::make(F, R->vars);
    for (const char* s : {"Z1^2 + 1", "Z2 - Z1"}) {
      MPoly g = mp_parse(RF, s);
      g = mp_subst(RF, g, 0, mp_const(RF, im[0]));
      g = mp_subst(RF, g, 1, mp_const(RF, im[1]));
      CHECK(mp_is_zero(g));
    }
  }

  // Q[Z1,Z2]/(Z1^2-2, Z2^2-Z1): degree four, two genuine steps
  auto Q = Field::Q();
  auto RQ = PolyRing::make(Q, {"Z1", "Z2"});
  Ideal mq = {mp_parse(RQ, "Z1^2 - 2"), mp_parse(RQ, "Z2^2 - Z1")};
  std::vector<FElem> imq;
  FieldPtr FQ = extend_field_maximal(RQ, mq, &imq);
  auto gens = tower_generators(FQ);
  CHECK(gens.size() == 2);
  CHECK(FQ->ext_degree() == 2 && gens[0].second->ext_degree() == 2);
  CHECK(felem_cmp(FQ->mul(imq[1], imq[1]), imq[0]) == 0);
  CHECK(felem_cmp(FQ->mul(imq[0], imq[0]), FQ->from_int(2)) == 0);

  // only degree-one steps: no extension at all
  auto R1 = PolyRing::make(Q, {"Z1"});
  std::vector<FElem> im1;
  CHECK(extend_field_maximal(R1, {mp_parse(R1, "Z1 - 3")}, &im1) == Q);
  CHECK(felem_cmp(im1[0], Q->from_int(3)) == 0);

  // failures: reducible eliminant, non-maximal input
  CHECK_CODE(extend_field_maximal(R1, {mp_parse(R1, "Z1^2 - 1")}, nullptr),
             "ReduciblePolynomial");
  CHECK_CODE(extend_field_maximal(RQ, {mp_parse(RQ, "Z1*Z2")}, nullptr),
             "UsageError");
  CHECK_CODE(extend_field_maximal(R1, {mp_parse(R1, "1")}, nullptr), "UsageError");
}

int main() {
  test_orders();
  test_mp_arith();
  test_gb_examples();
  test_normal_form_props();
  test_gb_random_props();
  test_modules_pot();
  test_syzygies();
  test_eliminate();
  test_ideal_arith();
  test_determinism();
  test_extend_field();
  if (failures) {
    std::printf("test_groebner: %d failure(s)\n", failures);
    return 1;
  }
  std::printf("test_groebner: all checks passed\n");
  return 0;
}
