#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "effalg/factor.hpp"
#include "effalg/field.hpp"
#include "effalg/upoly.hpp"

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

/* ================= oracles (independent of the library) ================= */

// Roots of x^2+1 over F_5 by exhaustive search.
static std::vector<long> oracle_roots_x2p1_mod5() {
  std::vector<long> r;
  for (long x = 0; x < 5; x++)
    if ((x * x + 1) % 5 == 0) r.push_back(x);
  return r;
}

// Multiply polynomials over F_2 represented as bit vectors.
static std::vector<int> f2mul(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); i++)
    for (size_t j = 0; j < b.size(); j++) r[i + j] ^= a[i] & b[j];
  while (!r.empty() && !r.back()) r.pop_back();
  return r;
}

// Integer polynomial product for the x^4+4 split.
static std::vector<long> zmul_small(const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); i++)
    for (size_t j = 0; j < b.size(); j++) r[i + j] += a[i] * b[j];
  return r;
}

/* ================= helpers ================= */

static UPoly up(const FieldPtr& K, const std::vector<std::string>& coeffs) {
  UPoly f;
  for (auto& s : coeffs) f.push_back(K->parse_element(s));
  upnorm(K, f);
  return f;
}

static UPoly upl(const FieldPtr& K, const std::vector<long>& coeffs) {
  UPoly f;
  for (long c : coeffs) f.push_back(K->from_int(c));
  upnorm(K, f);
  return f;
}

static UPoly refold(const FieldPtr& K, const UFactor& u) {
  UPoly r = upconst(K, u.unit);
  for (auto& [g, m] : u.factors)
    for (int i = 0; i < m; i++) r = upmul(K, r, g);
  return r;
}

static bool factors_equal(const FieldPtr& K, const UFactor& u,
                          const std::vector<std::pair<UPoly, int>>& expect) {
  if (u.factors.size() != expect.size()) return false;
  for (auto& [g, m] : expect) {
    bool hit = false;
    for (auto& [h, m2] : u.factors)
      if (m2 == m && upeq(K, g, h)) hit = true;
    if (!hit) return false;
  }
  return true;
}

/* ================= tests ================= */

static void test_arith_trivial() {
  FieldPtr F5 = Field::Fp(5);
  CHECK(F5->eq(F5->inv(F5->from_int(2)), F5->from_int(3)));
  CHECK_CODE(F5->inv(F5->zero()), "DivisionByZero");

  FieldPtr Q = Field::Q();
  FElem a = Q->add(Q->parse_element("1/2"), Q->parse_element("1/3"));
  CHECK(Q->eq(a, Q->parse_element("5/6")));
  CHECK(Q->eq(Q->frob_inv(a), a));  // identity in characteristic 0
}

static void test_factor_f5() {
  std::vector<long> roots = oracle_roots_x2p1_mod5();
  CHECK(roots.size() == 2);
  FieldPtr F5 = Field::Fp(5);
  UFactor u = factor_upoly(F5, upl(F5, {1, 0, 1}));
  std::vector<std::pair<UPoly, int>> expect;
  for (long r : roots) expect.push_back({upl(F5, {-r, 1}), 1});
  CHECK(factors_equal(F5, u, expect));
  CHECK(upeq(F5, refold(F5, u), upl(F5, {1, 0, 1})));
}

static void test_factor_f2_irreducible() {
  FieldPtr F2 = Field::Fp(2);
  UPoly f = upl(F2, {1, 1, 1});
  UFactor u = factor_upoly(F2, f);
  CHECK(u.factors.size() == 1 && u.factors[0].second == 1);
  CHECK(upeq(F2, u.factors[0].first, f));
  CHECK(is_irreducible(F2, f));
}

static void test_factor_q() {
  FieldPtr Q = Field::Q();
  {
    UFactor u = factor_upoly(Q, upl(Q, {-1, 0, 1}));
    CHECK(factors_equal(Q, u, {{upl(Q, {-1, 1}), 1}, {upl(Q, {1, 1}), 1}}));
  }
  {
    // oracle: (x^2-2x+2)(x^2+2x+2) = x^4+4
    std::vector<long> prod = zmul_small({2, -2, 1}, {2, 2, 1});
    CHECK((prod == std::vector<long>{4, 0, 0, 0, 1}));
    UFactor u = factor_upoly(Q, upl(Q, {4, 0, 0, 0, 1}));
    CHECK(factors_equal(Q, u, {{upl(Q, {2, -2, 1}), 1}, {upl(Q, {2, 2, 1}), 1}}));
  }
  {
    // multiplicities: (x-1)^2 (x+1)^3
    UPoly f = upl(Q, {1, 1});
    UPoly g = upl(Q, {-1, 1});
    UPoly h = upmul(Q, upmul(Q, g, g), upmul(Q, f, upmul(Q, f, f)));
    UFactor u = factor_upoly(Q, h);
    CHECK(factors_equal(Q, u, {{g, 2}, {f, 3}}));
  }
  {
    // unit tracking: 2x^2 - 2
    UFactor u = factor_upoly(Q, upl(Q, {-2, 0, 2}));
    CHECK(Q->eq(u.unit, Q->from_int(2)));
    CHECK(upeq(Q, refold(Q, u), upl(Q, {-2, 0, 2})));
  }
  {
    // x^6-1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
    UFactor u = factor_upoly(Q, upl(Q, {-1, 0, 0, 0, 0, 0, 1}));
    CHECK(u.factors.size() == 4);
    CHECK(upeq(Q, refold(Q, u), upl(Q, {-1, 0, 0, 0, 0, 0, 1})));
  }
  CHECK_CODE(factor_upoly(Q, UPoly{}), "ZeroPolynomial");
}

static void test_p_basis() {
  FieldPtr F5 = Field::Fp(5);
  CHECK(F5->p_basis().empty());
  CHECK(F5->p_rank() == 0);
  CHECK_CODE(Field::Q()->p_basis(), "CharZero");

  FieldPtr K = Field::trans(Field::Fp(2), "T");
  auto pb = K->p_basis();
  CHECK(pb.size() == 1 && K->p_rank() == 1);
  CHECK(K->eq(pb[0], K->generator()));

  // oracle: (T+1)^2 * T = T^3 + T over F_2
  std::vector<int> prod = f2mul(f2mul({1, 1}, {1, 1}), {0, 1});
  CHECK((prod == std::vector<int>{0, 1, 0, 1}));

  FElem x = K->parse_element("T^3+T");
  auto ex = K->p_expand(x);
  CHECK(ex.size() == 1);
  CHECK(ex[0].first == std::vector<int>{1});
  CHECK(K->eq(ex[0].second, K->parse_element("T+1")));
  CHECK(K->eq(K->p_recombine(ex), x));
}

static void test_extensions() {
  FieldPtr Q = Field::Q();
  FieldPtr K = Field::algsep(Q, "r", upl(Q, {-2, 0, 1}));
  CHECK(K->ext_degree() == 2);
  FElem r = K->generator();
  CHECK(K->eq(K->mul(r, r), K->from_int(2)));
  CHECK_CODE(Field::algsep(Q, "s", upl(Q, {-1, 0, 1})), "ReduciblePolynomial");

  FieldPtr F2T = Field::trans(Field::Fp(2), "T");
  FieldPtr L = Field::alginsep(F2T, "s", F2T->generator());
  auto pb = L->p_basis();
  CHECK(pb.size() == 1);
  CHECK(L->eq(pb[0], L->generator()));
  CHECK(L->eq(L->mul(L->generator(), L->generator()), L->embed(F2T->generator())));
  CHECK_CODE(Field::alginsep(F2T, "s", F2T->parse_element("T^2")), "AlreadyPthPower");
}

static void test_perfect_closure() {
  FieldPtr F2T = Field::trans(Field::Fp(2), "T");
  CHECK_CODE(F2T->frob_inv(F2T->generator()), "FrobInvUnavailable");

  FieldPtr P = Field::perf(F2T);
  CHECK(P->is_perfect());
  FElem t = P->embed(F2T->generator());
  FElem rt = P->frob_inv(t);
  const PerfV& pv = std::get<PerfV>(rt.v);
  CHECK(pv.e == 1);
  CHECK(F2T->eq(pv.a[0], F2T->generator()));
  CHECK(P->eq(P->frob(rt), t));
  CHECK(P->eq(P->mul(rt, rt), t));
}

static void test_expand_roundtrip() {
  std::vector<FieldPtr> towers;
  FieldPtr F2T = Field::trans(Field::Fp(2), "T");
  FieldPtr F3w = Field::trans(Field::Fp(3), "w");
  towers.push_back(F2T);
  towers.push_back(F3w);
  towers.push_back(Field::alginsep(F2T, "s", F2T->generator()));
  towers.push_back(Field::algsep(
      F3w, "a", UPoly{F3w->neg(F3w->generator()), F3w->zero(), F3w->one()}));
  towers.push_back(Field::perf(F2T));
  std::mt19937_64 rng(12345);
  for (auto& K : towers) {
    for (int trial = 0; trial < 12; trial++) {
      FElem x = K->random_element(rng);
      auto ex = K->p_expand(x);
      CHECK(K->eq(K->p_recombine(ex), x));
      for (auto& [idx, w] : ex) CHECK(!K->is_zero(w));
    }
    auto pb = K->p_basis();
    CHECK(K->p_independent(pb));
  }
}

static void test_frobenius_props() {
  std::vector<FieldPtr> perfect = {Field::Fp(7), Field::perf(Field::trans(Field::Fp(2), "T")),
                                   Field::algext(Field::Fp(3), "i", upl(Field::Fp(3), {1, 0, 1}))};
  std::mt19937_64 rng(777);
  for (auto& K : perfect) {
    CHECK(K->is_perfect());
    for (int trial = 0; trial < 8; trial++) {
      FElem x = K->random_element(rng);
      CHECK(K->eq(K->frob_inv(K->frob(x)), x));
      CHECK(K->eq(K->frob(K->frob_inv(x)), x));
    }
  }
}

static void test_eq_congruence() {
  std::vector<FieldPtr> towers = {Field::Q(), Field::Fp(5),
                                  Field::trans(Field::Fp(2), "T"),
                                  Field::algext(Field::Q(), "r", upl(Field::Q(), {-2, 0, 1}))};
  std::mt19937_64 rng(4242);
  for (auto& K : towers) {
    for (int trial = 0; trial < 10; trial++) {
      FElem a = K->random_element(rng), b = K->random_element(rng);
      FElem lhs = K->mul(K->add(a, b), K->add(a, b));
      FElem rhs = K->add(K->add(K->mul(a, a), K->mul(K->from_int(2), K->mul(a, b))),
                         K->mul(b, b));
      CHECK(K->eq(lhs, rhs));
      CHECK(K->to_string(lhs) == K->to_string(rhs));
      CHECK(K->eq(K->sub_(K->add(a, b), b), a));
      if (!K->is_zero(b)) CHECK(K->eq(K->mul(K->div(a, b), b), a));
    }
  }
}

static void test_parse_roundtrip() {
  std::vector<FieldPtr> towers = {
      Field::Q(),
      Field::Fp(5),
      Field::trans(Field::Fp(2), "T"),
      Field::algext(Field::Q(), "r", upl(Field::Q(), {-2, 0, 1})),
      Field::alginsep(Field::trans(Field::Fp(2), "T"), "s",
                      Field::trans(Field::Fp(2), "T")->generator()),
      Field::perf(Field::trans(Field::Fp(3), "u")),
  };
  std::mt19937_64 rng(99);
  for (auto& K : towers) {
    FieldPtr K2 = Field::parse_descriptor(K->descriptor());
    CHECK(K2->descriptor() == K->descriptor());
    for (int trial = 0; trial < 8; trial++) {
      FElem x = K->random_element(rng);
      std::string s = K->to_string(x);
      FElem y = K->parse_element(s);
      CHECK(K->eq(x, y));
      CHECK(K->to_string(y) == s);
    }
  }
}

static void test_pth_roots() {
  FieldPtr K = Field::trans(Field::Fp(2), "T");
  CHECK(!K->is_pth_power(K->generator()));
  CHECK(K->is_pth_power(K->parse_element("T^2")));
  FElem r;
  CHECK(K->pth_root(r, K->parse_element("T^2+1")));
  CHECK(K->eq(r, K->parse_element("T+1")));

  FieldPtr L = Field::alginsep(K, "s", K->generator());
  FElem rt;
  CHECK(L->pth_root(rt, L->embed(K->generator())));
  CHECK(L->eq(rt, L->generator()));

  std::vector<FieldPtr> towers = {K, L, Field::algext(Field::Fp(3), "i", upl(Field::Fp(3), {1, 0, 1})),
                                  Field::perf(K)};
  std::mt19937_64 rng(31337);
  for (auto& T : towers) {
    for (int trial = 0; trial < 8; trial++) {
      FElem x = T->random_element(rng);
      FElem xp = T->frob(x);
      CHECK(T->is_pth_power(xp));
      FElem y;
      CHECK(T->pth_root(y, xp));
      CHECK(T->eq(y, x));
    }
  }
}

static void test_nth_element() {
  FieldPtr F5 = Field::Fp(5);
  std::set<std::string> seen;
  for (int k = 0; k < 5; k++) seen.insert(F5->to_string(F5->nth_element(k)));
  CHECK(seen.size() == 5);
  std::vector<FieldPtr> inf = {Field::Q(), Field::trans(Field::Fp(2), "T")};
  for (auto& K : inf) {
    std::set<std::string> s2;
    for (int k = 0; k < 30; k++) s2.insert(K->to_string(K->nth_element(k)));
    CHECK(s2.size() == 30);
  }
}

static void test_trager() {
  FieldPtr Q = Field::Q();
  FieldPtr K = Field::algext(Q, "r", upl(Q, {-2, 0, 1}));
  {
    UFactor u = factor_upoly(K, up(K, {"-2", "0", "1"}));
    CHECK(factors_equal(K, u, {{up(K, {"-r", "1"}), 1}, {up(K, {"r", "1"}), 1}}));
  }
  {
    UFactor u = factor_upoly(K, up(K, {"-2", "0", "0", "0", "1"}));
    CHECK(factors_equal(K, u, {{up(K, {"-r", "0", "1"}), 1}, {up(K, {"r", "0", "1"}), 1}}));
  }
  {
    FieldPtr L = Field::algext(K, "s", up(K, {"-3", "0", "1"}));
    UFactor u = factor_upoly(L, up(L, {"-6", "0", "1"}));
    CHECK(factors_equal(L, u, {{up(L, {"-r*s", "1"}), 1}, {up(L, {"r*s", "1"}), 1}}));
  }
  {
    // F_4 and F_9: splitting inside finite extensions
    FieldPtr F2 = Field::Fp(2);
    FieldPtr F4 = Field::algext(F2, "w", upl(F2, {1, 1, 1}));
    UFactor u = factor_upoly(F4, upl(F4, {1, 1, 1}));
    CHECK(factors_equal(F4, u, {{up(F4, {"w", "1"}), 1}, {up(F4, {"w+1", "1"}), 1}}));
    FieldPtr F3 = Field::Fp(3);
    FieldPtr F9 = Field::algext(F3, "i", upl(F3, {1, 0, 1}));
    UFactor v = factor_upoly(F9, upl(F9, {1, 0, 1}));
    CHECK(factors_equal(F9, v, {{up(F9, {"i", "1"}), 1}, {up(F9, {"-i", "1"}), 1}}));
  }
}

static void test_function_field_factoring() {
  FieldPtr K = Field::trans(Field::Fp(2), "T");
  {
    UFactor u = factor_upoly(K, up(K, {"T^2", "0", "1"}));  // (x+T)^2
    CHECK(factors_equal(K, u, {{up(K, {"T", "1"}), 2}}));
  }
  CHECK(is_irreducible(K, up(K, {"T", "0", "1"})));
  CHECK(is_irreducible(K, up(K, {"1/T", "0", "1"})));
  {
    UPoly f = upmul(K, up(K, {"T", "1"}), up(K, {"T+1", "1"}));
    UFactor u = factor_upoly(K, f);
    CHECK(factors_equal(K, u, {{up(K, {"T", "1"}), 1}, {up(K, {"T+1", "1"}), 1}}));
  }
  FieldPtr F5u = Field::trans(Field::Fp(5), "u");
  CHECK(is_irreducible(F5u, up(F5u, {"-u", "0", "1"})));
  {
    UPoly f = upmul(F5u, up(F5u, {"-1/u", "1"}), up(F5u, {"-u", "1"}));
    UFactor u = factor_upoly(F5u, f);
    CHECK(factors_equal(F5u, u, {{up(F5u, {"-1/u", "1"}), 1}, {up(F5u, {"-u", "1"}), 1}}));
  }
  {
    UPoly f = upmul(F5u, up(F5u, {"-u", "0", "1"}), up(F5u, {"-u-1", "0", "1"}));
    UFactor u = factor_upoly(F5u, f);
    CHECK(factors_equal(F5u, u,
                        {{up(F5u, {"-u", "0", "1"}), 1}, {up(F5u, {"-u-1", "0", "1"}), 1}}));
  }
}

static void test_inseparable_factoring() {
  FieldPtr K = Field::trans(Field::Fp(2), "T");
  FieldPtr L = Field::alginsep(K, "s", K->generator());
  {
    UFactor u = factor_upoly(L, up(L, {"T", "0", "1"}));  // x^2+T = (x+s)^2
    CHECK(factors_equal(L, u, {{up(L, {"s", "1"}), 2}}));
  }
  {
    UPoly f = upmul(L, up(L, {"s", "1"}), up(L, {"s+1", "1"}));
    UFactor u = factor_upoly(L, f);
    CHECK(factors_equal(L, u, {{up(L, {"s", "1"}), 1}, {up(L, {"s+1", "1"}), 1}}));
  }
  FieldPtr P = Field::perf(K);
  {
    FElem t = P->embed(K->generator());
    FElem rt = P->frob_inv(t);
    UPoly f = {t, P->zero(), P->one()};  // x^2 + T
    UFactor u = factor_upoly(P, f);
    CHECK(factors_equal(P, u, {{UPoly{rt, P->one()}, 2}}));
    UPoly g = upmul(P, UPoly{rt, P->one()}, UPoly{P->add(rt, P->one()), P->one()});
    UFactor v = factor_upoly(P, g);
    CHECK(v.factors.size() == 2);
    CHECK(upeq(P, refold(P, v), g));
  }
}

static void test_factor_random_roundtrip() {
  struct Cfg {
    FieldPtr K;
    int maxdeg;
    int trials;
  };
  FieldPtr Q = Field::Q();
  FieldPtr F2 = Field::Fp(2);
  FieldPtr F5 = Field::Fp(5);
  FieldPtr QR = Field::algext(Q, "r", upl(Q, {-2, 0, 1}));
  FieldPtr F2T = Field::trans(F2, "T");
  FieldPtr F3w = Field::trans(Field::Fp(3), "w");
  FieldPtr L = Field::alginsep(F2T, "s", F2T->generator());
  FieldPtr M = Field::algsep(
      F3w, "a", UPoly{F3w->neg(F3w->generator()), F3w->zero(), F3w->one()});
  FieldPtr P = Field::perf(F2T);
  std::vector<Cfg> cfgs = {{Q, 8, 6},  {F2, 8, 8}, {F5, 8, 8}, {QR, 5, 4},
                           {F2T, 6, 5}, {L, 4, 4},  {M, 4, 4},  {P, 4, 4}};
  std::mt19937_64 rng(20240817);
  for (auto& cfg : cfgs) {
    for (int trial = 0; trial < cfg.trials; trial++) {
      int d = 1 + (int)(rng() % cfg.maxdeg);
      UPoly f;
      for (int i = 0; i < d; i++) f.push_back(cfg.K->nth_element(rng() % 24));
      f.push_back(cfg.K->one());
      UFactor u = factor_upoly(cfg.K, f, 7);
      CHECK(upeq(cfg.K, refold(cfg.K, u), f));
      for (auto& [g, m] : u.factors) CHECK(m >= 1 && updeg(g) >= 1);
      // determinism across seeds
      UFactor v = factor_upoly(cfg.K, f, 99);
      CHECK(u.factors.size() == v.factors.size());
      for (size_t i = 0; i < u.factors.size(); i++) {
        CHECK(upeq(cfg.K, u.factors[i].first, v.factors[i].first));
        CHECK(u.factors[i].second == v.factors[i].second);
      }
    }
  }
}

static void test_squarefree() {
  FieldPtr Q = Field::Q();
  UPoly f = upmul(Q, upmul(Q, upl(Q, {-1, 1}), upl(Q, {-1, 1})), upl(Q, {1, 0, 1}));
  auto parts = squarefree_decomp(Q, f);
  CHECK(parts.size() == 2);
  CHECK(upeq(Q, squarefree_part(Q, f), upmul(Q, upl(Q, {-1, 1}), upl(Q, {1, 0, 1}))));
  auto roots = roots_in_field(Q, f);
  CHECK(roots.size() == 1 && Q->eq(roots[0], Q->one()));
}

int main() {
  test_arith_trivial();
  test_factor_f5();
  test_factor_f2_irreducible();
  test_factor_q();
  test_p_basis();
  test_extensions();
  test_perfect_closure();
  test_expand_roundtrip();
  test_frobenius_props();
  test_eq_congruence();
  test_parse_roundtrip();
  test_pth_roots();
  test_nth_element();
  test_trager();
  test_function_field_factoring();
  test_inseparable_factoring();
  test_factor_random_roundtrip();
  test_squarefree();
  if (failures) {
    std::printf("test_fields: %d failure(s)\n", failures);
    return 1;
  }
  std::printf("test_fields: all checks passed\n");
  return 0;
}
