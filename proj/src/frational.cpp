#include <algorithm>
#include <sstream>

#include "effalg/fieldvm.hpp"
#include "fieldvm_impl.hpp"

// F-rational functions: Frob^{-depth} of a quotient of polynomials with
// prime-field (or ℚ) coefficients.  The representation is kept reduced,
// with the denominator monic over a field base and primitive with positive
// lead over ℤ, and the depth minimal.

namespace effalg {

using namespace vmdetail;

namespace {

long base_char(const VmBase& b) { return (!b.overZ && b.p > 1) ? b.p : 0; }

void require_same(const FRational& a, const FRational& b) {
  if (!vm_eq(a.base, b.base) || a.R->vars != b.R->vars)
    fail("BaseMismatch", "F-rational operands over different contexts");
}

MPoly exponents_pow(const RingPtr& R, const MPoly& f, long q) {
  MPoly out;
  for (const MTerm& t : f) {
    Expo e = t.e;
    for (int& x : e) x *= (int)q;
    out.push_back(MTerm{e, t.c});
  }
  mp_norm(R, out);
  return out;
}

bool exponents_div(const RingPtr& R, const MPoly& f, long p, MPoly* out) {
  MPoly r;
  for (const MTerm& t : f) {
    Expo e = t.e;
    for (int& x : e) {
      if (x % (int)p != 0) return false;
      x /= (int)p;
    }
    r.push_back(MTerm{e, t.c});
  }
  mp_norm(R, r);
  *out = r;
  return true;
}

/// gcd of two nonzero polynomials, monic, via (f)∩(g) = (lcm).
MPoly poly_gcd(const RingPtr& R, const MPoly& f, const MPoly& g) {
  Ideal meet = ideal_intersect(R, {f}, {g});
  GB gb = groebner_ideal(R, meet);
  if (gb.basis.size() != 1)
    fail("Internal", "intersection of principal ideals not principal");
  MPoly lcm = gb.basis[0][0];
  MPoly q = mp_divide_exact(R, mp_mul(R, f, g), lcm);
  return mp_monic(R, q);
}

void raise_to_depth(FRational& a, int depth) {
  if (a.depth == depth) return;
  long p = base_char(a.base);
  if (p == 0) fail("Internal", "Frobenius depth without positive characteristic");
  long q = 1;
  for (int i = a.depth; i < depth; i++) q *= p;
  a.num = exponents_pow(a.R, a.num, q);
  a.den = exponents_pow(a.R, a.den, q);
  a.depth = depth;
}

void align(FRational& a, FRational& b) {
  int d = std::max(a.depth, b.depth);
  raise_to_depth(a, d);
  raise_to_depth(b, d);
}

}  // namespace

FRational fr_make(const FormulaCtx& c, const MPoly& num, const MPoly& den,
                  int depth) {
  FRational u;
  u.base = c.base;
  u.R = c.R;
  u.num = num;
  u.den = den;
  mp_norm(u.R, u.num);
  mp_norm(u.R, u.den);
  if (u.den.empty()) fail("DivisionByZero", "zero denominator");
  if (depth < 0) fail("UsageError", "negative Frobenius depth");
  long p = base_char(c.base);
  if (depth > 0 && p == 0)
    fail("UsageError", "Frobenius depth needs positive characteristic");
  u.depth = depth;
  if (u.num.empty()) {
    u.den = mp_from_int(u.R, 1);
    u.depth = 0;
    return u;
  }
  if (mp_total_deg(u.num) > 0 || mp_total_deg(u.den) > 0) {
    MPoly g = poly_gcd(u.R, u.num, u.den);
    if (mp_total_deg(g) > 0) {
      u.num = mp_divide_exact(u.R, u.num, g);
      u.den = mp_divide_exact(u.R, u.den, g);
    }
  }
  if (c.base.overZ) {
    // scale both parts by one rational so they become primitive integer
    // polynomials with the denominator lead positive
    Int L = 1, G = 0;
    for (const MPoly* f : {&u.num, &u.den})
      for (const MTerm& t : *f) {
        Rat v = felem_rat(u.R->K, t.c);
        mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), v.get_den().get_mpz_t());
      }
    for (const MPoly* f : {&u.num, &u.den})
      for (const MTerm& t : *f) {
        Rat v = felem_rat(u.R->K, t.c) * Rat(L);
        mpz_gcd(G.get_mpz_t(), G.get_mpz_t(), v.get_num().get_mpz_t());
      }
    Rat s = Rat(L) / Rat(G);
    if (felem_rat(u.R->K, u.den.front().c) < 0) s = -s;
    FElem fs = u.R->K->from_rat(s);
    u.num = mp_scale(u.R, fs, u.num);
    u.den = mp_scale(u.R, fs, u.den);
  } else {
    FElem lead = u.den.front().c;
    FElem inv = u.R->K->inv(lead);
    u.num = mp_scale(u.R, inv, u.num);
    u.den = mp_scale(u.R, inv, u.den);
  }
  while (u.depth > 0) {
    MPoly n2, d2;
    if (!exponents_div(u.R, u.num, p, &n2) ||
        !exponents_div(u.R, u.den, p, &d2))
      break;
    u.num = n2;
    u.den = d2;
    u.depth--;
  }
  return u;
}

FRational fr_const(const FormulaCtx& c, const Int& n) {
  return fr_make(c, mp_const(c.R, c.R->K->from_int(n)), mp_from_int(c.R, 1));
}

FRational fr_var(const FormulaCtx& c, int i) {
  if (i < 0 || i >= c.R->nvars()) fail("UsageError", "variable index");
  return fr_make(c, mp_var(c.R, i), mp_from_int(c.R, 1));
}

std::string fr_to_string(const FRational& u) {
  bool one = u.den.size() == 1 && mp_total_deg(u.den) == 0 &&
             u.R->K->is_one(u.den.front().c);
  std::string core =
      one ? mp_to_string(u.R, u.num)
          : "(" + mp_to_string(u.R, u.num) + ")/(" + mp_to_string(u.R, u.den) +
                ")";
  if (u.depth == 0) return core;
  std::ostringstream os;
  os << "frob^-" << u.depth << "(" << core << ")";
  return os.str();
}

FRational fr_add(const FRational& a, const FRational& b) {
  require_same(a, b);
  FRational x = a, y = b;
  align(x, y);
  FormulaCtx c{a.base, a.R};
  MPoly num = mp_add(a.R, mp_mul(a.R, x.num, y.den), mp_mul(a.R, y.num, x.den));
  return fr_make(c, num, mp_mul(a.R, x.den, y.den), x.depth);
}

FRational fr_neg(const FRational& a) {
  FormulaCtx c{a.base, a.R};
  return fr_make(c, mp_neg(a.R, a.num), a.den, a.depth);
}

FRational fr_sub(const FRational& a, const FRational& b) {
  return fr_add(a, fr_neg(b));
}

FRational fr_mul(const FRational& a, const FRational& b) {
  require_same(a, b);
  FRational x = a, y = b;
  align(x, y);
  FormulaCtx c{a.base, a.R};
  return fr_make(c, mp_mul(a.R, x.num, y.num), mp_mul(a.R, x.den, y.den),
                 x.depth);
}

FRational fr_div(const FRational& a, const FRational& b) {
  require_same(a, b);
  if (b.num.empty()) fail("DivisionByZero", "division by the zero function");
  FRational x = a, y = b;
  align(x, y);
  FormulaCtx c{a.base, a.R};
  return fr_make(c, mp_mul(a.R, x.num, y.den), mp_mul(a.R, x.den, y.num),
                 x.depth);
}

bool fr_eq(const FRational& a, const FRational& b) {
  if (!vm_eq(a.base, b.base) || a.R->vars != b.R->vars) return false;
  FRational x = a, y = b;
  align(x, y);
  return mp_eq(a.R, mp_mul(a.R, x.num, y.den), mp_mul(a.R, y.num, x.den));
}

bool fr_is_zero(const FRational& a) { return a.num.empty(); }

FRational fr_compose(const FRational& u, const std::vector<FRational>& args) {
  if ((int)args.size() != u.R->nvars())
    fail("UsageError", "composition arity mismatch");
  if (args.empty()) return u;
  for (const FRational& a : args)
    if (!vm_eq(a.base, u.base) || a.R->vars != args[0].R->vars)
      fail("BaseMismatch", "composition arguments over different contexts");
  std::vector<FRational> as = args;
  int d = 0;
  for (const FRational& a : as) d = std::max(d, a.depth);
  for (FRational& a : as) raise_to_depth(a, d);
  FormulaCtx c{args[0].base, args[0].R};
  auto eval_poly = [&](const MPoly& f) {
    FRational acc = fr_const(c, 0);
    for (const MTerm& t : f) {
      FRational term =
          fr_make(c, mp_const(c.R, rat_to_field(felem_rat(u.R->K, t.c), c.R->K)),
                  mp_from_int(c.R, 1));
      for (size_t i = 0; i < as.size(); i++)
        for (int e = 0; e < t.e[i]; e++) term = fr_mul(term, as[i]);
      acc = fr_add(acc, term);
    }
    return acc;
  };
  FRational N = eval_poly(u.num);
  FRational D = eval_poly(u.den);
  if (fr_is_zero(D))
    fail("DivisionByZero", "composite denominator vanishes identically");
  FRational q = fr_div(N, D);
  if (u.depth > 0) {
    if (base_char(u.base) == 0)
      fail("Internal", "depth in characteristic zero");
    q = fr_make(c, q.num, q.den, q.depth + u.depth);
  }
  return q;
}

FElem fr_eval(const FRational& u, const FieldPtr& K,
              const std::vector<FElem>& pt) {
  if ((int)pt.size() != u.R->nvars()) fail("UsageError", "point arity");
  long pc = base_char(u.base);
  long kc = K->characteristic();
  if (!u.base.overZ && pc != kc)
    fail("UsageError", "field characteristic does not match the base");
  FElem n = mpoly_eval(u.R, u.num, K, pt);
  FElem d = mpoly_eval(u.R, u.den, K, pt);
  if (K->is_zero(d)) fail("UndefinedAtPoint", "denominator vanishes");
  FElem v = K->div(n, d);
  for (int i = 0; i < u.depth; i++) v = K->frob_inv(v);
  return v;
}

FormulaPtr fr_graph(const FRational& u, const FormulaCtx& graphCtx,
                    int yIndex) {
  if (!vm_eq(u.base, graphCtx.base))
    fail("BaseMismatch", "graph context over a different base");
  const RingPtr& G = graphCtx.R;
  if (yIndex < 0 || yIndex >= G->nvars())
    fail("UsageError", "graph variable index");
  std::vector<MPoly> images;
  for (int i = 0; i < u.R->nvars(); i++) {
    int j = G->var_index(u.R->vars[i]);
    if (j < 0) {
      bool used = mp_deg_in(u.num, i) > 0 || mp_deg_in(u.den, i) > 0;
      if (used)
        fail("UnknownVariable", "graph context lacks variable " + u.R->vars[i]);
      images.push_back(MPoly{});
      continue;
    }
    if (j == yIndex)
      fail("UsageError", "value variable also appears as an input");
    images.push_back(mp_var(G, j));
  }
  MPoly num = mp_map(u.R, u.num, G, images);
  MPoly den = mp_map(u.R, u.den, G, images);
  long q = 1;
  for (int i = 0; i < u.depth; i++) q *= base_char(u.base);
  MPoly ypow = mp_var(G, yIndex, (int)q);
  MPoly rel = mp_sub(G, mp_mul(G, ypow, den), num);
  return bf_and({bf_eq0(graphCtx, rel), bf_not(bf_eq0(graphCtx, den))});
}

}  // namespace effalg
