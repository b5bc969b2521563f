#include "effalg/field.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

#include "effalg/factor.hpp"
#include "effalg/upoly.hpp"

namespace effalg {

/* ---------------- structural comparison ---------------- */

static int vec_cmp(const std::vector<FElem>& a, const std::vector<FElem>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); i++)
    if (int c = felem_cmp(a[i], b[i])) return c;
  return 0;
}

int felem_cmp(const FElem& a, const FElem& b) {
  if (a.v.index() != b.v.index()) return a.v.index() < b.v.index() ? -1 : 1;
  switch (a.v.index()) {
    case 0: {
      int c = cmp(std::get<Rat>(a.v), std::get<Rat>(b.v));
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    case 1: {
      auto x = std::get<int64_t>(a.v), y = std::get<int64_t>(b.v);
      return x < y ? -1 : x > y ? 1 : 0;
    }
    case 2: {
      auto &x = std::get<FracV>(a.v), &y = std::get<FracV>(b.v);
      if (int c = vec_cmp(x.den, y.den)) return c;
      return vec_cmp(x.num, y.num);
    }
    case 3:
      return vec_cmp(std::get<ResV>(a.v).c, std::get<ResV>(b.v).c);
    default: {
      auto &x = std::get<PerfV>(a.v), &y = std::get<PerfV>(b.v);
      if (x.e != y.e) return x.e < y.e ? -1 : 1;
      return vec_cmp(x.a, y.a);
    }
  }
}

bool felem_equal(const FElem& a, const FElem& b) { return felem_cmp(a, b) == 0; }

/* ---------------- node construction ---------------- */

FieldPtr make_node(Field&& f) { return std::shared_ptr<Field>(new Field(std::move(f))); }

static bool small_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; d++)
    if (p % d == 0) return false;
  return true;
}

FieldPtr Field::Q() {
  Field f;
  f.kind = kQ;
  f.p = 0;
  return make_node(std::move(f));
}

FieldPtr Field::Fp(long p) {
  if (!small_prime(p)) fail("UsageError", "fp() requires a prime");
  Field f;
  f.kind = kFp;
  f.p = p;
  return make_node(std::move(f));
}

FieldPtr Field::trans(const FieldPtr& K, const std::string& var) {
  if (var.empty()) fail("UsageError", "transcendental needs a variable name");
  Field f;
  f.kind = kTrans;
  f.sub = K;
  f.p = K->p;
  f.gen = var;
  return make_node(std::move(f));
}

FieldPtr Field::algsep(const FieldPtr& K, const std::string& g, const UPoly& mp_in) {
  UPoly mp = upmonic(K, mp_in);
  if (updeg(mp) < 1) fail("ReduciblePolynomial", "minimal polynomial must have degree >= 1");
  if (!is_irreducible(K, mp)) fail("ReduciblePolynomial", "minimal polynomial is reducible");
  UPoly d = upderiv(K, mp);
  if (upis_zero(K, d)) fail("UsageError", "minimal polynomial is inseparable; use an inseparable step");
  Field f;
  f.kind = kAlgSep;
  f.sub = K;
  f.p = K->p;
  f.gen = g;
  f.minpoly = mp;
  return make_node(std::move(f));
}

FieldPtr Field::alginsep(const FieldPtr& K, const std::string& g, const FElem& a) {
  if (K->p == 0) fail("CharZero", "inseparable step needs characteristic p");
  if (K->is_pth_power(a)) fail("AlreadyPthPower", "element already has a p-th root");
  Field f;
  f.kind = kAlgInsep;
  f.sub = K;
  f.p = K->p;
  f.gen = g;
  f.insep_a = a;
  f.minpoly = UPoly(K->p + 1);
  f.minpoly[0] = K->neg(a);
  for (long i = 1; i < K->p; i++) f.minpoly[i] = K->zero();
  f.minpoly[K->p] = K->one();
  return make_node(std::move(f));
}

FieldPtr Field::perf(const FieldPtr& K) {
  if (K->p == 0) fail("CharZero", "perfect closure needs characteristic p");
  for (const Field* t = K.get(); t; t = t->sub.get())
    if (t->kind == kPerf) fail("UsageError", "perfect closure may appear at most once");
  Field f;
  f.kind = kPerf;
  f.sub = K;
  f.p = K->p;
  return make_node(std::move(f));
}

FieldPtr Field::algext(const FieldPtr& K, const std::string& g, const UPoly& mp_in) {
  UPoly mp = upmonic(K, mp_in);
  if (updeg(mp) < 1) fail("ReduciblePolynomial", "degree >= 1 required");
  UPoly d = upderiv(K, mp);
  if (!upis_zero(K, d)) return algsep(K, g, mp);
  // Inseparable: write mp = r(x^{p^e}) with r separable, adjoin a root of r,
  // then a chain of p-th roots ending in the requested generator.
  long p = K->p;
  long e = 0;
  UPoly r = mp;
  while (upis_zero(K, upderiv(K, r))) {
    UPoly r2((updeg(r) / p) + 1, K->zero());
    for (int i = 0; i <= updeg(r); i++) {
      if (K->is_zero(r[i])) continue;
      if (i % p != 0) fail("Internal", "inseparable deflation");
      r2[i / p] = r[i];
    }
    r = std::move(r2);
    e++;
  }
  FieldPtr cur = K;
  FElem target;
  if (updeg(r) == 1) {
    target = K->neg(r[0]);
  } else {
    cur = algsep(K, g + "_0", r);
    target = cur->generator();
  }
  for (long step = 0; step < e; step++) {
    std::string name = (step + 1 < e) ? g + "_" + std::to_string(step + 1) : g;
    cur = alginsep(cur, name, target);
    target = cur->generator();
  }
  return cur;
}

/* ---------------- basic data ---------------- */

bool Field::is_perfect() const {
  switch (kind) {
    case kQ:
    case kFp:
    case kPerf:
      return true;
    case kTrans:
      return false;
    case kAlgSep:
      return sub->is_perfect();
    case kAlgInsep:
      return false;
  }
  return false;
}

bool Field::is_finite() const {
  switch (kind) {
    case kQ:
      return false;
    case kFp:
      return true;
    case kTrans:
      return false;
    default:
      return sub->is_finite();
  }
}

Int Field::size() const {
  if (!is_finite()) fail("UsageError", "size() of an infinite field");
  switch (kind) {
    case kFp:
      return Int(p);
    case kPerf:
      return sub->size();
    default: {
      Int s = sub->size();
      Int r = 1;
      for (int i = 0; i < ext_degree(); i++) r *= s;
      return r;
    }
  }
}

int Field::ext_degree() const {
  if (kind != kAlgSep && kind != kAlgInsep) fail("UsageError", "ext_degree on non-algebraic step");
  return updeg(minpoly);
}

int Field::tower_height() const { return sub ? 1 + sub->tower_height() : 0; }

FElem Field::generator() const {
  if (kind == kTrans) {
    FracV f;
    f.num = {sub->zero(), sub->one()};
    f.den = {sub->one()};
    return FElem(std::move(f));
  }
  if (kind == kAlgSep || kind == kAlgInsep) {
    ResV r;
    r.c = {sub->zero(), sub->one()};
    return FElem(std::move(r));
  }
  fail("UsageError", "field node has no generator");
}

/* ---------------- canonicalization helpers ---------------- */

static FElem mk_frac(const FieldPtr& sub, UPoly num, UPoly den) {
  if (upis_zero(sub, den)) fail("DivisionByZero", "zero denominator");
  UPoly g = upgcd(sub, num, den);
  if (updeg(g) > 0) {
    num = updivrem(sub, num, g, nullptr);
    den = updivrem(sub, den, g, nullptr);
  }
  FElem lc = den[updeg(den)];
  if (!sub->is_one(lc)) {
    FElem il = sub->inv(lc);
    num = upscale(sub, il, num);
    den = upscale(sub, il, den);
  }
  FracV f;
  f.num = std::move(num);
  f.den = std::move(den);
  return FElem(std::move(f));
}

FElem canon_perf(const Field* F, int e, FElem a) {
  const FieldPtr& K = F->sub;
  while (e > 0) {
    FElem r;
    if (!K->pth_root(r, a)) break;
    a = std::move(r);
    e--;
  }
  PerfV pv;
  pv.e = e;
  pv.a = {std::move(a)};
  return FElem(std::move(pv));
}

/* ---------------- arithmetic ---------------- */

FElem Field::zero() const {
  switch (kind) {
    case kQ:
      return FElem(Rat(0));
    case kFp:
      return FElem(int64_t(0));
    case kTrans: {
      FracV f;
      f.den = {sub->one()};
      return FElem(std::move(f));
    }
    case kAlgSep:
    case kAlgInsep:
      return FElem(ResV{});
    case kPerf: {
      PerfV pv;
      pv.a = {sub->zero()};
      return FElem(std::move(pv));
    }
  }
  return FElem();
}

FElem Field::one() const { return from_int(1); }

FElem Field::from_int(const Int& n) const {
  switch (kind) {
    case kQ:
      return FElem(Rat(n));
    case kFp: {
      Int m = n % p;
      if (m < 0) m += p;
      return FElem(int64_t(m.get_si()));
    }
    case kTrans: {
      FracV f;
      FElem c = sub->from_int(n);
      if (!sub->is_zero(c)) f.num = {c};
      f.den = {sub->one()};
      return FElem(std::move(f));
    }
    case kAlgSep:
    case kAlgInsep: {
      ResV r;
      FElem c = sub->from_int(n);
      if (!sub->is_zero(c)) r.c = {c};
      return FElem(std::move(r));
    }
    case kPerf: {
      PerfV pv;
      pv.a = {sub->from_int(n)};
      return FElem(std::move(pv));
    }
  }
  return FElem();
}

FElem Field::from_rat(const Rat& r) const {
  if (kind == kQ) return FElem(r);
  FElem n = from_int(r.get_num());
  FElem d = from_int(r.get_den());
  return div(n, d);
}

FElem Field::embed(const FElem& x) const {
  switch (kind) {
    case kTrans: {
      FracV f;
      if (!sub->is_zero(x)) f.num = {x};
      f.den = {sub->one()};
      return FElem(std::move(f));
    }
    case kAlgSep:
    case kAlgInsep: {
      ResV r;
      if (!sub->is_zero(x)) r.c = {x};
      return FElem(std::move(r));
    }
    case kPerf: {
      PerfV pv;
      pv.a = {x};
      return FElem(std::move(pv));
    }
    default:
      fail("UsageError", "embed on a root field");
  }
}

bool Field::is_zero(const FElem& a) const {
  switch (kind) {
    case kQ:
      return std::get<Rat>(a.v) == 0;
    case kFp:
      return std::get<int64_t>(a.v) == 0;
    case kTrans:
      return std::get<FracV>(a.v).num.empty();
    case kAlgSep:
    case kAlgInsep:
      return std::get<ResV>(a.v).c.empty();
    case kPerf:
      return sub->is_zero(std::get<PerfV>(a.v).a[0]);
  }
  return false;
}

bool Field::is_one(const FElem& a) const { return eq(a, one()); }

bool Field::eq(const FElem& a, const FElem& b) const { return felem_equal(a, b); }

FElem Field::add(const FElem& a, const FElem& b) const {
  switch (kind) {
    case kQ:
      return FElem(Rat(std::get<Rat>(a.v) + std::get<Rat>(b.v)));
    case kFp: {
      int64_t s = std::get<int64_t>(a.v) + std::get<int64_t>(b.v);
      if (s >= p) s -= p;
      return FElem(s);
    }
    case kTrans: {
      auto &x = std::get<FracV>(a.v), &y = std::get<FracV>(b.v);
      UPoly n = upadd(sub, upmul(sub, x.num, y.den), upmul(sub, y.num, x.den));
      UPoly d = upmul(sub, x.den, y.den);
      return mk_frac(sub, std::move(n), std::move(d));
    }
    case kAlgSep:
    case kAlgInsep: {
      ResV r;
      r.c = upadd(sub, std::get<ResV>(a.v).c, std::get<ResV>(b.v).c);
      return FElem(std::move(r));
    }
    case kPerf: {
      auto &x = std::get<PerfV>(a.v), &y = std::get<PerfV>(b.v);
      int E = std::max(x.e, y.e);
      FElem xa = sub->frob_pow(x.a[0], E - x.e);
      FElem ya = sub->frob_pow(y.a[0], E - y.e);
      return canon_perf(this, E, sub->add(xa, ya));
    }
  }
  return FElem();
}

FElem Field::neg(const FElem& a) const {
  switch (kind) {
    case kQ:
      return FElem(Rat(-std::get<Rat>(a.v)));
    case kFp: {
      int64_t x = std::get<int64_t>(a.v);
      return FElem(x == 0 ? int64_t(0) : p - x);
    }
    case kTrans: {
      FracV f = std::get<FracV>(a.v);
      f.num = upneg(sub, f.num);
      return FElem(std::move(f));
    }
    case kAlgSep:
    case kAlgInsep: {
      ResV r;
      r.c = upneg(sub, std::get<ResV>(a.v).c);
      return FElem(std::move(r));
    }
    case kPerf: {
      auto& x = std::get<PerfV>(a.v);
      PerfV pv;
      pv.e = x.e;
      pv.a = {sub->neg(x.a[0])};
      return FElem(std::move(pv));  // -a is a p-th power iff a is
    }
  }
  return FElem();
}

FElem Field::sub_(const FElem& a, const FElem& b) const { return add(a, neg(b)); }

FElem Field::mul(const FElem& a, const FElem& b) const {
  switch (kind) {
    case kQ:
      return FElem(Rat(std::get<Rat>(a.v) * std::get<Rat>(b.v)));
    case kFp: {
      unsigned __int128 s =
          (unsigned __int128)std::get<int64_t>(a.v) * (unsigned __int128)std::get<int64_t>(b.v);
      return FElem(int64_t(s % (unsigned __int128)p));
    }
    case kTrans: {
      auto &x = std::get<FracV>(a.v), &y = std::get<FracV>(b.v);
      return mk_frac(sub, upmul(sub, x.num, y.num), upmul(sub, x.den, y.den));
    }
    case kAlgSep:
    case kAlgInsep: {
      ResV r;
      r.c = upmod(sub, upmul(sub, std::get<ResV>(a.v).c, std::get<ResV>(b.v).c), minpoly);
      return FElem(std::move(r));
    }
    case kPerf: {
      auto &x = std::get<PerfV>(a.v), &y = std::get<PerfV>(b.v);
      int E = std::max(x.e, y.e);
      FElem xa = sub->frob_pow(x.a[0], E - x.e);
      FElem ya = sub->frob_pow(y.a[0], E - y.e);
      return canon_perf(this, E, sub->mul(xa, ya));
    }
  }
  return FElem();
}

FElem Field::inv(const FElem& a) const {
  if (is_zero(a)) fail("DivisionByZero", "inverse of zero");
  switch (kind) {
    case kQ:
      return FElem(Rat(1 / std::get<Rat>(a.v)));
    case kFp: {
      // extended Euclid on (x, p)
      int64_t x = std::get<int64_t>(a.v);
      int64_t t = 0, newt = 1, r = p, newr = x;
      while (newr != 0) {
        int64_t q = r / newr;
        int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
      }
      if (t < 0) t += p;
      return FElem(t);
    }
    case kTrans: {
      auto& x = std::get<FracV>(a.v);
      return mk_frac(sub, x.den, x.num);
    }
    case kAlgSep:
    case kAlgInsep: {
      UPoly u, v;
      UPoly g = upxgcd(sub, std::get<ResV>(a.v).c, minpoly, &u, &v);
      if (updeg(g) != 0) fail("DivisionByZero", "non-invertible residue");  // cannot happen: minpoly irreducible
      FElem c = sub->inv(g[0]);
      ResV r;
      r.c = upmod(sub, upscale(sub, c, u), minpoly);
      return FElem(std::move(r));
    }
    case kPerf: {
      auto& x = std::get<PerfV>(a.v);
      PerfV pv;
      pv.e = x.e;
      pv.a = {sub->inv(x.a[0])};
      return FElem(std::move(pv));  // 1/a is a p-th power iff a is
    }
  }
  return FElem();
}

FElem Field::div(const FElem& a, const FElem& b) const { return mul(a, inv(b)); }

FElem Field::pow(const FElem& a, const Int& e_in) const {
  Int e = e_in;
  FElem base = a;
  if (e < 0) {
    base = inv(base);
    e = -e;
  }
  FElem acc = one();
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return acc;
}

FElem Field::frob(const FElem& a) const {
  if (p == 0) return a;
  if (kind == kPerf) {
    auto& x = std::get<PerfV>(a.v);
    if (x.e > 0) {
      PerfV pv;
      pv.e = x.e - 1;
      pv.a = {x.a[0]};
      return FElem(std::move(pv));
    }
    PerfV pv;
    pv.a = {sub->frob(x.a[0])};
    return FElem(std::move(pv));
  }
  return pow(a, Int(p));
}

FElem Field::frob_pow(const FElem& a, int e) const {
  FElem r = a;
  for (int i = 0; i < e; i++) r = frob(r);
  return r;
}

FElem Field::frob_inv(const FElem& a) const {
  if (p == 0) return a;
  if (!is_perfect()) fail("FrobInvUnavailable", "field is not perfect");
  FElem out;
  if (!pth_root(out, a)) fail("FrobInvUnavailable", "internal: root missing in perfect field");
  return out;
}

/* ---------------- p-th roots ---------------- */

bool Field::pth_root(FElem& out, const FElem& a) const {
  if (p == 0) fail("CharZero", "p-th root in characteristic zero");
  switch (kind) {
    case kQ:
      return false;
    case kFp:
      out = a;  // Fermat: a^p = a in F_p
      return true;
    case kTrans: {
      auto& x = std::get<FracV>(a.v);
      if (x.num.empty()) {
        out = zero();
        return true;
      }
      // a = f/g = f·g^{p-1} / g^p; it is a p-th power iff h := f·g^{p-1} is one in K[T].
      UPoly h = upmul(sub, x.num, uppow(sub, x.den, Int(p - 1)));
      UPoly r;
      int dh = updeg(h);
      for (int i = 0; i <= dh; i++) {
        if (i >= (int)h.size() || sub->is_zero(i < (int)h.size() ? h[i] : sub->zero())) continue;
        if (i % p != 0) return false;
        FElem c;
        if (!sub->pth_root(c, h[i])) return false;
        if ((int)r.size() <= i / p) r.resize(i / p + 1, sub->zero());
        r[i / p] = c;
      }
      upnorm(sub, r);
      out = mk_frac(sub, std::move(r), x.den);
      return true;
    }
    case kAlgSep: {
      // z = Σ d_i α^{p i} with d_i ∈ K; z is a p-th power iff every d_i is.
      int d = updeg(minpoly);
      const UPoly& z = std::get<ResV>(a.v).c;
      std::vector<std::vector<FElem>> M(d, std::vector<FElem>(d, sub->zero()));
      // columns: α^{p i} mod minpoly
      UPoly col = {sub->one()};
      UPoly ap = frob_gen();
      for (int i = 0; i < d; i++) {
        for (int rrow = 0; rrow <= updeg(col); rrow++) M[rrow][i] = col[rrow];
        if (i + 1 < d) col = upmod(sub, upmul(sub, col, ap), minpoly);
      }
      std::vector<FElem> rhs(d, sub->zero());
      for (int i = 0; i <= updeg(z); i++) rhs[i] = z[i];
      std::vector<FElem> sol;
      if (!linsolve(sub, M, rhs, sol)) return false;
      UPoly w(d, sub->zero());
      for (int i = 0; i < d; i++) {
        FElem c;
        if (!sub->pth_root(c, sol[i])) return false;
        w[i] = c;
      }
      upnorm(sub, w);
      ResV rv;
      rv.c = std::move(w);
      out = FElem(std::move(rv));
      return true;
    }
    case kAlgInsep: {
      const UPoly& z = std::get<ResV>(a.v).c;
      // K'^p = K^p(a) ⊆ K: the value must lie in K (θ-degree 0).
      if (updeg(z) > 0) return false;
      if (z.empty()) {
        out = zero();
        return true;
      }
      // Solve c0 = Σ_s g_s^p a^s: transported to the K-linear system
      // Σ_s g_s · root(a^s)_m = root(c0)_m over the p-basis monomials m of K.
      auto zc = sub->p_expand(z[0]);
      std::map<std::vector<int>, std::vector<FElem>> rows;  // monomial -> coefficients of g_s
      FElem apow = sub->one();
      for (long s = 0; s < p; s++) {
        auto ex = sub->p_expand(apow);
        for (auto& [m, w] : ex) {
          auto it = rows.find(m);
          if (it == rows.end()) it = rows.emplace(m, std::vector<FElem>(p, sub->zero())).first;
          it->second[s] = w;
        }
        if (s + 1 < p) apow = sub->mul(apow, insep_a);
      }
      for (auto& [m, w] : zc) rows.try_emplace(m, std::vector<FElem>(p, sub->zero()));
      std::vector<std::vector<FElem>> M;
      std::vector<FElem> rhs;
      for (auto& [m, row] : rows) {
        M.push_back(row);
        FElem r = sub->zero();
        for (auto& [m2, w2] : zc)
          if (m2 == m) r = w2;
        rhs.push_back(r);
      }
      std::vector<FElem> g;
      if (!linsolve(sub, M, rhs, g)) return false;
      UPoly w(p, sub->zero());
      for (long s = 0; s < p; s++) w[s] = g[s];
      upnorm(sub, w);
      ResV rv;
      rv.c = std::move(w);
      out = FElem(std::move(rv));
      return true;
    }
    case kPerf: {
      auto& x = std::get<PerfV>(a.v);
      out = canon_perf(this, x.e + 1, x.a[0]);
      return true;
    }
  }
  return false;
}

bool Field::is_pth_power(const FElem& a) const {
  FElem tmp;
  return pth_root(tmp, a);
}

UPoly Field::frob_gen() const {
  // α^p mod minpoly as a UPoly over sub
  UPoly x = {sub->zero(), sub->one()};
  return uppowmod(sub, x, Int(p), minpoly);
}

/* ---------------- p-basis ---------------- */

std::vector<FElem> Field::p_basis() const {
  if (p == 0) fail("CharZero", "p-basis in characteristic zero");
  switch (kind) {
    case kFp:
      return {};
    case kPerf:
      return {};
    case kTrans: {
      std::vector<FElem> b;
      for (auto& e : sub->p_basis()) b.push_back(embed(e));
      b.push_back(generator());
      return b;
    }
    case kAlgSep: {
      std::vector<FElem> b;
      for (auto& e : sub->p_basis()) b.push_back(embed(e));
      return b;
    }
    case kAlgInsep: {
      std::vector<FElem> b;
      auto sb = sub->p_basis();
      for (int i = 0; i < (int)sb.size(); i++)
        b.push_back(i == exchange_slot() ? generator() : embed(sb[i]));
      return b;
    }
    default:
      fail("CharZero", "p-basis unavailable");
  }
}

int Field::p_rank() const { return (int)p_basis().size(); }

int Field::exchange_slot() const {
  // Index of the p-basis element of sub that a^{1/p} replaces:
  // any slot occurring with positive exponent in a monomial of a's expansion.
  auto ex = sub->p_expand(insep_a);
  for (auto& [m, w] : ex)
    for (int j = 0; j < (int)m.size(); j++)
      if (m[j] > 0) return j;
  fail("AlreadyPthPower", "element has trivial expansion");
}

std::vector<std::pair<std::vector<int>, FElem>> Field::p_expand(const FElem& x) const {
  if (p == 0) fail("CharZero", "p-expansion in characteristic zero");
  std::vector<std::pair<std::vector<int>, FElem>> out;
  switch (kind) {
    case kFp:
    case kPerf: {
      if (!is_zero(x)) out.push_back({{}, frob_inv(x)});
      break;
    }
    case kTrans: {
      auto& fr = std::get<FracV>(x.v);
      if (fr.num.empty()) break;
      UPoly h = upmul(sub, fr.num, uppow(sub, fr.den, Int(p - 1)));
      // h = Σ_{j<p} T^j Σ_i c_{ij} T^{pi}; expand each c_{ij} over sub.
      std::map<std::vector<int>, UPoly> acc;  // full monomial -> numerator poly Σ w_i T^i
      for (int k = 0; k <= updeg(h); k++) {
        if (sub->is_zero(h[k])) continue;
        int j = k % (int)p, i = k / (int)p;
        for (auto& [m, w] : sub->p_expand(h[k])) {
          std::vector<int> key = m;
          key.push_back(j);
          UPoly& np = acc[key];
          if ((int)np.size() <= i) np.resize(i + 1, sub->zero());
          np[i] = w;
        }
      }
      for (auto& [key, np] : acc) {
        UPoly nn = np;
        upnorm(sub, nn);
        FElem w = mk_frac(sub, std::move(nn), fr.den);
        if (!is_zero(w)) out.push_back({key, w});
      }
      break;
    }
    case kAlgSep: {
      int d = updeg(minpoly);
      const UPoly& z = std::get<ResV>(x.v).c;
      if (z.empty()) break;
      std::vector<std::vector<FElem>> M(d, std::vector<FElem>(d, sub->zero()));
      UPoly col = {sub->one()};
      UPoly ap = frob_gen();
      for (int i = 0; i < d; i++) {
        for (int r = 0; r <= updeg(col); r++) M[r][i] = col[r];
        if (i + 1 < d) col = upmod(sub, upmul(sub, col, ap), minpoly);
      }
      std::vector<FElem> rhs(d, sub->zero());
      for (int i = 0; i <= updeg(z); i++) rhs[i] = z[i];
      std::vector<FElem> dvec;
      if (!linsolve(sub, M, rhs, dvec))
        fail("UsageError", "internal: α^p powers do not span");
      std::map<std::vector<int>, UPoly> acc;  // monomial -> coefficients over α^i
      for (int i = 0; i < d; i++) {
        if (sub->is_zero(dvec[i])) continue;
        for (auto& [m, w] : sub->p_expand(dvec[i])) {
          UPoly& c = acc[m];
          if ((int)c.size() <= i) c.resize(i + 1, sub->zero());
          c[i] = w;
        }
      }
      for (auto& [m, c] : acc) {
        UPoly cc = c;
        upnorm(sub, cc);
        ResV rv;
        rv.c = std::move(cc);
        FElem w = FElem(std::move(rv));
        if (!is_zero(w)) out.push_back({m, w});
      }
      break;
    }
    case kAlgInsep: {
      const UPoly& z = std::get<ResV>(x.v).c;
      if (z.empty()) break;
      int slot = exchange_slot();
      int r = sub->p_rank();
      // Precompute expansions of the exchanged-basis monomials a^s·m'' of sub.
      // Unknowns: u_{s,m''}; equations over sub's own basis monomials.
      // Enumerate monomials m'' (exponents < p in every slot except `slot`, where 0).
      std::vector<std::vector<int>> mons;
      std::vector<int> cur(r, 0);
      auto sbasis = sub->p_basis();
      std::function<void(int)> rec = [&](int i) {
        if (i == r) {
          mons.push_back(cur);
          return;
        }
        if (i == slot) {
          cur[i] = 0;
          rec(i + 1);
          return;
        }
        for (int e = 0; e < (int)p; e++) {
          cur[i] = e;
          rec(i + 1);
        }
        cur[i] = 0;
      };
      rec(0);
      // columns: (s, m'') pairs
      struct Col { int s; int mi; };
      std::vector<Col> cols;
      std::map<std::vector<int>, std::vector<FElem>> rows;
      FElem apow = sub->one();
      for (int s = 0; s < (int)p; s++) {
        for (int mi = 0; mi < (int)mons.size(); mi++) {
          FElem v = apow;
          for (int i = 0; i < r; i++)
            for (int e = 0; e < mons[mi][i]; e++) v = sub->mul(v, sbasis[i]);
          cols.push_back({s, mi});
          for (auto& [m, w] : sub->p_expand(v)) {
            auto it = rows.find(m);
            if (it == rows.end())
              it = rows.emplace(m, std::vector<FElem>(p * mons.size(), sub->zero())).first;
            it->second[cols.size() - 1] = w;
          }
        }
        if (s + 1 < (int)p) apow = sub->mul(apow, insep_a);
      }
      for (int t = 0; t <= updeg(z); t++) {
        if (sub->is_zero(z[t])) continue;
        auto zc = sub->p_expand(z[t]);
        std::map<std::vector<int>, FElem> zmap(zc.begin(), zc.end());
        std::vector<std::vector<FElem>> M;
        std::vector<FElem> rhs;
        std::vector<std::vector<int>> mkeys;
        for (auto& [m, row] : rows) {
          M.push_back(row);
          auto it = zmap.find(m);
          rhs.push_back(it == zmap.end() ? sub->zero() : it->second);
          mkeys.push_back(m);
        }
        for (auto& [m, w] : zmap)
          if (!rows.count(m)) fail("UsageError", "internal: exchanged basis does not span");
        std::vector<FElem> u;
        if (!linsolve(sub, M, rhs, u)) fail("UsageError", "internal: exchange solve failed");
        // contribution: (u·θ^s)^p · m''·θ^t  — root u·θ^s, monomial m'' with θ-slot = t
        std::map<std::vector<int>, UPoly> acc;  // final monomial -> θ-coeffs of root
        for (size_t c = 0; c < cols.size(); c++) {
          if (sub->is_zero(u[c])) continue;
          std::vector<int> key = mons[cols[c].mi];
          key[slot] = t;
          UPoly& th = acc[key];
          if ((int)th.size() <= cols[c].s) th.resize(cols[c].s + 1, sub->zero());
          th[cols[c].s] = u[c];
        }
        for (auto& [key, th] : acc) {
          UPoly tt = th;
          upnorm(sub, tt);
          ResV rv;
          rv.c = std::move(tt);
          FElem w = FElem(std::move(rv));
          if (!is_zero(w)) out.push_back({key, w});
        }
      }
      break;
    }
    default:
      fail("CharZero", "p-expansion unavailable");
  }
  std::sort(out.begin(), out.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
  return out;
}

FElem Field::p_recombine(
    const std::vector<std::pair<std::vector<int>, FElem>>& terms) const {
  auto basis = p_basis();
  FElem acc = zero();
  for (auto& [m, w] : terms) {
    FElem t = pow(w, Int(p));
    for (size_t i = 0; i < m.size(); i++)
      for (int e = 0; e < m[i]; e++) t = mul(t, basis[i]);
    acc = add(acc, t);
  }
  return acc;
}

bool Field::p_independent(const std::vector<FElem>& elems) const {
  if (p == 0) fail("CharZero", "p-independence in characteristic zero");
  // Monomials with exponents < p in the given elements must be K^p-independent;
  // via expansion roots this is a rank test over K.
  int s = (int)elems.size();
  std::vector<std::vector<int>> tuples;
  std::vector<int> cur(s, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == s) {
      tuples.push_back(cur);
      return;
    }
    for (int e = 0; e < (int)p; e++) {
      cur[i] = e;
      rec(i + 1);
    }
    cur[i] = 0;
  };
  rec(0);
  std::map<std::vector<int>, int> colindex;
  std::vector<std::vector<FElem>> M;  // rows per tuple, columns per basis monomial
  for (auto& t : tuples) {
    FElem v = one();
    for (int i = 0; i < s; i++)
      for (int e = 0; e < t[i]; e++) v = mul(v, elems[i]);
    auto ex = p_expand(v);
    std::vector<FElem> row;
    for (auto& [m, w] : ex) {
      auto it = colindex.find(m);
      if (it == colindex.end()) {
        it = colindex.emplace(m, (int)colindex.size()).first;
      }
      if ((int)row.size() <= it->second) row.resize(it->second + 1, zero());
      row[it->second] = w;
    }
    M.push_back(std::move(row));
  }
  size_t width = colindex.size();
  for (auto& r : M) r.resize(width, zero());
  FieldPtr self = shared_from_this();
  return linrank(self, M) == (int)tuples.size();
}

/* ---------------- enumeration / sampling ---------------- */

FElem Field::nth_element(uint64_t k) const {
  switch (kind) {
    case kQ: {
      // 0, 1, -1, 2, -2, ...
      int64_t z = (k + 1) / 2;
      if (k % 2 == 0) z = -z;
      return from_int(Int((long)z));
    }
    case kFp:
      return from_int(Int((long)(k % (uint64_t)p)));
    case kTrans: {
      uint64_t B = sub->is_finite() ? sub->size().get_ui() : 65536;
      UPoly c;
      uint64_t kk = k;
      do {
        c.push_back(sub->nth_element(kk % B));
        kk /= B;
      } while (kk > 0);
      upnorm(sub, c);
      return mk_frac(sub, std::move(c), {sub->one()});
    }
    case kAlgSep:
    case kAlgInsep: {
      uint64_t B = sub->is_finite() ? sub->size().get_ui() : 65536;
      int d = updeg(minpoly);
      UPoly c;
      uint64_t kk = k;
      for (int i = 0; i + 1 < d && kk > 0; i++) {
        c.push_back(sub->nth_element(kk % B));
        kk /= B;
      }
      if (kk > 0) c.push_back(sub->nth_element(kk));
      upnorm(sub, c);
      ResV rv;
      rv.c = std::move(c);
      return FElem(std::move(rv));
    }
    case kPerf: {
      PerfV pv;
      pv.a = {sub->nth_element(k)};
      FElem x(std::move(pv));
      return canon_perf(this, 0, std::get<PerfV>(x.v).a[0]);
    }
  }
  return zero();
}

FElem Field::random_element(std::mt19937_64& rng, int size_hint) const {
  switch (kind) {
    case kQ: {
      std::uniform_int_distribution<long> d(-5 * size_hint, 5 * size_hint);
      std::uniform_int_distribution<long> e(1, 3 * size_hint);
      Rat r(Int(d(rng)), Int(e(rng)));
      r.canonicalize();
      return FElem(r);
    }
    case kFp: {
      std::uniform_int_distribution<long> d(0, p - 1);
      return FElem(int64_t(d(rng)));
    }
    case kTrans: {
      std::uniform_int_distribution<int> dd(0, size_hint);
      auto rnd_poly = [&](int deg) {
        UPoly f;
        for (int i = 0; i <= deg; i++) f.push_back(sub->random_element(rng, size_hint));
        upnorm(sub, f);
        return f;
      };
      UPoly n = rnd_poly(dd(rng));
      UPoly d = rnd_poly(dd(rng));
      if (upis_zero(sub, d)) d = {sub->one()};
      return mk_frac(sub, std::move(n), std::move(d));
    }
    case kAlgSep:
    case kAlgInsep: {
      UPoly c;
      for (int i = 0; i < updeg(minpoly); i++) c.push_back(sub->random_element(rng, size_hint));
      upnorm(sub, c);
      ResV rv;
      rv.c = std::move(c);
      return FElem(std::move(rv));
    }
    case kPerf: {
      std::uniform_int_distribution<int> de(0, 1);
      return canon_perf(this, de(rng), sub->random_element(rng, size_hint));
    }
  }
  return zero();
}

/* ---------------- printing ---------------- */

static bool needs_paren(const std::string& s) {
  int depth = 0;
  for (size_t i = 0; i < s.size(); i++) {
    char c = s[i];
    if (c == '(') depth++;
    else if (c == ')') depth--;
    else if (depth == 0 && (c == '+' || (c == '-' && i > 0) || c == '/')) return true;
  }
  return false;
}

std::string upto_string_impl(const FieldPtr& K, const UPoly& f, const std::string& var) {
  if (updeg(f) < 0) return "0";
  std::string out;
  bool first = true;
  for (int i = updeg(f); i >= 0; i--) {
    if (K->is_zero(f[i])) continue;
    std::string cs = K->to_string(f[i]);
    bool neg = false;
    if (!needs_paren(cs) && cs.size() && cs[0] == '-') {
      neg = true;
      cs = cs.substr(1);
    }
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    std::string term;
    bool is1 = (cs == "1");
    if (i == 0) {
      term = needs_paren(cs) ? "(" + cs + ")" : cs;
    } else {
      std::string xs = var + (i > 1 ? "^" + std::to_string(i) : "");
      if (is1)
        term = xs;
      else
        term = (needs_paren(cs) ? "(" + cs + ")" : cs) + "*" + xs;
    }
    out += term;
  }
  return out;
}

std::string Field::to_string(const FElem& x) const {
  switch (kind) {
    case kQ:
      return std::get<Rat>(x.v).get_str();
    case kFp:
      return std::to_string(std::get<int64_t>(x.v));
    case kTrans: {
      auto& f = std::get<FracV>(x.v);
      std::string n = upto_string_impl(sub, f.num, gen);
      if (updeg(f.den) == 0 && sub->is_one(f.den[0])) return n;
      std::string d = upto_string_impl(sub, f.den, gen);
      return "(" + n + ")/(" + d + ")";
    }
    case kAlgSep:
    case kAlgInsep:
      return upto_string_impl(sub, std::get<ResV>(x.v).c, gen);
    case kPerf: {
      auto& pv = std::get<PerfV>(x.v);
      std::string a = sub->to_string(pv.a[0]);
      if (pv.e == 0) return a;
      return "frobinv^" + std::to_string(pv.e) + "(" + a + ")";
    }
  }
  return "?";
}

std::string Field::descriptor() const {
  switch (kind) {
    case kQ:
      return "q";
    case kFp:
      return "fp(" + std::to_string(p) + ")";
    case kTrans:
      return "transext(" + sub->descriptor() + ", \"" + gen + "\")";
    case kAlgSep:
      return "algext(" + sub->descriptor() + ", \"" +
             upto_string_impl(sub, minpoly, gen) + "\")";
    case kAlgInsep:
      return "insepext(" + sub->descriptor() + ", \"" + sub->to_string(insep_a) +
             "\", \"" + gen + "\")";
    case kPerf:
      return "perfclo(" + sub->descriptor() + ")";
  }
  return "?";
}

std::vector<std::pair<std::string, FieldPtr>> tower_generators(const FieldPtr& K) {
  std::vector<std::pair<std::string, FieldPtr>> out;
  if (K->sub) out = tower_generators(K->sub);
  if (K->kind == Field::kTrans || K->kind == Field::kAlgSep || K->kind == Field::kAlgInsep)
    out.push_back({K->gen, K});
  return out;
}

/* ---------------- parsing ---------------- */

namespace {

struct Lexer {
  std::string s;
  size_t i = 0;
  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      i++;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail("SchemaError", std::string("expected '") + c + "' in \"" + s + "\"");
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool ident(std::string& out) {
    skip();
    size_t j = i;
    while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) j++;
    if (j == i || std::isdigit((unsigned char)s[i])) return false;
    out = s.substr(i, j - i);
    i = j;
    return true;
  }
  bool number(Int& out) {
    skip();
    size_t j = i;
    while (j < s.size() && std::isdigit((unsigned char)s[j])) j++;
    if (j == i) return false;
    out = Int(s.substr(i, j - i));
    i = j;
    return true;
  }
  std::string quoted() {
    skip();
    expect('"');
    size_t j = s.find('"', i);
    if (j == std::string::npos) fail("SchemaError", "unterminated string");
    std::string r = s.substr(i, j - i);
    i = j + 1;
    return r;
  }
  bool done() {
    skip();
    return i >= s.size();
  }
};

// Expression evaluator for field elements: identifiers are tower generators;
// frobinv^e( ... ) applies the inverse Frobenius e times.
struct ElemParser {
  Lexer lx;
  FieldPtr K;
  std::vector<std::pair<std::string, FieldPtr>> gens;

  FElem lift(const FElem& x, const FieldPtr& from) const {
    // embed an element of `from` (a tower node of K) up into K
    std::vector<const Field*> chain;
    for (const Field* t = K.get(); t; t = t->sub.get()) {
      chain.push_back(t);
      if (t == from.get()) break;
    }
    if (chain.empty() || chain.back() != from.get())
      fail("SchemaError", "generator not part of the tower");
    FElem v = x;
    for (int idx = (int)chain.size() - 2; idx >= 0; idx--) v = chain[idx]->embed(v);
    return v;
  }

  FElem atom() {
    if (lx.eat('(')) {
      FElem v = expr();
      lx.expect(')');
      return v;
    }
    Int n;
    if (lx.number(n)) return K->from_int(n);
    std::string id;
    if (lx.ident(id)) {
      if (id == "frobinv") {
        int e = 1;
        if (lx.eat('^')) {
          Int en;
          if (!lx.number(en)) fail("SchemaError", "frobinv exponent");
          e = (int)en.get_si();
        }
        lx.expect('(');
        FElem v = expr();
        lx.expect(')');
        for (int t = 0; t < e; t++) v = K->frob_inv(v);
        return v;
      }
      for (auto& [name, f] : gens)
        if (name == id) return lift(f->generator(), f);
      fail("SchemaError", "unknown generator '" + id + "'");
    }
    fail("SchemaError", "cannot parse element near position " + std::to_string(lx.i));
  }

  FElem power() {
    FElem b = atom();
    if (lx.eat('^')) {
      Int n;
      bool negp = lx.eat('-');
      if (!lx.number(n)) fail("SchemaError", "exponent expected");
      return K->pow(b, negp ? Int(-n) : n);
    }
    return b;
  }

  FElem term() {
    FElem v = power();
    for (;;) {
      if (lx.eat('*'))
        v = K->mul(v, power());
      else if (lx.eat('/'))
        v = K->div(v, power());
      else
        break;
    }
    return v;
  }

  FElem expr() {
    bool neg0 = false;
    if (lx.eat('-')) neg0 = true;
    else lx.eat('+');
    FElem v = term();
    if (neg0) v = K->neg(v);
    for (;;) {
      if (lx.eat('+'))
        v = K->add(v, term());
      else if (lx.eat('-'))
        v = K->sub_(v, term());
      else
        break;
    }
    return v;
  }
};

// Parse a univariate polynomial string over K in the variable `var`
// (used by descriptor parsing for minimal polynomials).
UPoly parse_upoly_str(const FieldPtr& K, const std::string& s, const std::string& var);

FieldPtr parse_desc(Lexer& lx) {
  std::string id;
  if (!lx.ident(id)) fail("SchemaError", "field descriptor expected");
  if (id == "q") return Field::Q();
  if (id == "fp") {
    lx.expect('(');
    Int n;
    if (!lx.number(n)) fail("SchemaError", "prime expected");
    lx.expect(')');
    return Field::Fp(n.get_si());
  }
  if (id == "transext") {
    lx.expect('(');
    FieldPtr K = parse_desc(lx);
    lx.expect(',');
    std::string v = lx.quoted();
    lx.expect(')');
    return Field::trans(K, v);
  }
  if (id == "perfclo") {
    lx.expect('(');
    FieldPtr K = parse_desc(lx);
    lx.expect(')');
    return Field::perf(K);
  }
  if (id == "algext") {
    lx.expect('(');
    FieldPtr K = parse_desc(lx);
    lx.expect(',');
    std::string mp = lx.quoted();
    lx.expect(')');
    // the new generator is the unique identifier in mp that is not a tower generator
    auto gens = tower_generators(K);
    std::string gname;
    Lexer probe{mp, 0};
    while (!probe.done()) {
      std::string idp;
      if (probe.ident(idp)) {
        bool known = idp == "frobinv";
        for (auto& [n, f] : gens) known = known || n == idp;
        if (!known) {
          if (!gname.empty() && gname != idp)
            fail("SchemaError", "ambiguous generator name in minimal polynomial");
          gname = idp;
        }
      } else {
        probe.i++;
      }
    }
    if (gname.empty()) fail("SchemaError", "minimal polynomial must name the new generator");
    UPoly mpoly = parse_upoly_str(K, mp, gname);
    return Field::algext(K, gname, mpoly);
  }
  if (id == "insepext") {
    lx.expect('(');
    FieldPtr K = parse_desc(lx);
    lx.expect(',');
    std::string a = lx.quoted();
    lx.expect(',');
    std::string g = lx.quoted();
    lx.expect(')');
    return Field::alginsep(K, g, K->parse_element(a));
  }
  fail("SchemaError", "unknown field constructor '" + id + "'");
}

// Evaluate a polynomial-in-`var` expression by symbolic Horner over K[var]:
// parse as an element of K(var) via a temporary transcendental node, then
// read off numerator coefficients (denominator must be 1).
UPoly parse_upoly_str(const FieldPtr& K, const std::string& s, const std::string& var) {
  FieldPtr Kt = Field::trans(K, var);
  ElemParser ep;
  ep.lx = Lexer{s, 0};
  ep.K = Kt;
  ep.gens = tower_generators(Kt);
  FElem v = ep.expr();
  if (!ep.lx.done()) fail("SchemaError", "trailing input in polynomial \"" + s + "\"");
  auto& fr = std::get<FracV>(v.v);
  if (updeg(fr.den) != 0)
    fail("SchemaError", "polynomial expected, got a genuine fraction");
  FElem ic = K->inv(fr.den[0]);
  UPoly out = upscale(K, ic, fr.num);
  return out;
}

}  // namespace

FieldPtr Field::parse_descriptor(const std::string& s) {
  Lexer lx{s, 0};
  FieldPtr K = parse_desc(lx);
  if (!lx.done()) fail("SchemaError", "trailing input in field descriptor");
  return K;
}

FElem Field::parse_element(const std::string& s) const {
  ElemParser ep;
  ep.lx = Lexer{s, 0};
  ep.K = shared_from_this();
  ep.gens = tower_generators(ep.K);
  FElem v = ep.expr();
  if (!ep.lx.done()) fail("SchemaError", "trailing input in element \"" + s + "\"");
  return v;
}

}  // namespace effalg
