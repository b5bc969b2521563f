#include "effalg/factor.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "effalg/upoly.hpp"

namespace effalg {
namespace {

/* ---------------- small helpers ---------------- */

int upoly_cmp(const UPoly& a, const UPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (int i = (int)a.size() - 1; i >= 0; i--) {
    int c = felem_cmp(a[i], b[i]);
    if (c) return c;
  }
  return 0;
}

UPoly embed_poly(const FieldPtr& K, const UPoly& q) {
  UPoly r;
  r.reserve(q.size());
  for (auto& c : q) r.push_back(K->embed(c));
  return r;
}

/// f(x^k)
UPoly inflate(const FieldPtr& K, const UPoly& f, long k) {
  if (f.empty()) return {};
  UPoly r((f.size() - 1) * k + 1, K->zero());
  for (size_t i = 0; i < f.size(); i++) r[i * k] = f[i];
  return r;
}

/// inverse of inflate; requires that only exponents divisible by k occur
UPoly deflate(const FieldPtr& K, const UPoly& f, long k) {
  UPoly r((f.size() + k - 1) / k, K->zero());
  for (size_t i = 0; i < f.size(); i++) {
    if (K->is_zero(f[i])) continue;
    if (i % k != 0) fail("Internal", "deflate: stray exponent");
    r[i / k] = f[i];
  }
  upnorm(K, r);
  return r;
}

/// element of K known to lie in the base field, as a base-field element
FElem descend(const FieldPtr& K, const FElem& c) {
  switch (K->kind) {
    case Field::kTrans: {
      const FracV& fr = std::get<FracV>(c.v);
      if (updeg(fr.den) != 0 || updeg(fr.num) > 0)
        fail("Internal", "descend: element not in base field");
      return fr.num.empty() ? K->sub->zero() : fr.num[0];
    }
    case Field::kAlgSep:
    case Field::kAlgInsep: {
      const UPoly& cs = std::get<ResV>(c.v).c;
      if (updeg(cs) > 0) fail("Internal", "descend: element not in base field");
      return cs.empty() ? K->sub->zero() : cs[0];
    }
    case Field::kPerf: {
      const PerfV& pv = std::get<PerfV>(c.v);
      if (pv.e != 0) fail("Internal", "descend: element not in base field");
      return pv.a[0];
    }
    default:
      fail("Internal", "descend: field has no proper base");
  }
}

std::vector<UPoly> factor_sf(const FieldPtr& K, const UPoly& f, uint64_t seed);

/* ---------------- finite fields: distinct/equal degree ---------------- */

UPoly random_poly_below(const FieldPtr& K, int deg, std::mt19937_64& rng) {
  UPoly a;
  for (int i = 0; i < deg; i++) a.push_back(K->random_element(rng));
  upnorm(K, a);
  return a;
}

void edf(const FieldPtr& K, const UPoly& g, int d, std::mt19937_64& rng,
         std::vector<UPoly>& out) {
  if (updeg(g) == d) {
    out.push_back(g);
    return;
  }
  Int q = K->size();
  Int qd;
  mpz_pow_ui(qd.get_mpz_t(), q.get_mpz_t(), d);
  bool even = (K->characteristic() == 2);
  size_t m2 = even ? mpz_sizeinbase(q.get_mpz_t(), 2) - 1 : 0;
  while (true) {
    UPoly a = random_poly_below(K, updeg(g), rng);
    if (updeg(a) < 1) continue;
    UPoly split;
    if (!even) {
      Int e = (qd - 1) / 2;
      UPoly b = uppowmod(K, a, e, g);
      split = upgcd(K, g, upsub(K, b, {K->one()}));
    } else {
      UPoly tr = a, cur = a;
      for (size_t i = 1; i < m2 * (size_t)d; i++) {
        cur = upmod(K, upmul(K, cur, cur), g);
        tr = upadd(K, tr, cur);
      }
      split = upgcd(K, g, tr);
    }
    if (updeg(split) > 0 && updeg(split) < updeg(g)) {
      edf(K, split, d, rng, out);
      edf(K, updivrem(K, g, split, nullptr), d, rng, out);
      return;
    }
  }
}

std::vector<UPoly> factor_sf_finite(const FieldPtr& K, const UPoly& f,
                                    std::mt19937_64& rng) {
  std::vector<UPoly> out;
  Int q = K->size();
  UPoly v = f;
  UPoly h = upmod(K, upx(K), v);
  int d = 0;
  while (2 * (d + 1) <= updeg(v)) {
    d++;
    h = uppowmod(K, h, q, v);
    UPoly g = upgcd(K, v, upsub(K, h, upx(K)));
    if (updeg(g) > 0) {
      edf(K, g, d, rng, out);
      v = updivrem(K, v, g, nullptr);
      h = upmod(K, h, v);
    }
  }
  if (updeg(v) > 0) out.push_back(v);
  return out;
}

/* ---------------- rationals: lift modulo a good prime ---------------- */

using ZP = std::vector<Int>;

void znorm(ZP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ZP zmul(const ZP& a, const ZP& b) {
  if (a.empty() || b.empty()) return {};
  ZP r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); i++)
    for (size_t j = 0; j < b.size(); j++) r[i + j] += a[i] * b[j];
  znorm(r);
  return r;
}

void zreduce(ZP& a, const Int& m) {
  for (auto& c : a) {
    c %= m;
    if (c < 0) c += m;
  }
  znorm(a);
}

ZP zmulm(const ZP& a, const ZP& b, const Int& m) {
  ZP r = zmul(a, b);
  zreduce(r, m);
  return r;
}

ZP zaddm(const ZP& a, const ZP& b, const Int& m) {
  ZP r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); i++) r[i] = a[i];
  for (size_t i = 0; i < b.size(); i++) r[i] += b[i];
  zreduce(r, m);
  return r;
}

ZP zsubm(const ZP& a, const ZP& b, const Int& m) {
  ZP r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); i++) r[i] = a[i];
  for (size_t i = 0; i < b.size(); i++) r[i] -= b[i];
  zreduce(r, m);
  return r;
}

/// division by a monic divisor; over ℤ when m = 0, otherwise mod m
void zdivrem_monic(const ZP& a, const ZP& b, ZP* qo, ZP* ro, const Int& m) {
  ZP r = a, q;
  int db = (int)b.size() - 1;
  while ((int)r.size() - 1 >= db) {
    int k = (int)r.size() - 1 - db;
    Int c = r.back();
    if ((int)q.size() <= k) q.resize(k + 1, Int(0));
    q[k] += c;
    for (int i = 0; i <= db; i++) r[i + k] -= c * b[i];
    znorm(r);
    if (m != 0) zreduce(r, m);
  }
  if (m != 0) zreduce(q, m);
  znorm(q);
  if (qo) *qo = q;
  if (ro) *ro = r;
}

ZP zsym(const ZP& a, const Int& m) {
  ZP r = a;
  Int half = m / 2;
  for (auto& c : r) {
    c %= m;
    if (c < 0) c += m;
    if (c > half) c -= m;
  }
  znorm(r);
  return r;
}

struct HenselCtx {
  Int p;
  Int mod;
  FieldPtr Fp;
};

UPoly zp_to_up(const FieldPtr& Fp, const ZP& a) {
  UPoly r;
  for (auto& c : a) r.push_back(Fp->from_int(c));
  upnorm(Fp, r);
  return r;
}

ZP up_to_zp(const UPoly& a) {
  ZP r;
  for (auto& c : a) r.push_back(Int(std::get<int64_t>(c.v)));
  znorm(r);
  return r;
}

/// one quadratic step: from f ≡ g·h, s·g + t·h ≡ 1 (mod m) to the same mod m²
void hensel_step(const ZP& f, ZP& g, ZP& h, ZP& s, ZP& t, const Int& m) {
  Int m2 = m * m;
  ZP e = zsubm(f, zmul(g, h), m2);
  ZP q, r;
  zdivrem_monic(zmulm(s, e, m2), h, &q, &r, m2);
  ZP gs = zaddm(zaddm(g, zmulm(t, e, m2), m2), zmulm(q, g, m2), m2);
  ZP hs = zaddm(h, r, m2);
  ZP b = zsubm(zaddm(zmul(s, gs), zmul(t, hs), m2), ZP{Int(1)}, m2);
  ZP c, d;
  zdivrem_monic(zmulm(s, b, m2), hs, &c, &d, m2);
  ZP ss = zsubm(s, d, m2);
  ZP ts = zsubm(zsubm(t, zmulm(t, b, m2), m2), zmulm(c, gs, m2), m2);
  g = gs;
  h = hs;
  s = ss;
  t = ts;
}

void lift_tree(const HenselCtx& ctx, const ZP& F, const std::vector<ZP>& facs, int lo,
               int hi, std::vector<ZP>& lifted) {
  if (hi - lo == 1) {
    lifted[lo] = F;
    return;
  }
  int mid = (lo + hi) / 2;
  ZP A{Int(1)}, B{Int(1)};
  for (int i = lo; i < mid; i++) A = zmulm(A, facs[i], ctx.p);
  for (int i = mid; i < hi; i++) B = zmulm(B, facs[i], ctx.p);
  UPoly su, tu;
  UPoly g = upxgcd(ctx.Fp, zp_to_up(ctx.Fp, A), zp_to_up(ctx.Fp, B), &su, &tu);
  FElem ig = ctx.Fp->inv(g[0]);
  ZP S = up_to_zp(upscale(ctx.Fp, ig, su));
  ZP T = up_to_zp(upscale(ctx.Fp, ig, tu));
  Int m = ctx.p;
  while (m < ctx.mod) {
    hensel_step(F, A, B, S, T, m);
    m = m * m;
  }
  lift_tree(ctx, A, facs, lo, mid, lifted);
  lift_tree(ctx, B, facs, mid, hi, lifted);
}

std::vector<UPoly> factor_sf_q(const FieldPtr& K, const UPoly& f, uint64_t seed) {
  int n = updeg(f);
  Int l(1);
  for (auto& c : f) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), std::get<Rat>(c.v).get_den().get_mpz_t());
  ZP M(n + 1, Int(0));
  Int lp(1);
  for (int i = n; i >= 0; i--) {
    Rat r = std::get<Rat>(f[i].v) * Rat(lp);
    if (r.get_den() != 1) fail("Internal", "denominator not cleared");
    M[i] = r.get_num();
    lp *= l;
  }
  Int pr(2);
  FieldPtr Fp;
  UPoly fbar;
  while (true) {
    mpz_nextprime(pr.get_mpz_t(), pr.get_mpz_t());
    Fp = Field::Fp(pr.get_si());
    fbar = zp_to_up(Fp, M);
    if (updeg(fbar) != n) continue;
    UPoly d = upderiv(Fp, fbar);
    if (!d.empty() && updeg(upgcd(Fp, fbar, d)) == 0) break;
  }
  std::mt19937_64 rng(seed);
  std::vector<UPoly> fp_facs = factor_sf_finite(Fp, fbar, rng);
  std::sort(fp_facs.begin(), fp_facs.end(),
            [](const UPoly& a, const UPoly& b) { return upoly_cmp(a, b) < 0; });
  std::vector<UPoly> out;
  if (fp_facs.size() == 1) {
    out.push_back(f);
    return out;
  }
  Int n2(0);
  for (auto& c : M) n2 += c * c;
  Int b;
  mpz_sqrt(b.get_mpz_t(), n2.get_mpz_t());
  Int bound = (b + 1) << n;
  Int target = 2 * bound + 1;
  HenselCtx ctx;
  ctx.p = pr;
  ctx.Fp = Fp;
  ctx.mod = pr;
  while (ctx.mod < target) ctx.mod = ctx.mod * ctx.mod;
  std::vector<ZP> facs;
  for (auto& g : fp_facs) facs.push_back(up_to_zp(g));
  std::vector<ZP> lifted(facs.size());
  ZP Mmod = M;
  zreduce(Mmod, ctx.mod);
  lift_tree(ctx, Mmod, facs, 0, (int)facs.size(), lifted);

  std::vector<ZP> found;
  ZP Mcur = M;
  std::vector<ZP> pool = lifted;
  int s = 1;
  while (2 * s <= (int)pool.size()) {
    std::vector<int> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    bool extracted = false;
    while (true) {
      ZP h{Int(1)};
      for (int i : idx) h = zmulm(h, pool[i], ctx.mod);
      h = zsym(h, ctx.mod);
      ZP q, r;
      zdivrem_monic(Mcur, h, &q, &r, Int(0));
      if (r.empty()) {
        found.push_back(h);
        Mcur = q;
        for (int j = s - 1; j >= 0; j--) pool.erase(pool.begin() + idx[j]);
        extracted = true;
        break;
      }
      int j = s - 1;
      while (j >= 0 && idx[j] == (int)pool.size() - s + j) j--;
      if (j < 0) break;
      idx[j]++;
      for (int k2 = j + 1; k2 < s; k2++) idx[k2] = idx[k2 - 1] + 1;
    }
    if (!extracted) s++;
  }
  if ((int)Mcur.size() - 1 >= 1) found.push_back(Mcur);
  for (auto& h : found) {
    int dh = (int)h.size() - 1;
    UPoly g;
    Int lj(1);
    std::vector<Int> lpow(dh + 1);
    for (int j = dh; j >= 0; j--) {
      lpow[j] = lj;
      lj *= l;
    }
    for (int j = 0; j <= dh; j++) {
      Rat c(h[j]);
      c /= Rat(lpow[j]);
      g.push_back(FElem(c));
    }
    out.push_back(g);
  }
  return out;
}

/* ---------------- rational function fields: exponent packing ---------------- */

/// polynomial over the base as an element of K = base(T)
FElem poly_elem(const FieldPtr& K, const UPoly& P) {
  return upeval(K, embed_poly(K, P), K->generator());
}

std::vector<UPoly> factor_sf_trans(const FieldPtr& K, const UPoly& f, uint64_t seed) {
  const FieldPtr& K0 = K->sub;
  int d = updeg(f);
  UPoly D = {K0->one()};
  for (auto& c : f) {
    const UPoly& den = std::get<FracV>(c.v).den;
    UPoly g = upgcd(K0, D, den);
    D = upmul(K0, D, updivrem(K0, den, g, nullptr));
  }
  bool scaled = updeg(D) > 0;
  FElem De = poly_elem(K, D);
  UPoly ft = f;
  if (scaled) {
    for (int i = 0; i <= d; i++) ft[i] = K->mul(ft[i], K->pow(De, Int(d - i)));
  }
  long N = d + 1;
  std::vector<UPoly> num(d + 1);
  long e = 0;
  for (int i = 0; i <= d; i++) {
    const FracV& fr = std::get<FracV>(ft[i].v);
    if (updeg(fr.den) != 0) fail("Internal", "denominator not cleared");
    num[i] = fr.num;
    e = std::max(e, (long)updeg(num[i]));
  }
  UPoly F(d + e * N + 1, K0->zero());
  for (int i = 0; i <= d; i++)
    for (int j = 0; j <= updeg(num[i]); j++)
      F[i + j * N] = K0->add(F[i + j * N], num[i][j]);
  upnorm(K0, F);
  UFactor Ff = factor_upoly(K0, F, seed);
  std::vector<UPoly> pool;
  for (auto& [g, m] : Ff.factors)
    for (int i = 0; i < m; i++) pool.push_back(g);

  auto unpack = [&](const UPoly& G) -> UPoly {
    std::vector<UPoly> coeff(d + 1);
    for (int w = 0; w <= updeg(G); w++) {
      if (K0->is_zero(G[w])) continue;
      long i = w % N, j = w / N;
      if ((long)coeff[i].size() <= j) coeff[i].resize(j + 1, K0->zero());
      coeff[i][j] = G[w];
    }
    UPoly g;
    for (int i = 0; i <= d; i++) {
      upnorm(K0, coeff[i]);
      g.push_back(poly_elem(K, coeff[i]));
    }
    upnorm(K, g);
    return g;
  };

  std::vector<UPoly> out;
  UPoly remaining = ft;
  int s = 1;
  while (2 * s <= (int)pool.size()) {
    std::vector<int> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    bool extracted = false;
    while (true) {
      UPoly G = {K0->one()};
      for (int i : idx) G = upmul(K0, G, pool[i]);
      UPoly g = unpack(G);
      if (updeg(g) >= 1) {
        g = upmonic(K, g);
        UPoly rem;
        UPoly quo = updivrem(K, remaining, g, &rem);
        if (rem.empty()) {
          out.push_back(g);
          remaining = quo;
          for (int j = s - 1; j >= 0; j--) pool.erase(pool.begin() + idx[j]);
          extracted = true;
          break;
        }
      }
      int j = s - 1;
      while (j >= 0 && idx[j] == (int)pool.size() - s + j) j--;
      if (j < 0) break;
      idx[j]++;
      for (int k2 = j + 1; k2 < s; k2++) idx[k2] = idx[k2 - 1] + 1;
    }
    if (!extracted) s++;
  }
  if (updeg(remaining) >= 1) out.push_back(remaining);
  if (scaled) {
    UPoly Dx = {K->zero(), De};
    for (auto& g : out) g = upmonic(K, upcompose(K, g, Dx));
  }
  return out;
}

/* ---------------- separable extensions: norm to the base ---------------- */

UPoly lagrange_interp(const FieldPtr& K, const std::vector<FElem>& pts,
                      const std::vector<FElem>& vals) {
  UPoly M = {K->one()};
  for (auto& t : pts) M = upmul(K, M, UPoly{K->neg(t), K->one()});
  UPoly res;
  for (size_t k = 0; k < pts.size(); k++) {
    UPoly Lk = updivrem(K, M, UPoly{K->neg(pts[k]), K->one()}, nullptr);
    FElem c = K->div(vals[k], upeval(K, Lk, pts[k]));
    res = upadd(K, res, upscale(K, c, Lk));
  }
  return res;
}

std::vector<UPoly> factor_sf_algsep(const FieldPtr& K, const UPoly& f, uint64_t seed) {
  const FieldPtr& K0 = K->sub;
  const UPoly& m = K->minpoly;
  int nm = updeg(m);
  int D = nm * updeg(f);
  std::vector<FElem> pts;
  for (int k = 0; k <= D; k++) pts.push_back(K0->nth_element(k));
  FElem alpha = K->generator();
  UPoly fs, ns;
  FElem s_used;
  for (uint64_t j = 0;; j++) {
    FElem s = (j == 0) ? K0->zero() : K0->nth_element(j);
    FElem sa = K->mul(K->embed(s), alpha);
    fs = upcompose(K, f, UPoly{K->neg(sa), K->one()});
    std::vector<UPoly> C(nm);
    for (int i = 0; i <= updeg(fs); i++) {
      const UPoly& cs = std::get<ResV>(fs[i].v).c;
      for (int r = 0; r <= updeg(cs); r++) {
        if ((int)C[r].size() <= i) C[r].resize(i + 1, K0->zero());
        C[r][i] = cs[r];
      }
    }
    for (auto& Cr : C) upnorm(K0, Cr);
    std::vector<FElem> vals;
    for (auto& t : pts) {
      UPoly Py;
      for (int r = 0; r < nm; r++) Py.push_back(upeval(K0, C[r], t));
      upnorm(K0, Py);
      vals.push_back(upresultant(K0, m, Py));
    }
    ns = lagrange_interp(K0, pts, vals);
    UPoly dns = upderiv(K0, ns);
    if (!dns.empty() && updeg(upgcd(K0, ns, dns)) == 0) {
      s_used = s;
      break;
    }
  }
  std::vector<UPoly> facs0 = factor_sf(K0, upmonic(K0, ns), seed);
  std::vector<UPoly> out;
  FElem sa = K->mul(K->embed(s_used), alpha);
  UPoly back{sa, K->one()};
  for (auto& q : facs0) {
    UPoly h = upgcd(K, fs, embed_poly(K, q));
    if (updeg(h) < 1) fail("Internal", "norm factor with trivial gcd");
    out.push_back(upmonic(K, upcompose(K, h, back)));
  }
  return out;
}

/* ---------------- purely inseparable and perfect-closure steps ---------------- */

std::vector<UPoly> lift_distinct_power(const FieldPtr& K, const UPoly& f,
                                       const UPoly& g_base, long pe, uint64_t seed) {
  // g_base lives over K->sub, is separable squarefree, and satisfies
  // f(x)^{pe} = g_base(x^{pe}); each factor of g_base pulls back to exactly
  // one irreducible factor of f via a gcd.
  std::vector<UPoly> facs = factor_sf(K->sub, g_base, seed);
  std::vector<UPoly> out;
  UPoly check = {K->one()};
  for (auto& q : facs) {
    UPoly qe(updeg(q) * pe + 1, K->zero());
    for (int i = 0; i <= updeg(q); i++) qe[i * pe] = K->embed(q[i]);
    UPoly fk = upgcd(K, f, qe);
    if (updeg(fk) >= 1) {
      out.push_back(fk);
      check = upmul(K, check, fk);
    }
  }
  if (!upeq(K, check, f)) fail("Internal", "inseparable descent incomplete");
  return out;
}

std::vector<UPoly> factor_sf_insep(const FieldPtr& K, const UPoly& f, uint64_t seed) {
  long p = K->p;
  UPoly g;
  for (auto& c : f) g.push_back(descend(K, K->pow(c, Int(p))));
  upnorm(K->sub, g);
  return lift_distinct_power(K, f, g, p, seed);
}

std::vector<UPoly> factor_sf_perf(const FieldPtr& K, const UPoly& f, uint64_t seed) {
  int E = 0;
  for (auto& c : f) E = std::max(E, std::get<PerfV>(c.v).e);
  UPoly g;
  for (auto& c : f) g.push_back(descend(K, K->frob_pow(c, E)));
  upnorm(K->sub, g);
  long pe = 1;
  for (int i = 0; i < E; i++) pe *= K->p;
  return lift_distinct_power(K, f, g, pe, seed);
}

/* ---------------- dispatch on tower constructor ---------------- */

/// f monic separable squarefree of degree >= 1
std::vector<UPoly> factor_sf(const FieldPtr& K, const UPoly& f, uint64_t seed) {
  if (updeg(f) == 1) return {f};
  if (K->is_finite()) {
    std::mt19937_64 rng(seed);
    return factor_sf_finite(K, f, rng);
  }
  switch (K->kind) {
    case Field::kQ:
      return factor_sf_q(K, f, seed);
    case Field::kTrans:
      return factor_sf_trans(K, f, seed);
    case Field::kAlgSep:
      return factor_sf_algsep(K, f, seed);
    case Field::kAlgInsep:
      return factor_sf_insep(K, f, seed);
    case Field::kPerf:
      return factor_sf_perf(K, f, seed);
    default:
      fail("Internal", "unreachable factor dispatch");
  }
}

bool coeff_roots(const FieldPtr& K, const UPoly& f, UPoly& root) {
  root.clear();
  for (auto& c : f) {
    FElem r;
    if (!K->pth_root(r, c)) return false;
    root.push_back(r);
  }
  upnorm(K, root);
  return true;
}

void factor_monic(const FieldPtr& K, UPoly f, uint64_t seed,
                  std::vector<std::pair<UPoly, int>>& out, int scale) {
  if (updeg(f) < 1) return;
  UPoly fp = upderiv(K, f);
  if (!fp.empty()) {
    UPoly g = upgcd(K, f, fp);
    UPoly w = updivrem(K, f, g, nullptr);
    for (auto& q : factor_sf(K, w, seed)) {
      int mlt = 0;
      while (true) {
        UPoly rem;
        UPoly quo = updivrem(K, f, q, &rem);
        if (!rem.empty()) break;
        f = quo;
        mlt++;
      }
      out.push_back({q, mlt * scale});
    }
    if (updeg(f) < 1) return;
  }
  if (K->characteristic() == 0) fail("Internal", "nontrivial residue in char 0");
  long p = K->p;
  UPoly h = deflate(K, f, p);
  UPoly r;
  if (coeff_roots(K, h, r)) {
    factor_monic(K, r, seed, out, scale * (int)p);
    return;
  }
  std::vector<std::pair<UPoly, int>> tmp;
  factor_monic(K, h, seed, tmp, 1);
  for (auto& [q, m] : tmp) {
    UPoly rq;
    if (coeff_roots(K, q, rq))
      out.push_back({rq, (int)p * m * scale});
    else
      out.push_back({inflate(K, q, p), m * scale});
  }
}

}  // namespace

UFactor factor_upoly(const FieldPtr& K, const UPoly& f, uint64_t seed) {
  UPoly g = f;
  upnorm(K, g);
  if (g.empty()) fail("ZeroPolynomial", "cannot factor the zero polynomial");
  UFactor out;
  out.unit = g.back();
  if (updeg(g) == 0) return out;
  factor_monic(K, upmonic(K, g), seed, out.factors, 1);
  std::sort(out.factors.begin(), out.factors.end(),
            [](const std::pair<UPoly, int>& a, const std::pair<UPoly, int>& b) {
              return upoly_cmp(a.first, b.first) < 0;
            });
  std::vector<std::pair<UPoly, int>> merged;
  for (auto& fm : out.factors) {
    if (!merged.empty() && upoly_cmp(merged.back().first, fm.first) == 0)
      merged.back().second += fm.second;
    else
      merged.push_back(fm);
  }
  out.factors = std::move(merged);
  return out;
}

std::vector<std::pair<UPoly, int>> squarefree_decomp(const FieldPtr& K, const UPoly& f) {
  UFactor u = factor_upoly(K, f);
  std::map<int, UPoly> parts;
  for (auto& [g, m] : u.factors) {
    auto it = parts.find(m);
    if (it == parts.end())
      parts.emplace(m, g);
    else
      it->second = upmul(K, it->second, g);
  }
  std::vector<std::pair<UPoly, int>> out;
  for (auto& [m, g] : parts) out.push_back({g, m});
  return out;
}

UPoly squarefree_part(const FieldPtr& K, const UPoly& f) {
  UFactor u = factor_upoly(K, f);
  UPoly r = {K->one()};
  for (auto& [g, m] : u.factors) r = upmul(K, r, g);
  return r;
}

bool is_irreducible(const FieldPtr& K, const UPoly& f, uint64_t seed) {
  UPoly g = f;
  upnorm(K, g);
  if (updeg(g) < 1) return false;
  if (updeg(g) == 1) return true;
  UFactor u = factor_upoly(K, g, seed);
  return u.factors.size() == 1 && u.factors[0].second == 1;
}

std::vector<FElem> roots_in_field(const FieldPtr& K, const UPoly& f, uint64_t seed) {
  UFactor u = factor_upoly(K, f, seed);
  std::vector<FElem> out;
  for (auto& [g, m] : u.factors)
    if (updeg(g) == 1) out.push_back(K->neg(g[0]));
  return out;
}

}  // namespace effalg
