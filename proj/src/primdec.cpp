#include <algorithm>
#include <string>
#include <utility>

#include "effalg/factor.hpp"
#include "effalg/modules.hpp"
#include "effalg/upoly.hpp"
#include "localize.hpp"

namespace effalg {

namespace {

Ideal reduced_basis(const RingPtr& S, const Ideal& I) {
  GB gb = groebner_ideal(S, I);
  Ideal out;
  for (const MVec& r : gb.basis) out.push_back(r[0]);
  return out;
}

bool basis_is_unit(const Ideal& Ired) {
  for (const MPoly& f : Ired)
    if (mp_total_deg(f) == 0) return true;
  return false;
}

/// g(ℓ) by Horner
MPoly up_apply(const RingPtr& S, const UPoly& g, const MPoly& ell) {
  MPoly acc;
  for (int k = (int)g.size() - 1; k >= 0; k--) {
    acc = mp_mul(S, acc, ell);
    if (!S->K->is_zero(g[k])) acc = mp_add(S, acc, mp_const(S, g[k]));
  }
  return acc;
}

/// generator of I ∩ k[x_j] (nonzero in the zero-dimensional case)
UPoly eliminant(const RingPtr& S, const Ideal& I, int j) {
  RingPtr Ox;
  Ideal e = eliminate(S, I, {j}, &Ox);
  if (e.empty()) fail("Internal", "ideal is not zero-dimensional");
  return mp_to_upoly(Ox, e[0], 0);
}

/// minimal polynomial of ℓ modulo I, via a graph variable
UPoly minpoly_of(const RingPtr& S, const Ideal& I, const MPoly& ell) {
  int n = S->nvars();
  std::string zn = "@z";
  while (S->var_index(zn) >= 0) zn += "_";
  std::vector<std::string> names = S->vars;
  names.push_back(zn);
  RingPtr S2 = PolyRing::make(S->K, names);
  std::vector<MPoly> img(n);
  for (int j = 0; j < n; j++) img[j] = mp_var(S2, j);
  Ideal J2;
  for (const MPoly& f : I) J2.push_back(mp_map(S, f, S2, img));
  J2.push_back(mp_sub(S2, mp_var(S2, n), mp_map(S, ell, S2, img)));
  RingPtr Oz;
  Ideal e = eliminate(S2, J2, {n}, &Oz);
  if (e.empty()) fail("Internal", "element has no minimal polynomial");
  return mp_to_upoly(Oz, e[0], 0);
}

/// smallest E with f^E ∈ I (gb is a basis of I)
int nilpotency_power(const RingPtr& S, const GB& gb, const MPoly& f) {
  MPoly t = nf_ideal(S, gb, f);
  int E = 1;
  while (!mp_is_zero(t)) {
    if (++E > 200) fail("Internal", "nilpotency power runaway");
    t = nf_ideal(S, gb, mp_mul(S, t, f));
  }
  return E;
}

/// deterministic linear forms with ≥ 2 supporting variables
std::vector<MPoly> splitting_candidates(const RingPtr& S, int cap) {
  std::vector<MPoly> out;
  int n = S->nvars();
  if (n < 2) return out;
  for (int B = 1; B <= 4 && (int)out.size() < cap; B++) {
    std::vector<int> c(n, 0);
    while (true) {
      int mx = *std::max_element(c.begin(), c.end());
      if (mx == B) {
        MPoly ell;
        for (int j = 0; j < n; j++) {
          if (c[j] == 0) continue;
          ell = mp_add(S, ell,
                       mp_scale(S, S->K->from_int(Int(c[j])), mp_var(S, j)));
        }
        if ((int)ell.size() >= 2) {
          out.push_back(ell);
          if ((int)out.size() >= cap) break;
        }
      }
      int j = 0;
      while (j < n && c[j] == B) c[j++] = 0;
      if (j == n) break;
      c[j]++;
    }
  }
  return out;
}

struct ZComp {
  Ideal primary, prime;
};

/// primary decomposition of a zero-dimensional ideal: CRT splits along
/// factored eliminants, then Seidenberg radical + maximality certificate,
/// then splitting elements
std::vector<ZComp> zd_primdec(const RingPtr& S, const Ideal& I0) {
  GB gbI = groebner_ideal(S, I0);
  Ideal I;
  for (const MVec& r : gbI.basis) I.push_back(r[0]);
  if (basis_is_unit(I)) return {};
  int n = S->nvars();
  if (n == 0) return {ZComp{I, I}};
  if (I.empty()) fail("Internal", "ideal is not zero-dimensional");

  const FieldPtr& K = S->K;
  std::vector<UFactor> fac(n);
  for (int j = 0; j < n; j++) fac[j] = factor_upoly(K, eliminant(S, I, j));

  for (int j = 0; j < n; j++) {
    if (fac[j].factors.size() < 2) continue;
    std::vector<ZComp> out;
    for (const auto& fa : fac[j].factors) {
      Ideal J = I;
      J.push_back(mp_pow(S, mp_from_upoly(S, fa.first, j), fa.second));
      auto sub = zd_primdec(S, J);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }

  Ideal radgens = I;
  bool needRad = false;
  for (int j = 0; j < n; j++) {
    const UPoly& f = fac[j].factors[0].first;
    if (upis_zero(K, upderiv(K, f)))
      fail("UsageError",
           "inseparable residue field encountered in primary decomposition");
    if (fac[j].factors[0].second > 1) {
      radgens.push_back(mp_from_upoly(S, f, j));
      needRad = true;
    }
  }
  Ideal rad = needRad ? reduced_basis(S, radgens) : I;

  bool isPrime = true;
  try {
    extend_field_maximal(S, rad, nullptr);
  } catch (const EffError& e) {
    if (e.code != "ReduciblePolynomial") throw;
    isPrime = false;
  }
  if (isPrime) return {ZComp{I, rad}};

  for (const MPoly& ell : splitting_candidates(S, 500)) {
    UFactor mf = factor_upoly(K, minpoly_of(S, rad, ell));
    if (mf.factors.size() < 2) continue;
    MPoly prod = mp_from_int(S, 1);
    for (const auto& ga : mf.factors) prod = mp_mul(S, prod, up_apply(S, ga.first, ell));
    int E = nilpotency_power(S, gbI, prod);
    std::vector<ZComp> out;
    for (const auto& ga : mf.factors) {
      Ideal J = I;
      J.push_back(mp_pow(S, up_apply(S, ga.first, ell), E));
      auto sub = zd_primdec(S, J);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  fail("Internal", "no splitting element found");
}

/// {f ∈ S : f ∈ J·k(U)[W]} for J given by a reduced monic basis over k(U)
Ideal contract_ideal(const LocalRing& L, const Ideal& Jloc) {
  const RingPtr& S = L.S;
  Ideal gens;
  std::vector<MPoly> dens;
  for (const MPoly& g : Jloc) {
    MPoly den;
    MPoly u = L.unfrac(g, &den);
    if (!mp_is_zero(u)) gens.push_back(u);
    if (mp_total_deg(den) > 0) {
      bool seen = false;
      for (const MPoly& d2 : dens)
        if (mp_eq(S, d2, den)) seen = true;
      if (!seen) dens.push_back(den);
    }
  }
  if (dens.empty()) return reduced_basis(S, gens);
  MPoly h = mp_from_int(S, 1);
  for (const MPoly& d2 : dens) h = mp_mul(S, h, d2);
  return reduced_basis(S, ideal_saturate(S, gens, {h}));
}

/// product of the distinct k(U)-leading coefficients of a [W ≫ U] basis,
/// so that I·k(U)[W] ∩ S = I : h^∞
MPoly blocked_h(const RingPtr& S, const Ideal& I, const std::vector<int>& U) {
  int n = S->nvars();
  std::vector<int> W;
  for (int j = 0; j < n; j++)
    if (std::find(U.begin(), U.end(), j) == U.end()) W.push_back(j);
  std::vector<std::string> names;
  for (int w : W) names.push_back(S->vars[w]);
  for (int u : U) names.push_back(S->vars[u]);
  RingPtr Bk = PolyRing::make(S->K, names, MOrder{OrdKind::Block, (int)W.size()});
  std::vector<MPoly> img(n);
  for (size_t i = 0; i < W.size(); i++) img[W[i]] = mp_var(Bk, (int)i);
  for (size_t i = 0; i < U.size(); i++) img[U[i]] = mp_var(Bk, (int)(W.size() + i));
  Ideal Ib;
  for (const MPoly& f : I) Ib.push_back(mp_map(S, f, Bk, img));
  GB gb = groebner_ideal(Bk, Ib);
  std::vector<MPoly> lcs;
  for (const MVec& row : gb.basis) {
    const MPoly& f = row[0];
    MPoly lc;
    for (const MTerm& t : f) {
      bool same = true;
      for (size_t i = 0; i < W.size() && same; i++)
        if (t.e[i] != f[0].e[i]) same = false;
      if (!same) continue;
      Expo e(n, 0);
      for (size_t i = 0; i < U.size(); i++) e[U[i]] = t.e[W.size() + i];
      lc.push_back(MTerm{std::move(e), t.c});
    }
    mp_norm(S, lc);
    lc = mp_monic(S, lc);
    if (mp_total_deg(lc) == 0) continue;
    bool seen = false;
    for (const MPoly& x : lcs)
      if (mp_eq(S, x, lc)) seen = true;
    if (!seen) lcs.push_back(lc);
  }
  MPoly h = mp_from_int(S, 1);
  for (const MPoly& x : lcs) h = mp_mul(S, h, x);
  return h;
}

/// smallest r with P^r ⊆ Q (qgb a basis of Q); doubles as the verification
int comp_power(const RingPtr& S, const GB& qgb, const Ideal& P) {
  std::vector<MPoly> cur;
  for (const MPoly& p : P) {
    MPoly t = nf_ideal(S, qgb, p);
    if (!mp_is_zero(t)) cur.push_back(t);
  }
  int r = 1;
  while (!cur.empty()) {
    if (++r > 64) fail("Internal", "primary power runaway");
    std::vector<MPoly> next;
    for (const MPoly& c : cur)
      for (const MPoly& p : P) {
        MPoly t = nf_ideal(S, qgb, mp_mul(S, c, p));
        if (mp_is_zero(t)) continue;
        bool seen = false;
        for (const MPoly& x : next)
          if (mp_eq(S, x, t)) seen = true;
        if (!seen) next.push_back(t);
        if (next.size() > 20000) fail("Internal", "primary power frontier blowup");
      }
    cur = std::move(next);
  }
  return r;
}

std::string prime_key(const RingPtr& S, const Ideal& P) {
  std::string key;
  for (const MPoly& f : P) {
    key += mp_to_string(S, f);
    key += ";";
  }
  return key;
}

}  // namespace

std::vector<PrimaryComponent> primary_decomposition(const RingPtr& S, const Ideal& I) {
  Ideal Ired = reduced_basis(S, I);
  if (basis_is_unit(Ired)) return {};
  if (Ired.empty()) {
    PrimaryComponent c;
    c.dim = S->nvars();
    c.power = 1;
    return {c};
  }

  std::vector<std::pair<Ideal, Ideal>> raw;
  int d = ideal_dim(S, Ired);
  if (d == 0) {
    for (auto& zc : zd_primdec(S, Ired)) raw.emplace_back(zc.primary, zc.prime);
  } else {
    std::vector<int> U = max_independent_set(S, Ired);
    LocalRing L = make_local(S, U);
    Ideal Iloc;
    for (const MPoly& f : Ired) Iloc.push_back(L.to_loc(f));
    for (auto& zc : zd_primdec(L.Sloc, Iloc))
      raw.emplace_back(contract_ideal(L, zc.primary), contract_ideal(L, zc.prime));
    if (raw.empty()) fail("Internal", "empty localized decomposition");

    Ideal isat = raw[0].first;
    for (size_t i = 1; i < raw.size(); i++)
      isat = reduced_basis(S, ideal_intersect(S, isat, raw[i].first));
    if (!ideal_eq(S, isat, Ired)) {
      MPoly h = blocked_h(S, Ired, U);
      if (mp_total_deg(h) == 0) fail("Internal", "trivial saturation multiplier");
      bool found = false;
      int m = 1;
      for (int it = 0; it < 22 && !found; it++, m *= 2) {
        Ideal cand = Ired;
        cand.push_back(mp_pow(S, h, m));
        if (!ideal_eq(S, ideal_intersect(S, isat, cand), Ired)) continue;
        for (auto& pc : primary_decomposition(S, cand))
          raw.emplace_back(pc.primary, pc.prime);
        found = true;
      }
      if (!found) fail("Internal", "saturation exponent not found");
    }
  }

  std::vector<std::pair<Ideal, Ideal>> merged;
  for (auto& qp : raw) {
    bool hit = false;
    for (auto& mg : merged)
      if (ideal_eq(S, mg.second, qp.second)) {
        mg.first = reduced_basis(S, ideal_intersect(S, mg.first, qp.first));
        hit = true;
        break;
      }
    if (!hit) merged.push_back(qp);
  }

  bool changed = true;
  while (changed && merged.size() > 1) {
    changed = false;
    for (size_t i = 0; i < merged.size(); i++) {
      Ideal inter;
      bool first = true;
      for (size_t j = 0; j < merged.size(); j++) {
        if (j == i) continue;
        inter = first ? merged[j].first
                      : reduced_basis(S, ideal_intersect(S, inter, merged[j].first));
        first = false;
      }
      if (ideal_eq(S, inter, Ired)) {
        merged.erase(merged.begin() + (long)i);
        changed = true;
        break;
      }
    }
  }

  std::vector<PrimaryComponent> comps;
  for (auto& qp : merged) {
    PrimaryComponent c;
    c.primary = qp.first;
    c.prime = qp.second;
    c.dim = ideal_dim(S, c.prime);
    GB qgb = groebner_ideal(S, c.primary);
    GB pgb = groebner_ideal(S, c.prime);
    for (const MPoly& g : c.primary)
      if (!ideal_member(S, pgb, g, nullptr))
        fail("Internal", "primary component not inside its prime");
    for (const MPoly& g : c.prime)
      if (!radical_member(S, g, c.primary))
        fail("Internal", "prime not inside the radical of its primary");
    c.power = comp_power(S, qgb, c.prime);
    comps.push_back(std::move(c));
  }

  Ideal inter;
  for (size_t i = 0; i < comps.size(); i++)
    inter = (i == 0) ? comps[0].primary
                     : reduced_basis(S, ideal_intersect(S, inter, comps[i].primary));
  if (comps.empty() || !ideal_eq(S, inter, Ired))
    fail("Internal", "primary decomposition failed verification");
  for (size_t i = 0; i < comps.size(); i++)
    for (size_t j = i + 1; j < comps.size(); j++)
      if (ideal_eq(S, comps[i].prime, comps[j].prime))
        fail("Internal", "repeated associated prime");

  std::sort(comps.begin(), comps.end(),
            [&](const PrimaryComponent& a, const PrimaryComponent& b) {
              if (a.dim != b.dim) return a.dim > b.dim;
              return prime_key(S, a.prime) < prime_key(S, b.prime);
            });
  return comps;
}

Ideal ideal_radical(const RingPtr& S, const Ideal& I) {
  auto comps = primary_decomposition(S, I);
  if (comps.empty()) return reduced_basis(S, {mp_from_int(S, 1)});
  Ideal out = comps[0].prime;
  for (size_t i = 1; i < comps.size(); i++)
    out = reduced_basis(S, ideal_intersect(S, out, comps[i].prime));
  return out;
}

bool ideal_is_prime(const RingPtr& S, const Ideal& I) {
  Ideal Ired = reduced_basis(S, I);
  if (basis_is_unit(Ired)) return false;
  auto comps = primary_decomposition(S, Ired);
  return comps.size() == 1 && ideal_eq(S, comps[0].prime, Ired);
}

bool ideal_is_primary(const RingPtr& S, const Ideal& I) {
  Ideal Ired = reduced_basis(S, I);
  if (basis_is_unit(Ired)) return false;
  return primary_decomposition(S, Ired).size() == 1;
}

std::vector<Ideal> minimal_primes(const RingPtr& S, const Ideal& I) {
  auto comps = primary_decomposition(S, I);
  std::vector<Ideal> primes;
  for (auto& c : comps) primes.push_back(c.prime);
  std::vector<Ideal> out;
  for (size_t i = 0; i < primes.size(); i++) {
    bool minimal = true;
    GB gi = groebner_ideal(S, primes[i]);
    for (size_t j = 0; j < primes.size() && minimal; j++) {
      if (j == i) continue;
      bool contained = true;
      for (const MPoly& g : primes[j])
        if (!ideal_member(S, gi, g, nullptr)) {
          contained = false;
          break;
        }
      if (contained) minimal = false;
    }
    if (minimal) out.push_back(primes[i]);
  }
  return out;
}

}  // namespace effalg
