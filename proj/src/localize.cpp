#include "localize.hpp"

#include <algorithm>

namespace effalg {

namespace {

std::pair<MPoly, MPoly> unfrac_elem(const LocalRing& L, int level, const FElem& c);

// f is a polynomial in the variable U[level] with coefficients in
// chain[level]; returns (N, D) in k[Z] with N/D = f.
std::pair<MPoly, MPoly> unfrac_upoly(const LocalRing& L, int level, const UPoly& f) {
  const RingPtr& S = L.S;
  MPoly one = mp_from_int(S, 1);
  if (f.empty()) return {MPoly{}, one};
  std::vector<MPoly> nums, dens;
  for (const FElem& c : f) {
    auto nd = unfrac_elem(L, level, c);
    nums.push_back(nd.first);
    dens.push_back(nd.second);
  }
  std::vector<MPoly> dist;
  for (const MPoly& d : dens) {
    bool seen = false;
    for (const MPoly& e : dist)
      if (mp_eq(S, d, e)) { seen = true; break; }
    if (!seen) dist.push_back(d);
  }
  MPoly D = one;
  for (const MPoly& d : dist) D = mp_mul(S, D, d);
  MPoly N;
  for (size_t i = 0; i < f.size(); i++) {
    if (mp_is_zero(nums[i])) continue;
    MPoly mult = one;
    for (const MPoly& d : dist)
      if (!mp_eq(S, d, dens[i])) mult = mp_mul(S, mult, d);
    MPoly term = mp_mul(S, nums[i], mult);
    if (i > 0) term = mp_mul(S, term, mp_var(S, L.U[level], (int)i));
    N = mp_add(S, N, term);
  }
  return {N, D};
}

std::pair<MPoly, MPoly> unfrac_elem(const LocalRing& L, int level, const FElem& c) {
  const RingPtr& S = L.S;
  if (level == 0) return {mp_const(S, c), mp_from_int(S, 1)};
  const FracV& fr = std::get<FracV>(c.v);
  auto nn = unfrac_upoly(L, level - 1, fr.num);
  auto dd = unfrac_upoly(L, level - 1, fr.den);
  if (mp_is_zero(dd.first)) fail("Internal", "zero denominator in unfrac");
  return {mp_mul(S, nn.first, dd.second), mp_mul(S, nn.second, dd.first)};
}

}  // namespace

LocalRing make_local(const RingPtr& S, const std::vector<int>& U) {
  LocalRing L;
  L.S = S;
  L.U = U;
  std::sort(L.U.begin(), L.U.end());
  for (int i = 0; i < S->nvars(); i++)
    if (std::find(L.U.begin(), L.U.end(), i) == L.U.end()) L.W.push_back(i);
  L.chain.push_back(S->K);
  for (int u : L.U) L.chain.push_back(Field::trans(L.chain.back(), S->vars[u]));
  std::vector<std::string> wnames;
  for (int w : L.W) wnames.push_back(S->vars[w]);
  L.Sloc = PolyRing::make(L.chain.back(), wnames);
  return L;
}

MPoly LocalRing::to_loc(const MPoly& f) const {
  FieldPtr Ktop = chain.back();
  std::vector<MPoly> images(S->nvars());
  for (size_t j = 0; j < U.size(); j++) {
    FElem g = chain[j + 1]->generator();
    for (size_t l = j + 2; l < chain.size(); l++) g = chain[l]->embed(g);
    images[U[j]] = mp_const(Sloc, g);
  }
  for (size_t j = 0; j < W.size(); j++) images[W[j]] = mp_var(Sloc, (int)j);
  auto lift = [&](const FElem& c) {
    FElem x = c;
    for (size_t l = 1; l < chain.size(); l++) x = chain[l]->embed(x);
    return x;
  };
  return mp_map(S, f, Sloc, images, lift);
}

MPoly LocalRing::unfrac(const MPoly& g, MPoly* den) const {
  int level = (int)U.size();
  MPoly one = mp_from_int(S, 1);
  std::vector<std::pair<MPoly, MPoly>> parts;
  for (const MTerm& t : g) parts.push_back(unfrac_elem(*this, level, t.c));
  std::vector<MPoly> dist;
  for (const auto& nd : parts) {
    bool seen = false;
    for (const MPoly& e : dist)
      if (mp_eq(S, nd.second, e)) { seen = true; break; }
    if (!seen) dist.push_back(nd.second);
  }
  MPoly D = one;
  for (const MPoly& d : dist) D = mp_mul(S, D, d);
  MPoly out;
  for (size_t i = 0; i < g.size(); i++) {
    if (mp_is_zero(parts[i].first)) continue;
    MPoly mult = one;
    for (const MPoly& d : dist)
      if (!mp_eq(S, d, parts[i].second)) mult = mp_mul(S, mult, d);
    Expo e(S->nvars(), 0);
    for (size_t j = 0; j < W.size(); j++) e[W[j]] = g[i].e[j];
    out = mp_add(S, out, mp_mul_term(S, S->K->one(), e, mp_mul(S, parts[i].first, mult)));
  }
  if (den) *den = D;
  return out;
}

}  // namespace effalg
