#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include "effalg/modules.hpp"

namespace effalg {

namespace {

Ideal reduced_basis(const RingPtr& S, const Ideal& I) {
  GB gb = groebner_ideal(S, I);
  Ideal out;
  for (const MVec& r : gb.basis) out.push_back(r[0]);
  return out;
}

Ideal unit_ideal(const RingPtr& S) { return {mp_from_int(S, 1)}; }

/// joint presentation ring k[Y…, X…] with Y ≫ X, carrying
/// Ĵ = I_B + (X_i − h_i); k[Y,X]/Ĵ ≅ B
struct Joint {
  RingPtr J;
  int nY = 0, nX = 0;
  Ideal Jhat;
};

Joint make_joint(const AlgebraMorphism& f) {
  const RingPtr& SA = f.A->S;
  const RingPtr& SB = f.B->S;
  Joint R;
  R.nY = SB->nvars();
  R.nX = SA->nvars();
  std::vector<std::string> names;
  for (int i = 0; i < R.nY; i++) names.push_back("@y" + std::to_string(i));
  for (int i = 0; i < R.nX; i++) names.push_back("@x" + std::to_string(i));
  R.J = PolyRing::make(SB->K, names, MOrder{OrdKind::Block, R.nY});
  std::vector<MPoly> yimg(R.nY);
  for (int i = 0; i < R.nY; i++) yimg[i] = mp_var(R.J, i);
  for (const MPoly& g : f.B->I) R.Jhat.push_back(mp_map(SB, g, R.J, yimg));
  for (int i = 0; i < R.nX; i++)
    R.Jhat.push_back(
        mp_sub(R.J, mp_var(R.J, R.nY + i), mp_map(SB, f.images[i], R.J, yimg)));
  return R;
}

/// map a polynomial on the kept X-variables (after elimination) back to A->S
MPoly back_to_A(const RingPtr& OX, const MPoly& g, const RingPtr& SA) {
  std::vector<MPoly> img(OX->nvars());
  for (int j = 0; j < OX->nvars(); j++) img[j] = mp_var(SA, j);
  return mp_map(OX, g, SA, img);
}

bool expo_has_Y(const Expo& e, int nY) {
  for (int i = 0; i < nY; i++)
    if (e[i] > 0) return true;
  return false;
}

/// monomials below the staircase of leads, sorted by (degree, lex)
std::vector<Expo> collect_staircase(int nv, const std::vector<Expo>& leads) {
  std::vector<Expo> out;
  Expo cur(nv, 0);
  std::function<void(int)> rec = [&](int idx) {
    if ((int)out.size() > 100000) fail("Internal", "staircase blowup");
    if (idx == nv) {
      out.push_back(cur);
      return;
    }
    for (int e = 0;; e++) {
      if (e > 4096) fail("Internal", "staircase runaway");
      cur[idx] = e;
      bool div = false;
      for (const Expo& l : leads) {
        bool d2 = true;
        for (int j = 0; j <= idx && d2; j++)
          if (l[j] > cur[j]) d2 = false;
        for (int j = idx + 1; j < nv && d2; j++)
          if (l[j] > 0) d2 = false;
        if (d2) {
          div = true;
          break;
        }
      }
      if (div) break;
      rec(idx + 1);
    }
    cur[idx] = 0;
  };
  rec(0);
  std::sort(out.begin(), out.end(), [](const Expo& a, const Expo& b) {
    int da = mono_deg(a), db = mono_deg(b);
    if (da != db) return da < db;
    return a < b;
  });
  return out;
}

struct FiniteData {
  Joint R;
  GB gb;
  bool zero = false;    ///< B is the zero ring
  bool finite = false;
  std::vector<Expo> mons;  ///< Y-staircase, exponents over B->S
};

FiniteData finite_data(const AlgebraMorphism& f) {
  FiniteData D;
  D.R = make_joint(f);
  D.gb = groebner_ideal(D.R.J, D.R.Jhat);
  std::vector<Expo> pure;
  for (const MVec& row : D.gb.basis) {
    const Expo& e = row[0][0].e;
    if (mono_deg(e) == 0) {
      D.zero = true;
      D.finite = true;
      return D;
    }
    bool xfree = true;
    for (int i = 0; i < D.R.nX && xfree; i++)
      if (e[D.R.nY + i] > 0) xfree = false;
    if (!xfree) continue;
    Expo ye(e.begin(), e.begin() + D.R.nY);
    pure.push_back(std::move(ye));
  }
  for (int i = 0; i < D.R.nY; i++) {
    bool found = false;
    for (const Expo& e : pure) {
      if (e[i] == 0) continue;
      bool single = true;
      for (int j = 0; j < D.R.nY && single; j++)
        if (j != i && e[j] > 0) single = false;
      if (single) {
        found = true;
        break;
      }
    }
    if (!found) return D;
  }
  D.finite = true;
  D.mons = collect_staircase(D.R.nY, pure);
  return D;
}

/// Y-monomial of the joint ring from a B->S exponent vector
MPoly ymon(const Joint& R, const Expo& e) {
  Expo full(R.nY + R.nX, 0);
  for (int i = 0; i < R.nY; i++) full[i] = e[i];
  MPoly f{MTerm{std::move(full), R.J->K->one()}};
  return f;
}

/// relations of B as an A-module on the given Y-monomial generators
std::vector<MVec> box_relations(const AlgebraMorphism& f, const FiniteData& D) {
  const Joint& R = D.R;
  int s = (int)D.mons.size();
  std::vector<MVec> cols;
  for (const Expo& e : D.mons) cols.push_back(MVec{ymon(R, e)});
  for (const MVec& row : D.gb.basis) cols.push_back(MVec{row[0]});
  auto syz = syzygies(R.J, 1, cols);
  std::vector<MVec> rows;
  for (const MVec& row : syz) {
    MVec a(row.begin(), row.begin() + s);
    if (!mv_is_zero(a)) rows.push_back(std::move(a));
  }
  std::vector<int> elim;
  for (int i = 0; i < R.nY; i++) elim.push_back(i);
  RingPtr OX;
  auto pure = module_eliminate(R.J, s, rows, elim, &OX);
  const RingPtr& SA = f.A->S;
  std::vector<MVec> out;
  for (const MVec& v : pure) {
    MVec w(s);
    for (int c = 0; c < s; c++) w[c] = back_to_A(OX, v[c], SA);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// algebra morphisms

AlgebraMorphism alg_morphism(const QRingPtr& A, const QRingPtr& B,
                             const std::vector<MPoly>& images) {
  if ((int)images.size() != A->S->nvars())
    fail("SchemaError", "one image per generator is required");
  if (A->S->K->descriptor() != B->S->K->descriptor())
    fail("RingMismatch", "morphism across different coefficient fields");
  AlgebraMorphism f;
  f.A = A;
  f.B = B;
  for (const MPoly& g : images) f.images.push_back(B->nf(g));
  for (const MPoly& rel : A->I) {
    MPoly img = mp_map(A->S, rel, B->S, f.images);
    if (!B->is_zero_elt(img))
      fail("NotAMorphism", "defining relations are not preserved");
  }
  return f;
}

Ideal am_kernel(const AlgebraMorphism& f) {
  Joint R = make_joint(f);
  std::vector<int> keep;
  for (int i = 0; i < R.nX; i++) keep.push_back(R.nY + i);
  RingPtr OX;
  Ideal K = eliminate(R.J, R.Jhat, keep, &OX);
  Ideal out;
  for (const MPoly& g : K) out.push_back(back_to_A(OX, g, f.A->S));
  return qr_ideal(f.A, out);
}

bool am_is_injective(const AlgebraMorphism& f) {
  return ideal_eq(f.A->S, am_kernel(f), f.A->I);
}

bool am_is_surjective(const AlgebraMorphism& f) {
  Joint R = make_joint(f);
  GB gb = groebner_ideal(R.J, R.Jhat);
  for (int i = 0; i < R.nY; i++) {
    MPoly t = nf_ideal(R.J, gb, mp_var(R.J, i));
    for (const MTerm& tm : t)
      if (expo_has_Y(tm.e, R.nY)) return false;
  }
  return true;
}

Ideal am_locus_inj(const AlgebraMorphism& f) {
  const RingPtr& SA = f.A->S;
  Ideal K = am_kernel(f);
  if (K.empty()) return unit_ideal(SA);
  Ideal ann = ideal_colon(SA, f.A->I, K);
  return ideal_radical(SA, ann);
}

Ideal am_locus_surj(const AlgebraMorphism& f) {
  const RingPtr& SA = f.A->S;
  Joint R = make_joint(f);
  if (R.nY == 0) return unit_ideal(SA);
  std::vector<int> elim;
  for (int i = 0; i < R.nY; i++) elim.push_back(i);
  Ideal acc;
  bool first = true;
  for (int i = 0; i < R.nY; i++) {
    std::vector<MVec> cols{MVec{mp_var(R.J, i)}, MVec{mp_from_int(R.J, 1)}};
    for (const MPoly& g : R.Jhat) cols.push_back(MVec{g});
    auto syz = syzygies(R.J, 1, cols);
    std::vector<MVec> N;
    for (const MVec& row : syz) {
      MVec v{row[0], row[1]};
      if (!mv_is_zero(v)) N.push_back(std::move(v));
    }
    RingPtr OX;
    auto NX = module_eliminate(R.J, 2, N, elim, &OX);
    Ideal Ci;
    for (const MVec& v : NX)
      if (!mp_is_zero(v[0])) Ci.push_back(back_to_A(OX, v[0], SA));
    Ci = qr_ideal(f.A, Ci);
    acc = first ? Ci : reduced_basis(SA, ideal_intersect(SA, acc, Ci));
    first = false;
  }
  return ideal_radical(SA, acc);
}

Ideal am_locus_iso(const AlgebraMorphism& f) {
  const RingPtr& SA = f.A->S;
  return reduced_basis(SA,
                       ideal_intersect(SA, am_locus_inj(f), am_locus_surj(f)));
}

bool am_is_open_immersion(const AlgebraMorphism& f, std::vector<MPoly>* witness) {
  const RingPtr& SB = f.B->S;
  Ideal L = am_locus_iso(f);
  Ideal LB;
  for (const MPoly& g : L)
    LB.push_back(f.B->nf(mp_map(f.A->S, g, SB, f.images)));
  Ideal full = f.B->I;
  for (const MPoly& g : LB) full.push_back(g);
  if (!ideal_contains_one(SB, full)) return false;
  if (witness) {
    GB gb = groebner_ideal(SB, full);
    std::vector<MPoly> cert;
    if (!ideal_member(SB, gb, mp_from_int(SB, 1), &cert))
      fail("Internal", "lost the unit certificate");
    witness->assign(cert.begin() + (long)f.B->I.size(), cert.end());
  }
  return true;
}

bool am_is_finite(const AlgebraMorphism& f, ModulePresentation* pres,
                  std::vector<Expo>* mons) {
  FiniteData D = finite_data(f);
  if (!D.finite) return false;
  if (mons) *mons = D.mons;
  if (pres) {
    if (D.zero)
      *pres = mod_make(f.A, 0, {});
    else
      *pres = mod_make(f.A, (int)D.mons.size(), box_relations(f, D));
  }
  return true;
}

// ---------------------------------------------------------------------------
// Noether normalization

namespace {

std::string fresh_name(const std::string& base,
                       const std::vector<std::string>& taken) {
  std::string nm = base;
  auto used = [&](const std::string& s) {
    for (const std::string& t : taken)
      if (t == s) return true;
    return false;
  };
  while (used(nm)) nm += "_";
  return nm;
}

/// candidate tuples of d linear forms: coordinate subsets first, then
/// sheared subsets with growing integer weights
std::vector<std::vector<MPoly>> noether_candidates(const RingPtr& S, int d) {
  std::vector<std::vector<MPoly>> out;
  int n = S->nvars();
  if (d == 0) {
    out.push_back({});
    return out;
  }
  std::vector<long> shears{0, 1, 2, 3, 7};
  for (long c : shears) {
    std::vector<int> idx(d);
    for (int i = 0; i < d; i++) idx[i] = i;
    while (true) {
      std::vector<MPoly> tuple;
      for (int i = 0; i < d; i++) {
        MPoly u = mp_var(S, idx[i]);
        if (c != 0) {
          for (int l = 0; l < n; l++) {
            if (std::find(idx.begin(), idx.end(), l) != idx.end()) continue;
            FElem w = S->K->from_int(Int(c) * Int(i + 1));
            u = mp_add(S, u, mp_scale(S, w, mp_var(S, l)));
          }
        }
        tuple.push_back(u);
      }
      out.push_back(std::move(tuple));
      int i = d - 1;
      while (i >= 0 && idx[i] == n - d + i) i--;
      if (i < 0) break;
      idx[i]++;
      for (int j = i + 1; j < d; j++) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

NoetherData noether_normalization(const QRingPtr& A) {
  const RingPtr& S = A->S;
  if (A->is_zero_ring()) fail("ZeroRing", "the zero ring has no Noether normalization");
  int d = A->dim();
  for (auto& tuple : noether_candidates(S, d)) {
    std::vector<std::string> pn;
    {
      std::vector<std::string> taken = S->vars;
      for (int i = 0; i < d; i++) {
        pn.push_back(fresh_name("u" + std::to_string(i + 1), taken));
        taken.push_back(pn.back());
      }
    }
    RingPtr P = PolyRing::make(S->K, pn);
    QRingPtr Pq = QuotientRing::make(P, {});
    AlgebraMorphism f = alg_morphism(Pq, A, tuple);
    ModulePresentation pres;
    std::vector<Expo> mons;
    if (!am_is_finite(f, &pres, &mons)) continue;
    if (!am_is_injective(f)) fail("Internal", "finite map from the base is not injective");
    NoetherData out;
    out.P = P;
    out.images = f.images;
    out.module = std::move(pres);
    out.mons = std::move(mons);
    return out;
  }
  fail("Internal", "Noether normalization search exhausted");
}

// ---------------------------------------------------------------------------
// pinching

QRingPtr pinch_algebra(const QRingPtr& A, const Ideal& Igens,
                       std::vector<std::string>* tnames) {
  const RingPtr& S = A->S;
  int n = S->nvars();
  std::vector<MPoly> xs;
  for (const MPoly& g : Igens) {
    MPoly t = A->nf(g);
    if (mp_is_zero(t)) continue;
    bool seen = false;
    for (const MPoly& x : xs)
      if (mp_eq(S, x, t)) seen = true;
    if (!seen) xs.push_back(std::move(t));
  }
  int r = (int)xs.size();

  std::vector<std::string> tn;
  {
    std::vector<std::string> taken = S->vars;
    for (int u = 0; u < r; u++) {
      tn.push_back(fresh_name("T" + std::to_string(u + 1), taken));
      taken.push_back(tn.back());
    }
  }
  std::vector<std::string> names = S->vars;
  for (const std::string& t : tn) names.push_back(t);
  RingPtr SB = PolyRing::make(S->K, names);
  std::vector<MPoly> imgX(n);
  for (int i = 0; i < n; i++) imgX[i] = mp_var(SB, i);
  auto lift = [&](const MPoly& g) { return mp_map(S, g, SB, imgX); };

  Ideal rels;
  for (const MPoly& g : A->I) rels.push_back(lift(g));

  std::vector<MVec> cols;
  for (const MPoly& x : xs) cols.push_back(MVec{x});
  for (const MPoly& g : A->I) cols.push_back(MVec{g});
  auto syz = syzygies(S, 1, cols);
  for (const MVec& row : syz) {
    MPoly lin;
    for (int u = 0; u < r; u++) {
      if (mp_is_zero(row[u])) continue;
      lin = mp_add(SB, lin, mp_mul(SB, lift(row[u]), mp_var(SB, n + u)));
    }
    if (!mp_is_zero(lin)) rels.push_back(std::move(lin));
  }

  GB gbm = groebner(S, 1, cols);
  for (int i = 0; i < r; i++)
    for (int j = i; j < r; j++) {
      std::vector<MPoly> cert;
      if (!membership(S, gbm, MVec{mp_mul(S, xs[i], xs[j])}, &cert))
        fail("Internal", "ideal is not multiplicatively closed");
      MPoly quad = mp_mul(SB, mp_var(SB, n + i), mp_var(SB, n + j));
      for (int u = 0; u < r; u++) {
        if (mp_is_zero(cert[u])) continue;
        quad = mp_sub(SB, quad, mp_mul(SB, lift(cert[u]), mp_var(SB, n + u)));
      }
      rels.push_back(std::move(quad));
    }
  if (tnames) *tnames = tn;
  return QuotientRing::make(SB, rels);
}

// ---------------------------------------------------------------------------
// smooth locus

namespace {

MPoly mdet(const RingPtr& S, const std::vector<std::vector<MPoly>>& M) {
  int c = (int)M.size();
  if (c == 0) return mp_from_int(S, 1);
  if (c == 1) return M[0][0];
  MPoly det;
  int sign = 1;
  for (int i = 0; i < c; i++) {
    if (!mp_is_zero(M[i][0])) {
      std::vector<std::vector<MPoly>> sub;
      for (int l = 0; l < c; l++) {
        if (l == i) continue;
        std::vector<MPoly> row(M[l].begin() + 1, M[l].end());
        sub.push_back(std::move(row));
      }
      MPoly term = mp_mul(S, M[i][0], mdet(S, sub));
      det = (sign > 0) ? mp_add(S, det, term) : mp_sub(S, det, term);
    }
    sign = -sign;
  }
  return det;
}

/// ideal of the c×c minors of the Jacobian of gens
Ideal jacobian_minors(const RingPtr& S, const Ideal& gens, int c) {
  int m = (int)gens.size();
  int n = S->nvars();
  if (c == 0) return {mp_from_int(S, 1)};
  if (m < c || n < c) fail("Internal", "not enough equations for the codimension");
  std::vector<std::vector<MPoly>> jac(m, std::vector<MPoly>(n));
  for (int i = 0; i < m; i++)
    for (int j = 0; j < n; j++) jac[i][j] = mp_deriv(S, gens[i], j);
  Ideal out;
  std::vector<int> ri(c), ci(c);
  for (int i = 0; i < c; i++) ri[i] = i;
  while (true) {
    for (int i = 0; i < c; i++) ci[i] = i;
    while (true) {
      std::vector<std::vector<MPoly>> sub(c, std::vector<MPoly>(c));
      for (int a = 0; a < c; a++)
        for (int b = 0; b < c; b++) sub[a][b] = jac[ri[a]][ci[b]];
      MPoly det = mdet(S, sub);
      if (!mp_is_zero(det)) out.push_back(std::move(det));
      int i = c - 1;
      while (i >= 0 && ci[i] == n - c + i) i--;
      if (i < 0) break;
      ci[i]++;
      for (int j = i + 1; j < c; j++) ci[j] = ci[j - 1] + 1;
    }
    int i = c - 1;
    while (i >= 0 && ri[i] == m - c + i) i--;
    if (i < 0) break;
    ri[i]++;
    for (int j = i + 1; j < c; j++) ri[j] = ri[j - 1] + 1;
  }
  return out;
}

/// radical ideal of the singular locus of a prime P (Jacobian criterion)
Ideal sing_ideal(const RingPtr& S, const Ideal& P) {
  int c = S->nvars() - ideal_dim(S, P);
  Ideal piece = P;
  for (MPoly& m : jacobian_minors(S, P, c)) piece.push_back(std::move(m));
  return ideal_radical(S, piece);
}

}  // namespace

Ideal smooth_locus_ideal(const QRingPtr& B) {
  const RingPtr& S = B->S;
  if (!S->K->is_perfect())
    fail("UsageError", "the jacobian criterion requires a perfect coefficient field");
  if (B->is_zero_ring()) return unit_ideal(S);
  auto primes = minimal_primes(S, B->I);
  Ideal acc;
  bool first = true;
  auto add_piece = [&](const Ideal& piece) {
    Ideal red = reduced_basis(S, piece);
    acc = first ? red : reduced_basis(S, ideal_intersect(S, acc, red));
    first = false;
  };
  for (const Ideal& P : primes) add_piece(sing_ideal(S, P));
  for (size_t i = 0; i < primes.size(); i++)
    for (size_t j = i + 1; j < primes.size(); j++) {
      Ideal piece = primes[i];
      for (const MPoly& g : primes[j]) piece.push_back(g);
      add_piece(piece);
    }
  return ideal_radical(S, acc);
}

// ---------------------------------------------------------------------------
// normalization

namespace {

/// A[Igens/x] presented on one variable per generator of H = (x·J : J):
/// linear relations from the syzygies of (x, g₁…g_m), quadratic relations
/// from membership certificates for g_u·g_v in (x·g₁…x·g_m) + I_A
QRingPtr end_ring(const QRingPtr& A, const MPoly& x, const Ideal& H) {
  const RingPtr& S = A->S;
  int n = S->nvars();
  int m = (int)H.size();
  std::vector<std::string> wn;
  {
    std::vector<std::string> taken = S->vars;
    for (int u = 0; u < m; u++) {
      wn.push_back(fresh_name("w" + std::to_string(u + 1), taken));
      taken.push_back(wn.back());
    }
  }
  std::vector<std::string> names = S->vars;
  for (const std::string& w : wn) names.push_back(w);
  RingPtr SB = PolyRing::make(S->K, names);
  std::vector<MPoly> imgX(n);
  for (int i = 0; i < n; i++) imgX[i] = mp_var(SB, i);
  auto lift = [&](const MPoly& g) { return mp_map(S, g, SB, imgX); };

  Ideal rels;
  for (const MPoly& g : A->I) rels.push_back(lift(g));

  std::vector<MVec> cols{MVec{x}};
  for (const MPoly& g : H) cols.push_back(MVec{g});
  for (const MPoly& g : A->I) cols.push_back(MVec{g});
  auto syz = syzygies(S, 1, cols);
  for (const MVec& row : syz) {
    MPoly lin = lift(row[0]);
    for (int u = 0; u < m; u++) {
      if (mp_is_zero(row[1 + u])) continue;
      lin = mp_add(SB, lin, mp_mul(SB, lift(row[1 + u]), mp_var(SB, n + u)));
    }
    if (!mp_is_zero(lin)) rels.push_back(std::move(lin));
  }

  std::vector<MVec> cols2;
  for (const MPoly& g : H) cols2.push_back(MVec{mp_mul(S, x, g)});
  for (const MPoly& g : A->I) cols2.push_back(MVec{g});
  GB gb2 = groebner(S, 1, cols2);
  for (int u = 0; u < m; u++)
    for (int v = u; v < m; v++) {
      std::vector<MPoly> cert;
      if (!membership(S, gb2, MVec{mp_mul(S, H[u], H[v])}, &cert))
        fail("Internal", "endomorphism ring is not closed under products");
      MPoly quad = mp_mul(SB, mp_var(SB, n + u), mp_var(SB, n + v));
      for (int t = 0; t < m; t++) {
        if (mp_is_zero(cert[t])) continue;
        quad = mp_sub(SB, quad, mp_mul(SB, lift(cert[t]), mp_var(SB, n + t)));
      }
      rels.push_back(std::move(quad));
    }
  return QuotientRing::make(SB, rels);
}

/// express a vector of P-values as a combination of the given module
/// generators (free ambient), failing is an internal error
std::vector<MPoly> express_in(const RingPtr& SP, const GB& gb, int ngens,
                              const MVec& w) {
  std::vector<MPoly> cert;
  if (!membership(SP, gb, w, &cert)) fail("Internal", "hom value outside the module");
  cert.resize(ngens);
  return cert;
}

/// S2-closure of a domain A via the bidual over a Noether normalization;
/// returns nullptr when A is already S2
QRingPtr s2_closure(const QRingPtr& A) {
  const RingPtr& S = A->S;
  int n = S->nvars();
  NoetherData noe = noether_normalization(A);
  const RingPtr& SP = noe.P;
  QRingPtr Pq = QuotientRing::make(SP, {});
  const ModulePresentation& M = noe.module;
  int s = M.rank;
  if (s == 0) fail("Internal", "zero module in the S2 step");

  ModulePresentation F1 = mod_free(Pq, 1);
  HomData H1 = mod_hom(M, F1);
  HomData H2 = mod_hom(H1.hom, F1);
  int g1 = H1.hom.rank, g2 = H2.hom.rank;
  if (g2 == 0) fail("Internal", "empty bidual");

  // value tables: del[g][u] = δ_g(m_u), eps[e][g] = ε_e(δ_g)
  auto del = [&](int g, int u) -> const MPoly& { return H1.gen_maps[g][u][0]; };
  auto epsv = [&](int e, int g) -> const MPoly& { return H2.gen_maps[e][g][0]; };

  // ambient generators for membership lifts (free ambients in both cases)
  std::vector<MVec> dgens, egens;
  for (int g = 0; g < g1; g++) {
    MVec w(s);
    for (int u = 0; u < s; u++) w[u] = del(g, u);
    dgens.push_back(std::move(w));
  }
  for (int e = 0; e < g2; e++) {
    MVec w(g1);
    for (int g = 0; g < g1; g++) w[g] = epsv(e, g);
    egens.push_back(std::move(w));
  }
  GB gbD = groebner(SP, s, dgens);
  GB gbE = groebner(SP, g1, egens);

  // multiplication tensor of the monomial generators and the variable action,
  // both read off from normal forms in the joint ring of the Noether map
  AlgebraMorphism nmap = alg_morphism(Pq, A, noe.images);
  FiniteData FD = finite_data(nmap);
  std::map<Expo, int> monIdx;
  for (size_t u = 0; u < FD.mons.size(); u++) monIdx[FD.mons[u]] = (int)u;
  const Joint& JR = FD.R;
  auto split_nf = [&](const MPoly& p) {
    std::vector<MPoly> coeffs(s);
    MPoly t = nf_ideal(JR.J, FD.gb, p);
    for (const MTerm& tm : t) {
      Expo ye(tm.e.begin(), tm.e.begin() + JR.nY);
      auto it = monIdx.find(ye);
      if (it == monIdx.end()) fail("Internal", "normal form escaped the staircase");
      Expo pe(SP->nvars(), 0);
      for (int i = 0; i < JR.nX; i++) pe[i] = tm.e[JR.nY + i];
      coeffs[it->second].push_back(MTerm{std::move(pe), tm.c});
    }
    for (int u = 0; u < s; u++) mp_norm(SP, coeffs[u]);
    return coeffs;
  };
  // prod[u][v][w]: m_u·m_v = Σ_w prod[u][v][w]·m_w
  std::vector<std::vector<std::vector<MPoly>>> prod(s);
  for (int u = 0; u < s; u++) {
    prod[u].resize(s);
    for (int v = u; v < s; v++) {
      Expo e(JR.nY, 0);
      for (int i = 0; i < JR.nY; i++) e[i] = FD.mons[u][i] + FD.mons[v][i];
      prod[u][v] = split_nf(ymon(JR, e));
    }
    for (int v = 0; v < u; v++) prod[u][v] = prod[v][u];
  }
  // act[j][u][v]: x_j·m_u = Σ_v act[j][u][v]·m_v
  std::vector<std::vector<std::vector<MPoly>>> act(n);
  for (int j = 0; j < n; j++) {
    act[j].resize(s);
    for (int u = 0; u < s; u++) {
      Expo e = FD.mons[u];
      e[j] += 1;
      act[j][u] = split_nf(ymon(JR, e));
    }
  }

  // Arens machinery on explicit value vectors
  auto apply_eps = [&](const std::vector<MPoly>& evals, const MVec& dval) {
    // evals: ε(δ_g) per g; dval: values of a hom ψ ∈ D on the m_u
    std::vector<MPoly> c = express_in(SP, gbD, g1, dval);
    MPoly out;
    for (int g = 0; g < g1; g++) {
      if (mp_is_zero(c[g])) continue;
      out = mp_add(SP, out, mp_mul(SP, c[g], evals[g]));
    }
    return out;
  };
  auto star = [&](const std::vector<MPoly>& evals, const MVec& dval) {
    // (ε ⋆ ψ)(m_u) = ε(ψ∘μ_{m_u})
    MVec out(s);
    for (int u = 0; u < s; u++) {
      MVec psi(s);
      for (int v = 0; v < s; v++) {
        MPoly acc;
        for (int w = 0; w < s; w++) {
          if (mp_is_zero(prod[u][v][w]) || mp_is_zero(dval[w])) continue;
          acc = mp_add(SP, acc, mp_mul(SP, prod[u][v][w], dval[w]));
        }
        psi[v] = std::move(acc);
      }
      out[u] = apply_eps(evals, psi);
    }
    return out;
  };
  auto eps_values = [&](int e) {
    std::vector<MPoly> v(g1);
    for (int g = 0; g < g1; g++) v[g] = epsv(e, g);
    return v;
  };
  auto arens_product = [&](int e1, int e2) {
    // values of ε_{e1}·ε_{e2} on the δ_g
    MVec out(g1);
    auto v1 = eps_values(e1);
    auto v2 = eps_values(e2);
    for (int g = 0; g < g1; g++) {
      MVec dg(s);
      for (int u = 0; u < s; u++) dg[u] = del(g, u);
      MVec sd = star(v2, dg);
      out[g] = apply_eps(v1, sd);
    }
    return out;
  };

  // natural map ν(m_u) and the isomorphism test
  std::vector<MVec> nu(s);
  for (int u = 0; u < s; u++) {
    MVec w(g1);
    for (int g = 0; g < g1; g++) w[g] = del(g, u);
    nu[u] = std::move(w);
  }
  {
    std::vector<MVec> lift;
    for (int u = 0; u < s; u++) {
      auto c = express_in(SP, gbE, g2, nu[u]);
      MVec w(g2);
      for (int e = 0; e < g2; e++) w[e] = c[e];
      lift.push_back(std::move(w));
    }
    ModuleMorphism nuMor = mor_make(M, H2.hom, lift);
    KerImCoker kic = kernel_image_cokernel(nuMor);
    if (mod_is_zero(kic.coker)) return nullptr;
  }

  // assemble the algebra on generators W_e over k[X]
  std::vector<std::string> wn;
  {
    std::vector<std::string> taken = S->vars;
    for (int e = 0; e < g2; e++) {
      wn.push_back(fresh_name("w" + std::to_string(e + 1), taken));
      taken.push_back(wn.back());
    }
  }
  std::vector<std::string> names = S->vars;
  for (const std::string& w : wn) names.push_back(w);
  RingPtr SB = PolyRing::make(S->K, names);
  std::vector<MPoly> imgX(n);
  for (int i = 0; i < n; i++) imgX[i] = mp_var(SB, i);
  auto liftX = [&](const MPoly& g) { return mp_map(S, g, SB, imgX); };
  auto pmap = [&](const MPoly& p) {
    // u_i ↦ noe.images[i], then into SB
    return liftX(mp_map(SP, p, S, noe.images));
  };

  Ideal rels;
  for (const MPoly& g : A->I) rels.push_back(liftX(g));
  for (const MVec& r : H2.hom.rels) {
    MPoly lin;
    for (int e = 0; e < g2; e++) {
      if (mp_is_zero(r[e])) continue;
      lin = mp_add(SB, lin, mp_mul(SB, pmap(r[e]), mp_var(SB, n + e)));
    }
    if (!mp_is_zero(lin)) rels.push_back(std::move(lin));
  }
  for (int j = 0; j < n; j++)
    for (int e = 0; e < g2; e++) {
      // x_j·ε_e expressed on the ε's
      MVec vals(g1);
      auto ev = eps_values(e);
      for (int g = 0; g < g1; g++) {
        MVec dg(s);
        for (int u = 0; u < s; u++) {
          MPoly acc;
          for (int v = 0; v < s; v++) {
            if (mp_is_zero(act[j][u][v])) continue;
            acc = mp_add(SP, acc, mp_mul(SP, act[j][u][v], del(g, v)));
          }
          dg[u] = std::move(acc);
        }
        vals[g] = apply_eps(ev, dg);
      }
      auto c = express_in(SP, gbE, g2, vals);
      MPoly row = mp_mul(SB, mp_var(SB, j), mp_var(SB, n + e));
      for (int t = 0; t < g2; t++) {
        if (mp_is_zero(c[t])) continue;
        row = mp_sub(SB, row, mp_mul(SB, pmap(c[t]), mp_var(SB, n + t)));
      }
      rels.push_back(std::move(row));
    }
  for (int e1 = 0; e1 < g2; e1++)
    for (int e2 = e1; e2 < g2; e2++) {
      auto c = express_in(SP, gbE, g2, arens_product(e1, e2));
      MPoly quad = mp_mul(SB, mp_var(SB, n + e1), mp_var(SB, n + e2));
      for (int t = 0; t < g2; t++) {
        if (mp_is_zero(c[t])) continue;
        quad = mp_sub(SB, quad, mp_mul(SB, pmap(c[t]), mp_var(SB, n + t)));
      }
      rels.push_back(std::move(quad));
    }
  {
    int u0 = -1;
    for (size_t u = 0; u < FD.mons.size(); u++)
      if (mono_deg(FD.mons[u]) == 0) u0 = (int)u;
    if (u0 < 0) fail("Internal", "missing unit monomial");
    auto c = express_in(SP, gbE, g2, nu[u0]);
    MPoly one = mp_from_int(SB, 1);
    for (int t = 0; t < g2; t++) {
      if (mp_is_zero(c[t])) continue;
      one = mp_sub(SB, one, mp_mul(SB, pmap(c[t]), mp_var(SB, n + t)));
    }
    rels.push_back(std::move(one));
  }
  return QuotientRing::make(SB, rels);
}

struct DomainNorm {
  QRingPtr tilde;
  int iterations = 0;
  bool s2 = false;
  std::optional<Int> cap;
};

bool basis_has_unit(const Ideal& I) {
  for (const MPoly& f : I)
    if (!f.empty() && mp_total_deg(f) == 0) return true;
  return false;
}

DomainNorm normalize_domain(QRingPtr A) {
  DomainNorm out;
  const RingPtr& S0 = A->S;
  int n0 = S0->nvars();
  int d = A->dim();

  // test ideal: the singular locus of the input presentation.  Every later
  // ring contains A and agrees with it outside V(J0), so non-normality stays
  // inside V(J0·A') and the criterion End(√(J0·A')) = A' remains valid.
  Ideal J0 = sing_ideal(S0, A->I);

  if (d >= 2) {
    QRingPtr A2 = s2_closure(A);
    if (A2) A = A2;
    out.s2 = true;
  }

  while (true) {
    const RingPtr& S = A->S;
    std::vector<MPoly> imgX(n0);
    for (int j = 0; j < n0; j++) imgX[j] = mp_var(S, j);
    Ideal lifted;
    for (const MPoly& g : J0) lifted.push_back(mp_map(S0, g, S, imgX));
    Ideal IJ = ideal_radical(S, qr_ideal(A, lifted));
    if (basis_has_unit(IJ)) break;
    MPoly x;
    for (const MPoly& g : IJ)
      if (!A->is_zero_elt(g)) {
        x = g;
        break;
      }
    if (mp_is_zero(x)) fail("Internal", "test ideal vanished on the component");

    if (d == 1 && !out.cap) {
      Int cap = 0;
      ModulePresentation free1 = mod_free(A, 1);
      for (auto& c : primary_decomposition(S, qr_ideal(A, {x})))
        if (c.dim == 0) cap += mult_upper_bound(A, c.primary, free1);
      out.cap = cap;
    }

    Ideal xJ;
    for (const MPoly& g : IJ) xJ.push_back(mp_mul(S, x, g));
    for (const MPoly& g : A->I) xJ.push_back(g);
    Ideal H = reduced_basis(S, ideal_colon(S, xJ, IJ));

    Ideal xA = qr_ideal(A, {x});
    GB gbx = groebner_ideal(S, xA);
    bool grows = false;
    for (const MPoly& h : H)
      if (!ideal_member(S, gbx, h, nullptr)) {
        grows = true;
        break;
      }
    if (!grows) break;

    A = end_ring(A, x, H);
    out.iterations++;
    if (out.iterations > 200) fail("Internal", "normalization loop runaway");
  }
  out.tilde = A;
  return out;
}

}  // namespace

NormalizeResult normalize(const QRingPtr& A) {
  const RingPtr& S = A->S;
  if (!S->K->is_perfect())
    fail("UsageError", "normalization requires a perfect coefficient field");
  if (A->is_zero_ring()) fail("ZeroRing", "cannot normalize the zero ring");
  if (!ideal_eq(S, ideal_radical(S, A->I), A->I))
    fail("NotReduced", "normalization requires a reduced ring");

  auto primes = minimal_primes(S, A->I);
  std::vector<DomainNorm> parts;
  for (const Ideal& P : primes)
    parts.push_back(normalize_domain(QuotientRing::make(S, P)));

  NormalizeResult out;
  for (auto& p : parts) {
    out.iterations += p.iterations;
    if (p.s2) out.s2_applied = true;
    out.components.push_back(p.tilde);
  }
  if (A->dim() == 1) {
    Int cap = 0;
    for (auto& p : parts)
      if (p.cap) cap += *p.cap;
    out.iterationCap = cap;
  }

  int n = S->nvars();
  if (parts.size() == 1) {
    out.tilde = parts[0].tilde;
    std::vector<MPoly> images;
    for (int j = 0; j < n; j++) images.push_back(mp_var(out.tilde->S, j));
    out.map = alg_morphism(A, out.tilde, images);
    return out;
  }

  int k = (int)parts.size();
  std::vector<std::string> names;
  std::vector<int> offs(k, 0);
  {
    std::vector<std::string> taken;
    for (int i = 0; i < k; i++) {
      names.push_back(fresh_name("e" + std::to_string(i + 1), taken));
      taken.push_back(names.back());
    }
    for (int i = 0; i < k; i++) {
      offs[i] = (int)names.size();
      for (const std::string& v : parts[i].tilde->S->vars) {
        names.push_back(fresh_name(v + "_" + std::to_string(i + 1), taken));
        taken.push_back(names.back());
      }
    }
  }
  RingPtr SB = PolyRing::make(S->K, names);
  Ideal rels;
  for (int i = 0; i < k; i++)
    for (int j = i + 1; j < k; j++)
      rels.push_back(mp_mul(SB, mp_var(SB, i), mp_var(SB, j)));
  for (int i = 0; i < k; i++)
    rels.push_back(mp_sub(SB, mp_mul(SB, mp_var(SB, i), mp_var(SB, i)),
                          mp_var(SB, i)));
  {
    MPoly sum;
    for (int i = 0; i < k; i++) sum = mp_add(SB, sum, mp_var(SB, i));
    rels.push_back(mp_sub(SB, sum, mp_from_int(SB, 1)));
  }
  for (int i = 0; i < k; i++) {
    const RingPtr& Si = parts[i].tilde->S;
    std::vector<MPoly> img(Si->nvars());
    for (int j = 0; j < Si->nvars(); j++) img[j] = mp_var(SB, offs[i] + j);
    for (const MPoly& g : parts[i].tilde->I) rels.push_back(mp_map(Si, g, SB, img));
    for (int j = 0; j < Si->nvars(); j++) {
      MPoly v = mp_var(SB, offs[i] + j);
      rels.push_back(mp_sub(SB, v, mp_mul(SB, v, mp_var(SB, i))));
    }
  }
  out.tilde = QuotientRing::make(SB, rels);
  std::vector<MPoly> images(n);
  for (int j = 0; j < n; j++) {
    MPoly im;
    for (int i = 0; i < k; i++) im = mp_add(SB, im, mp_var(SB, offs[i] + j));
    images[j] = im;
  }
  out.map = alg_morphism(A, out.tilde, images);
  return out;
}

}  // namespace effalg
