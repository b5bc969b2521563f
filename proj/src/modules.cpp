#include "effalg/modules.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <string>

#include "effalg/upoly.hpp"
#include "localize.hpp"

namespace effalg {

namespace {

const FieldPtr& Qf() {
  static FieldPtr q = Field::Q();
  return q;
}

MVec unit_vec(int rank, int c, const MPoly& f) {
  MVec v = mv_zero(rank);
  v[c] = f;
  return v;
}

std::vector<MVec> absorb_rows(const RingPtr& S, const Ideal& I, int rank) {
  std::vector<MVec> out;
  for (const MPoly& f : I)
    for (int c = 0; c < rank; c++) out.push_back(unit_vec(rank, c, f));
  return out;
}

/// Σ_c coeffs[c]·cols[c]
MVec apply_cols(const RingPtr& S, const std::vector<MVec>& cols, const MVec& coeffs) {
  MVec out;
  for (size_t c = 0; c < cols.size(); c++) {
    if (mp_is_zero(coeffs[c])) continue;
    MVec t = mv_scale(S, coeffs[c], cols[c]);
    out = out.empty() ? t : mv_add(S, out, t);
  }
  if (out.empty() && !cols.empty()) out = mv_zero((int)cols[0].size());
  return out;
}

/// homogeneity of a row; *deg gets INT_MIN for the zero row
bool row_degree(const MVec& v, const std::vector<int>& shifts, int* deg) {
  bool found = false;
  int d = 0;
  for (int c = 0; c < (int)v.size(); c++)
    for (const MTerm& t : v[c]) {
      int td = mono_deg(t.e) + (shifts.empty() ? 0 : shifts[c]);
      if (!found) {
        d = td;
        found = true;
      } else if (td != d) {
        return false;
      }
    }
  if (deg) *deg = found ? d : INT_MIN;
  return true;
}

struct LeadData {
  std::vector<Expo> leads;
  bool unit = false;
};

LeadData ideal_leads(const RingPtr& S, const Ideal& gens) {
  GB gb = groebner_ideal(S, gens);
  LeadData out;
  for (const MVec& r : gb.basis) {
    if (mono_deg(r[0][0].e) == 0) {
      out.unit = true;
      return out;
    }
    out.leads.push_back(r[0][0].e);
  }
  return out;
}

bool leads_independent(const std::vector<Expo>& leads, unsigned mask, int n) {
  for (const Expo& e : leads) {
    bool inside = true;
    for (int j = 0; j < n && inside; j++)
      if (e[j] > 0 && !((mask >> j) & 1u)) inside = false;
    if (inside) return false;
  }
  return true;
}

bool staircase_finite(int nv, const std::vector<Expo>& leads) {
  for (const Expo& e : leads)
    if (mono_deg(e) == 0) return true;
  for (int j = 0; j < nv; j++) {
    bool found = false;
    for (const Expo& e : leads) {
      if (e[j] == 0) continue;
      bool pure = true;
      for (int l = 0; l < nv && pure; l++)
        if (l != j && e[l] > 0) pure = false;
      if (pure) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

/// number of monomials outside the staircase (assumes finiteness)
Int staircase_count(int nv, const std::vector<Expo>& leads) {
  for (const Expo& e : leads)
    if (mono_deg(e) == 0) return 0;
  Expo cur(nv, 0);
  std::function<Int(int)> rec = [&](int idx) -> Int {
    if (idx == nv) return Int(1);
    Int total = 0;
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
      total += rec(idx + 1);
    }
    cur[idx] = 0;
    return total;
  };
  return rec(0);
}

Int binom_int(long m, long k) {
  if (k < 0 || m < 0 || m < k) return 0;
  Int out = 1;
  for (long i = 1; i <= k; i++) {
    out *= Int(m - k + i);
    out /= Int(i);
  }
  return out;
}

Int factorial(int k) {
  Int out = 1;
  for (int i = 2; i <= k; i++) out *= i;
  return out;
}

/// C(n + a, k) as a polynomial in n over ℚ
UPoly ubinom(int k, long a) {
  const FieldPtr& Q = Qf();
  UPoly acc{Q->one()};
  for (int t = 0; t < k; t++) {
    UPoly lin{Q->from_rat(Rat((long)(a - t))), Q->one()};
    acc = upmul(Q, acc, lin);
  }
  return upscale(Q, Q->from_rat(Rat(1) / Rat(factorial(k))), acc);
}

void finish_hilbert(HilbertData& H) {
  int dg = updeg(H.poly);
  if (dg < 0) {
    bool nz = false;
    Int sum = 0;
    for (const Int& v : H.values) {
      if (v != 0) nz = true;
      sum += v;
    }
    H.dimension = nz ? 0 : -1;
    H.multiplicity = sum;
  } else {
    H.dimension = dg + 1;
    Rat lc = std::get<Rat>(H.poly[dg].v);
    Rat mu = lc * Rat(factorial(dg));
    if (mu.get_den() != 1) fail("Internal", "non-integral multiplicity");
    H.multiplicity = mu.get_num();
  }
}

std::vector<MVec> prune_rows(const RingPtr& S, const Ideal& I, int rank,
                             std::vector<MVec> rows) {
  {
    std::vector<MVec> nz;
    for (auto& v : rows)
      if (!mv_is_zero(v)) nz.push_back(std::move(v));
    rows = std::move(nz);
  }
  size_t i = 0;
  while (i < rows.size()) {
    std::vector<MVec> others;
    for (size_t j = 0; j < rows.size(); j++)
      if (j != i) others.push_back(rows[j]);
    for (auto& v : absorb_rows(S, I, rank)) others.push_back(std::move(v));
    GB gb = groebner(S, rank, others);
    if (membership(S, gb, rows[i]))
      rows.erase(rows.begin() + (long)i);
    else
      i++;
  }
  return rows;
}

std::vector<MVec> blockRels(const RingPtr& S, int rk, int nQ,
                            const std::vector<MVec>& qrels) {
  std::vector<MVec> rows;
  for (int u = 0; u < rk; u++)
    for (const MVec& s : qrels) {
      MVec row = mv_zero(rk * nQ);
      for (int c = 0; c < nQ; c++) row[u * nQ + c] = s[c];
      if (!mv_is_zero(row)) rows.push_back(row);
    }
  return rows;
}

std::vector<MVec> intersect_raw(const RingPtr& S, int rank,
                                const std::vector<MVec>& U,
                                const std::vector<MVec>& V) {
  std::vector<MVec> rows = U;
  for (const MVec& v : V) rows.push_back(v);
  auto syz = syzygies(S, rank, rows);
  std::vector<MVec> out;
  for (const MVec& row : syz) {
    MVec w = mv_zero(rank);
    for (size_t c = 0; c < U.size(); c++) {
      if (mp_is_zero(row[c])) continue;
      w = mv_add(S, w, mv_scale(S, row[c], U[c]));
    }
    if (!mv_is_zero(w)) out.push_back(w);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// quotient rings

QRingPtr QuotientRing::make(const RingPtr& S, const Ideal& gens) {
  auto q = std::make_shared<QuotientRing>();
  q->S = S;
  q->gb = groebner_ideal(S, gens);
  for (const MVec& r : q->gb.basis) q->I.push_back(r[0]);
  return q;
}

MPoly QuotientRing::nf(const MPoly& f) const { return nf_ideal(S, gb, f); }
bool QuotientRing::is_zero_elt(const MPoly& f) const { return mp_is_zero(nf(f)); }
bool QuotientRing::elt_eq(const MPoly& f, const MPoly& g) const {
  return is_zero_elt(mp_sub(S, f, g));
}
bool QuotientRing::is_zero_ring() const { return ideal_contains_one(S, I); }
bool QuotientRing::is_unit(const MPoly& f) const {
  Ideal J = I;
  J.push_back(f);
  return ideal_contains_one(S, J);
}
int QuotientRing::dim() const { return ideal_dim(S, I); }

bool qring_eq(const QRingPtr& A, const QRingPtr& B) {
  if (A.get() == B.get()) return true;
  if (!A || !B) return false;
  const RingPtr& S1 = A->S;
  const RingPtr& S2 = B->S;
  if (S1.get() != S2.get()) {
    if (S1->K->descriptor() != S2->K->descriptor()) return false;
    if (S1->vars != S2->vars) return false;
    if (S1->ord.kind != S2->ord.kind || S1->ord.block != S2->ord.block) return false;
  }
  if (A->I.size() != B->I.size()) return false;
  for (size_t i = 0; i < A->I.size(); i++)
    if (!mp_eq(A->S, A->I[i], B->I[i])) return false;
  return true;
}

Ideal qr_ideal(const QRingPtr& A, const Ideal& gens) {
  Ideal all = A->I;
  for (const MPoly& f : gens) all.push_back(f);
  GB gb = groebner_ideal(A->S, all);
  Ideal out;
  for (const MVec& r : gb.basis) out.push_back(r[0]);
  return out;
}

// ---------------------------------------------------------------------------
// dimension helpers

int ideal_dim(const RingPtr& S, const Ideal& Igens) {
  LeadData L = ideal_leads(S, Igens);
  if (L.unit) return -1;
  int n = S->nvars();
  if (n > 24) fail("Internal", "too many variables for dimension search");
  int best = 0;
  for (unsigned mask = 0; mask < (1u << n); mask++) {
    int size = __builtin_popcount(mask);
    if (size <= best) continue;
    if (leads_independent(L.leads, mask, n)) best = size;
  }
  return best;
}

std::vector<int> max_independent_set(const RingPtr& S, const Ideal& Igens) {
  LeadData L = ideal_leads(S, Igens);
  if (L.unit) return {};
  int n = S->nvars();
  int d = ideal_dim(S, Igens);
  if (d <= 0) return {};
  std::vector<int> c(d);
  for (int i = 0; i < d; i++) c[i] = i;
  while (true) {
    unsigned mask = 0;
    for (int i : c) mask |= (1u << i);
    if (leads_independent(L.leads, mask, n)) return c;
    int i = d - 1;
    while (i >= 0 && c[i] == n - d + i) i--;
    if (i < 0) break;
    c[i]++;
    for (int j = i + 1; j < d; j++) c[j] = c[j - 1] + 1;
  }
  fail("Internal", "no independent set of maximal size");
}

Int ideal_vdim(const RingPtr& S, const Ideal& Igens) {
  LeadData L = ideal_leads(S, Igens);
  if (L.unit) return 0;
  if (!staircase_finite(S->nvars(), L.leads))
    fail("UsageError", "ideal is not zero-dimensional");
  return staircase_count(S->nvars(), L.leads);
}

// ---------------------------------------------------------------------------
// presentations

ModulePresentation mod_make(const QRingPtr& R, int rank, std::vector<MVec> rels,
                            std::vector<int> shifts) {
  if (rank < 0) fail("SchemaError", "negative module rank");
  if (!shifts.empty() && (int)shifts.size() != rank)
    fail("SchemaError", "shift count does not match the rank");
  for (const MVec& v : rels)
    if ((int)v.size() != rank) fail("SchemaError", "relation vector of wrong rank");
  for (auto& v : absorb_rows(R->S, R->I, rank)) rels.push_back(std::move(v));
  ModulePresentation M;
  M.R = R;
  M.rank = rank;
  for (auto& v : rels)
    if (!mv_is_zero(v)) M.rels.push_back(std::move(v));
  M.relgb = groebner(R->S, rank, M.rels);
  M.shifts = std::move(shifts);
  return M;
}

ModulePresentation mod_free(const QRingPtr& R, int rank, std::vector<int> shifts) {
  return mod_make(R, rank, {}, std::move(shifts));
}

ModulePresentation mod_cyclic(const QRingPtr& R, const Ideal& J) {
  std::vector<MVec> rels;
  for (const MPoly& f : J) rels.push_back(MVec{f});
  return mod_make(R, 1, std::move(rels));
}

bool mod_is_zero(const ModulePresentation& M) {
  for (int c = 0; c < M.rank; c++) {
    MVec e = unit_vec(M.rank, c, mp_from_int(M.R->S, 1));
    if (!membership(M.R->S, M.relgb, e)) return false;
  }
  return true;
}

static std::vector<std::vector<Expo>> comp_leads(const ModulePresentation& M) {
  std::vector<std::vector<Expo>> leads(M.rank);
  for (const MVec& r : M.relgb.basis) {
    MvLead l = mv_lead(M.R->S, r);
    leads[l.comp].push_back(l.e);
  }
  return leads;
}

bool mod_finite_dim(const ModulePresentation& M) {
  auto leads = comp_leads(M);
  int n = M.R->S->nvars();
  for (int c = 0; c < M.rank; c++)
    if (!staircase_finite(n, leads[c])) return false;
  return true;
}

Int mod_vdim(const ModulePresentation& M) {
  if (!mod_finite_dim(M)) fail("UsageError", "module is not finite-dimensional");
  auto leads = comp_leads(M);
  int n = M.R->S->nvars();
  Int total = 0;
  for (int c = 0; c < M.rank; c++) total += staircase_count(n, leads[c]);
  return total;
}

ModulePresentation mod_subquotient(const QRingPtr& R, int rank,
                                   const std::vector<MVec>& gens,
                                   const std::vector<MVec>& rels) {
  const RingPtr& S = R->S;
  std::vector<MVec> rows = gens;
  for (const MVec& v : rels) rows.push_back(v);
  for (auto& v : absorb_rows(S, R->I, rank)) rows.push_back(std::move(v));
  auto syz = syzygies(S, rank, rows);
  int g = (int)gens.size();
  std::vector<MVec> newrels;
  for (const MVec& row : syz) {
    MVec r(row.begin(), row.begin() + g);
    if (!mv_is_zero(r)) newrels.push_back(std::move(r));
  }
  return mod_make(R, g, std::move(newrels));
}

// ---------------------------------------------------------------------------
// morphisms

ModuleMorphism mor_make(ModulePresentation src, ModulePresentation dst,
                        std::vector<MVec> lift) {
  if (!qring_eq(src.R, dst.R)) fail("RingMismatch", "morphism across different rings");
  if ((int)lift.size() != src.rank)
    fail("IllFormedMorphism", "lift must give an image for each ambient generator");
  for (const MVec& v : lift)
    if ((int)v.size() != dst.rank)
      fail("IllFormedMorphism", "lift vector of wrong rank");
  const RingPtr& S = src.R->S;
  for (const MVec& r : src.rels) {
    MVec img = apply_cols(S, lift, r);
    if (!img.empty() && !membership(S, dst.relgb, img))
      fail("IllFormedMorphism", "relations do not map into relations");
  }
  ModuleMorphism a;
  a.src = std::move(src);
  a.dst = std::move(dst);
  a.lift = std::move(lift);
  return a;
}

ModuleMorphism mor_zero(const ModulePresentation& src, const ModulePresentation& dst) {
  std::vector<MVec> lift(src.rank, mv_zero(dst.rank));
  return mor_make(src, dst, std::move(lift));
}

ModuleMorphism mor_identity(const ModulePresentation& M) {
  std::vector<MVec> lift;
  for (int c = 0; c < M.rank; c++)
    lift.push_back(unit_vec(M.rank, c, mp_from_int(M.R->S, 1)));
  return mor_make(M, M, std::move(lift));
}

ModuleMorphism mor_compose(const ModuleMorphism& g, const ModuleMorphism& f) {
  if (f.dst.rank != g.src.rank || !qring_eq(f.dst.R, g.src.R))
    fail("IllFormedMorphism", "composition ranks do not match");
  const RingPtr& S = f.src.R->S;
  std::vector<MVec> lift;
  for (const MVec& v : f.lift) lift.push_back(apply_cols(S, g.lift, v));
  return mor_make(f.src, g.dst, std::move(lift));
}

MVec mor_apply(const ModuleMorphism& a, const MVec& v) {
  if ((int)v.size() != a.src.rank) fail("SchemaError", "vector of wrong rank");
  const RingPtr& S = a.src.R->S;
  MVec img = apply_cols(S, a.lift, v);
  if (img.empty()) img = mv_zero(a.dst.rank);
  return normal_form(S, a.dst.relgb, img);
}

bool mor_is_zero(const ModuleMorphism& a) {
  for (const MVec& v : a.lift)
    if (!membership(a.src.R->S, a.dst.relgb, v)) return false;
  return true;
}

KerImCoker kernel_image_cokernel(const ModuleMorphism& a) {
  const QRingPtr& R = a.src.R;
  const RingPtr& S = R->S;
  int nP = a.src.rank, nQ = a.dst.rank;
  KerImCoker out;

  std::vector<MVec> crels = a.dst.rels;
  for (const MVec& v : a.lift) crels.push_back(v);
  out.coker = mod_make(R, nQ, std::move(crels), a.dst.shifts);
  {
    std::vector<MVec> id;
    for (int c = 0; c < nQ; c++) id.push_back(unit_vec(nQ, c, mp_from_int(S, 1)));
    out.coker_proj = mor_make(a.dst, out.coker, std::move(id));
  }

  out.im = mod_subquotient(R, nQ, a.lift, a.dst.rels);
  if (!a.dst.shifts.empty()) {
    std::vector<int> sh;
    bool ok = true;
    for (int c = 0; c < nP && ok; c++) {
      int d;
      if (!row_degree(a.lift[c], a.dst.shifts, &d)) {
        ok = false;
        break;
      }
      if (d == INT_MIN) d = a.src.shifts.empty() ? 0 : a.src.shifts[c];
      sh.push_back(d);
    }
    if (ok) out.im.shifts = sh;
  }
  out.im_incl = mor_make(out.im, a.dst, a.lift);

  std::vector<MVec> rows = a.lift;
  for (const MVec& v : a.dst.rels) rows.push_back(v);
  auto syz = syzygies(S, nQ, rows);
  std::vector<MVec> kergens;
  for (const MVec& row : syz) {
    MVec g(row.begin(), row.begin() + nP);
    if (!mv_is_zero(g)) kergens.push_back(std::move(g));
  }
  out.ker = mod_subquotient(R, nP, kergens, a.src.rels);
  if (!a.src.shifts.empty()) {
    std::vector<int> sh;
    bool ok = true;
    for (const MVec& g : kergens) {
      int d;
      if (!row_degree(g, a.src.shifts, &d) || d == INT_MIN) {
        ok = false;
        break;
      }
      sh.push_back(d);
    }
    if (ok) out.ker.shifts = sh;
  }
  out.ker_incl = mor_make(out.ker, a.src, kergens);
  return out;
}

// ---------------------------------------------------------------------------
// tensor / hom

ModulePresentation mod_tensor(const ModulePresentation& P, const ModulePresentation& Q) {
  if (!qring_eq(P.R, Q.R)) fail("RingMismatch", "tensor across different rings");
  int nP = P.rank, nQ = Q.rank;
  std::vector<MVec> rels;
  for (const MVec& r : P.rels)
    for (int j = 0; j < nQ; j++) {
      MVec row = mv_zero(nP * nQ);
      for (int i = 0; i < nP; i++) row[i * nQ + j] = r[i];
      if (!mv_is_zero(row)) rels.push_back(std::move(row));
    }
  for (const MVec& s : Q.rels)
    for (int i = 0; i < nP; i++) {
      MVec row = mv_zero(nP * nQ);
      for (int j = 0; j < nQ; j++) row[i * nQ + j] = s[j];
      if (!mv_is_zero(row)) rels.push_back(std::move(row));
    }
  std::vector<int> sh;
  if (!P.shifts.empty() && !Q.shifts.empty()) {
    sh.resize(nP * nQ);
    for (int i = 0; i < nP; i++)
      for (int j = 0; j < nQ; j++) sh[i * nQ + j] = P.shifts[i] + Q.shifts[j];
  }
  return mod_make(P.R, nP * nQ, std::move(rels), std::move(sh));
}

HomData mod_hom(const ModulePresentation& P, const ModulePresentation& Q) {
  if (!qring_eq(P.R, Q.R)) fail("RingMismatch", "hom across different rings");
  const QRingPtr& R = P.R;
  int nP = P.rank, nQ = Q.rank, mP = (int)P.rels.size();

  bool graded = !P.shifts.empty() && !Q.shifts.empty();
  std::vector<int> reldeg(mP, 0);
  if (graded)
    for (int l = 0; l < mP && graded; l++) {
      int d;
      if (!row_degree(P.rels[l], P.shifts, &d) || d == INT_MIN) graded = false;
      reldeg[l] = d;
    }

  std::vector<int> sh0, sh1;
  if (graded) {
    sh0.resize(nP * nQ);
    for (int u = 0; u < nP; u++)
      for (int c = 0; c < nQ; c++) sh0[u * nQ + c] = Q.shifts[c] - P.shifts[u];
    sh1.resize(mP * nQ);
    for (int l = 0; l < mP; l++)
      for (int c = 0; c < nQ; c++) sh1[l * nQ + c] = Q.shifts[c] - reldeg[l];
  }

  ModulePresentation H0 =
      mod_make(R, nP * nQ, blockRels(R->S, nP, nQ, Q.rels), sh0);
  ModulePresentation H1 =
      mod_make(R, mP * nQ, blockRels(R->S, mP, nQ, Q.rels), sh1);

  std::vector<MVec> lifts(nP * nQ);
  for (int u = 0; u < nP; u++)
    for (int c = 0; c < nQ; c++) {
      MVec v = mv_zero(mP * nQ);
      for (int l = 0; l < mP; l++) v[l * nQ + c] = P.rels[l][u];
      lifts[u * nQ + c] = std::move(v);
    }
  ModuleMorphism delta = mor_make(H0, H1, std::move(lifts));
  KerImCoker kic = kernel_image_cokernel(delta);

  HomData out;
  out.hom = kic.ker;
  for (const MVec& g : kic.ker_incl.lift) {
    std::vector<MVec> mat(nP);
    for (int u = 0; u < nP; u++) {
      MVec w = mv_zero(nQ);
      for (int c = 0; c < nQ; c++) w[c] = g[u * nQ + c];
      mat[u] = std::move(w);
    }
    out.gen_maps.push_back(std::move(mat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// submodule operations

Ideal mod_transporter(const ModulePresentation& M, const std::vector<MVec>& N,
                      const std::vector<MVec>& Np) {
  const RingPtr& S = M.R->S;
  if (Np.empty()) return qr_ideal(M.R, {mp_from_int(S, 1)});
  Ideal acc;
  bool first = true;
  for (const MVec& nt : Np) {
    std::vector<MVec> rows{nt};
    for (const MVec& v : N) rows.push_back(v);
    for (const MVec& v : M.rels) rows.push_back(v);
    auto syz = syzygies(S, M.rank, rows);
    Ideal g;
    for (const MVec& row : syz)
      if (!mp_is_zero(row[0])) g.push_back(row[0]);
    GB gb = groebner_ideal(S, g);
    Ideal qt;
    for (const MVec& r : gb.basis) qt.push_back(r[0]);
    acc = first ? qt : ideal_intersect(S, acc, qt);
    first = false;
  }
  return qr_ideal(M.R, acc);
}

Ideal mod_annihilator(const ModulePresentation& M) {
  std::vector<MVec> Np;
  for (int c = 0; c < M.rank; c++)
    Np.push_back(unit_vec(M.rank, c, mp_from_int(M.R->S, 1)));
  return mod_transporter(M, {}, Np);
}

std::vector<MVec> mod_sum_sub(const std::vector<MVec>& N1, const std::vector<MVec>& N2) {
  std::vector<MVec> out;
  for (const MVec& v : N1)
    if (!mv_is_zero(v)) out.push_back(v);
  for (const MVec& v : N2)
    if (!mv_is_zero(v)) out.push_back(v);
  return out;
}

std::vector<MVec> mod_intersect_sub(const ModulePresentation& M,
                                    const std::vector<MVec>& N1,
                                    const std::vector<MVec>& N2) {
  const RingPtr& S = M.R->S;
  std::vector<MVec> U = N1, V = N2;
  for (const MVec& v : M.rels) {
    U.push_back(v);
    V.push_back(v);
  }
  return intersect_raw(S, M.rank, U, V);
}

std::vector<MVec> mod_colon_sub(const ModulePresentation& M,
                                const std::vector<MVec>& N, const Ideal& J) {
  const RingPtr& S = M.R->S;
  std::vector<MVec> units;
  for (int c = 0; c < M.rank; c++)
    units.push_back(unit_vec(M.rank, c, mp_from_int(S, 1)));
  std::vector<MVec> cur = units;
  bool first = true;
  for (const MPoly& g : J) {
    if (mp_is_zero(g)) continue;
    std::vector<MVec> A = N;
    for (const MVec& v : M.rels) A.push_back(v);
    std::vector<MVec> B;
    for (int c = 0; c < M.rank; c++) B.push_back(unit_vec(M.rank, c, g));
    auto W = intersect_raw(S, M.rank, A, B);
    std::vector<MVec> Kg;
    for (const MVec& w : W) {
      MVec x(M.rank);
      for (int c = 0; c < M.rank; c++)
        x[c] = mp_is_zero(w[c]) ? MPoly{} : mp_divide_exact(S, w[c], g);
      Kg.push_back(std::move(x));
    }
    cur = first ? Kg : mod_intersect_sub(M, cur, Kg);
    first = false;
  }
  return cur;
}

bool mod_sub_contains(const ModulePresentation& M, const std::vector<MVec>& N,
                      const MVec& v) {
  const RingPtr& S = M.R->S;
  std::vector<MVec> rows = N;
  for (const MVec& r : M.rels) rows.push_back(r);
  GB gb = groebner(S, M.rank, rows);
  return membership(S, gb, v);
}

bool mod_sub_eq(const ModulePresentation& M, const std::vector<MVec>& N1,
                const std::vector<MVec>& N2) {
  for (const MVec& v : N1)
    if (!mod_sub_contains(M, N2, v)) return false;
  for (const MVec& v : N2)
    if (!mod_sub_contains(M, N1, v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// resolutions, Tor, Ext

Resolution mod_resolution(const ModulePresentation& M, int length, bool prune) {
  Resolution res;
  const QRingPtr& R = M.R;
  const RingPtr& S = R->S;
  std::vector<int> curshift =
      M.shifts.empty() ? std::vector<int>(M.rank, 0) : M.shifts;
  bool tracking = true;
  res.ranks.push_back(M.rank);
  res.shifts.push_back(curshift);
  std::vector<MVec> cur = M.rels;
  int ambient = M.rank;
  while ((int)res.maps.size() < length) {
    if (prune) cur = prune_rows(S, R->I, ambient, cur);
    std::vector<int> degs;
    if (tracking)
      for (const MVec& v : cur) {
        int d;
        if (!row_degree(v, curshift, &d) || d == INT_MIN) {
          tracking = false;
          break;
        }
        degs.push_back(d);
      }
    res.maps.push_back(cur);
    res.ranks.push_back((int)cur.size());
    if (tracking) res.shifts.push_back(degs);
    if (cur.empty()) {
      res.complete = true;
      break;
    }
    std::vector<MVec> rows = cur;
    for (auto& v : absorb_rows(S, R->I, ambient)) rows.push_back(std::move(v));
    auto syz = syzygies(S, ambient, rows);
    std::vector<MVec> next;
    for (const MVec& row : syz) {
      MVec a(row.begin(), row.begin() + (long)cur.size());
      if (!mv_is_zero(a)) next.push_back(std::move(a));
    }
    ambient = (int)cur.size();
    curshift = tracking ? degs : std::vector<int>{};
    cur = std::move(next);
  }
  if (!tracking) res.shifts.clear();
  return res;
}

ModulePresentation mod_tor(const ModulePresentation& P, const ModulePresentation& Q,
                           int i) {
  if (!qring_eq(P.R, Q.R)) fail("RingMismatch", "tor across different rings");
  if (i < 0) fail("SchemaError", "negative homological index");
  const QRingPtr& R = P.R;
  const RingPtr& S = R->S;
  int nQ = Q.rank;
  Resolution res = mod_resolution(P, i + 1, false);
  auto rankAt = [&](int j) {
    return j < (int)res.ranks.size() ? res.ranks[j] : 0;
  };
  auto mapsAt = [&](int j) {
    return j < (int)res.maps.size() ? res.maps[j] : std::vector<MVec>{};
  };
  int rA = rankAt(i);
  if (rA == 0 || nQ == 0) return mod_make(R, 0, {});
  int rC = rA * nQ;

  std::vector<MVec> zgens;
  if (i == 0) {
    for (int c = 0; c < rC; c++) zgens.push_back(unit_vec(rC, c, mp_from_int(S, 1)));
  } else {
    int rPrev = rankAt(i - 1) * nQ;
    auto cols = mapsAt(i - 1);
    std::vector<MVec> rows;
    for (int u = 0; u < rA; u++)
      for (int v = 0; v < nQ; v++) {
        MVec col = mv_zero(rPrev);
        for (int w = 0; w < rankAt(i - 1); w++) col[w * nQ + v] = cols[u][w];
        rows.push_back(std::move(col));
      }
    for (auto& r : blockRels(S, rankAt(i - 1), nQ, Q.rels)) rows.push_back(std::move(r));
    for (auto& r : absorb_rows(S, R->I, rPrev)) rows.push_back(std::move(r));
    auto syz = syzygies(S, rPrev, rows);
    for (const MVec& row : syz) {
      MVec a(row.begin(), row.begin() + rC);
      if (!mv_is_zero(a)) zgens.push_back(std::move(a));
    }
  }

  std::vector<MVec> denom;
  auto cols1 = mapsAt(i);
  for (int u = 0; u < rankAt(i + 1); u++)
    for (int v = 0; v < nQ; v++) {
      MVec col = mv_zero(rC);
      for (int w = 0; w < rA; w++) col[w * nQ + v] = cols1[u][w];
      if (!mv_is_zero(col)) denom.push_back(std::move(col));
    }
  for (auto& r : blockRels(S, rA, nQ, Q.rels)) denom.push_back(std::move(r));
  return mod_subquotient(R, rC, zgens, denom);
}

ModulePresentation mod_ext(const ModulePresentation& P, const ModulePresentation& Q,
                           int i) {
  if (!qring_eq(P.R, Q.R)) fail("RingMismatch", "ext across different rings");
  if (i < 0) fail("SchemaError", "negative homological index");
  const QRingPtr& R = P.R;
  const RingPtr& S = R->S;
  int nQ = Q.rank;
  Resolution res = mod_resolution(P, i + 1, false);
  auto rankAt = [&](int j) {
    return j < (int)res.ranks.size() ? res.ranks[j] : 0;
  };
  auto mapsAt = [&](int j) {
    return j < (int)res.maps.size() ? res.maps[j] : std::vector<MVec>{};
  };
  int rA = rankAt(i), rB = rankAt(i + 1);
  if (rA == 0 || nQ == 0) return mod_make(R, 0, {});
  int rH = rA * nQ;

  std::vector<MVec> zgens;
  if (rB == 0) {
    for (int c = 0; c < rH; c++) zgens.push_back(unit_vec(rH, c, mp_from_int(S, 1)));
  } else {
    auto colsI = mapsAt(i);
    std::vector<MVec> rows;
    for (int u = 0; u < rA; u++)
      for (int c = 0; c < nQ; c++) {
        MVec w = mv_zero(rB * nQ);
        for (int u2 = 0; u2 < rB; u2++) w[u2 * nQ + c] = colsI[u2][u];
        rows.push_back(std::move(w));
      }
    for (auto& r : blockRels(S, rB, nQ, Q.rels)) rows.push_back(std::move(r));
    for (auto& r : absorb_rows(S, R->I, rB * nQ)) rows.push_back(std::move(r));
    auto syz = syzygies(S, rB * nQ, rows);
    for (const MVec& row : syz) {
      MVec a(row.begin(), row.begin() + rH);
      if (!mv_is_zero(a)) zgens.push_back(std::move(a));
    }
  }

  std::vector<MVec> denom;
  if (i >= 1) {
    int rPrev = rankAt(i - 1);
    auto colsPrev = mapsAt(i - 1);
    for (int w = 0; w < rPrev; w++)
      for (int c = 0; c < nQ; c++) {
        MVec v = mv_zero(rH);
        for (int u = 0; u < rA; u++) v[u * nQ + c] = colsPrev[u][w];
        if (!mv_is_zero(v)) denom.push_back(std::move(v));
      }
  }
  for (auto& r : blockRels(S, rA, nQ, Q.rels)) denom.push_back(std::move(r));
  return mod_subquotient(R, rH, zgens, denom);
}

// ---------------------------------------------------------------------------
// Hilbert data

bool mod_is_homogeneous(const ModulePresentation& M) {
  std::vector<int> sh = M.shifts.empty() ? std::vector<int>(M.rank, 0) : M.shifts;
  for (const MVec& v : M.rels) {
    int d;
    if (!row_degree(v, sh, &d)) return false;
  }
  return true;
}

HilbertData hilbert(const ModulePresentation& M) {
  const RingPtr& S = M.R->S;
  int d = S->nvars();
  std::vector<int> sh0 = M.shifts.empty() ? std::vector<int>(M.rank, 0) : M.shifts;
  for (const MVec& v : M.rels) {
    int dd;
    if (!row_degree(v, sh0, &dd)) fail("NonHomogeneous", "presentation is not graded");
  }
  HilbertData H;
  if (M.rank == 0) {
    H.values = {0, 0, 0};
    H.dimension = -1;
    return H;
  }
  QRingPtr Sq = QuotientRing::make(S, {});
  ModulePresentation MS = mod_make(Sq, M.rank, M.rels, sh0);
  Resolution res = mod_resolution(MS, d + 3, true);
  if (!res.complete) fail("Internal", "graded resolution did not terminate");
  if (res.shifts.size() < res.ranks.size())
    fail("Internal", "resolution lost the grading");

  const FieldPtr& Q = Qf();
  UPoly poly;
  int n0 = INT_MIN, lo = INT_MAX;
  for (int s : res.shifts[0]) lo = std::min(lo, s);
  for (size_t j = 0; j < res.shifts.size(); j++) {
    int sign = (j % 2 == 0) ? 1 : -1;
    for (int s : res.shifts[j]) {
      if (d >= 1) {
        UPoly term = ubinom(d - 1, (long)d - 1 - s);
        if (sign < 0) term = upneg(Q, term);
        poly = upadd(Q, poly, term);
        n0 = std::max(n0, s - d + 1);
      } else {
        n0 = std::max(n0, s + 1);
      }
    }
  }
  if (n0 == INT_MIN) n0 = 0;
  H.n0 = n0;
  H.lo = std::min(lo, n0);
  int hi = std::max(n0 + 2, H.lo);
  for (int n = H.lo; n <= hi; n++) {
    Int v = 0;
    for (size_t j = 0; j < res.shifts.size(); j++) {
      int sign = (j % 2 == 0) ? 1 : -1;
      for (int s : res.shifts[j]) {
        Int c = (d >= 1) ? binom_int((long)n - s + d - 1, d - 1)
                         : Int(n == s ? 1 : 0);
        v += sign > 0 ? c : -c;
      }
    }
    H.values.push_back(v);
  }
  H.poly = poly;
  finish_hilbert(H);
  return H;
}

Int hilbert_value(const HilbertData& H, int n) {
  if (n < H.lo) return 0;
  if (n - H.lo < (int)H.values.size()) return H.values[n - H.lo];
  if (updeg(H.poly) < 0) return 0;
  const FieldPtr& Q = Qf();
  FElem val = upeval(Q, H.poly, Q->from_rat(Rat((long)n)));
  Rat r = std::get<Rat>(val.v);
  if (r.get_den() != 1) fail("Internal", "non-integral hilbert value");
  return r.get_num();
}

// ---------------------------------------------------------------------------
// module elimination

std::vector<MVec> module_eliminate(const RingPtr& R, int rank,
                                   const std::vector<MVec>& rows,
                                   const std::vector<int>& elim, RingPtr* out_ring) {
  int n = R->nvars();
  std::vector<int> el = elim;
  std::sort(el.begin(), el.end());
  el.erase(std::unique(el.begin(), el.end()), el.end());
  std::vector<int> keep;
  for (int j = 0; j < n; j++)
    if (std::find(el.begin(), el.end(), j) == el.end()) keep.push_back(j);
  std::vector<std::string> knames;
  for (int k : keep) knames.push_back(R->vars[k]);
  RingPtr O = PolyRing::make(R->K, knames);
  if (out_ring) *out_ring = O;
  if (rank == 0 || rows.empty()) return {};
  if (el.empty()) {
    std::vector<MPoly> img(n);
    for (int j = 0; j < n; j++) img[j] = mp_var(O, j);
    std::vector<MVec> out;
    for (const MVec& v : rows) {
      MVec w(rank);
      for (int c = 0; c < rank; c++) w[c] = mp_map(R, v[c], O, img);
      if (!mv_is_zero(w)) out.push_back(std::move(w));
    }
    return out;
  }

  std::vector<std::string> bnames;
  for (int e : el) bnames.push_back(R->vars[e]);
  for (int k : keep) bnames.push_back(R->vars[k]);
  for (int c = 0; c < rank; c++) bnames.push_back("@e" + std::to_string(c));
  RingPtr B = PolyRing::make(R->K, bnames, MOrder{OrdKind::Block, (int)el.size()});

  std::vector<MPoly> img(n);
  for (size_t i = 0; i < el.size(); i++) img[el[i]] = mp_var(B, (int)i);
  for (size_t i = 0; i < keep.size(); i++)
    img[keep[i]] = mp_var(B, (int)(el.size() + i));

  Ideal gens;
  for (const MVec& row : rows) {
    MPoly enc;
    for (int c = 0; c < rank; c++) {
      if (mp_is_zero(row[c])) continue;
      enc = mp_add(B, enc, mp_mul(B, mp_map(R, row[c], B, img), mp_var(B, n + c)));
    }
    if (!mp_is_zero(enc)) gens.push_back(std::move(enc));
  }
  for (int i = 0; i < rank; i++)
    for (int j = i; j < rank; j++)
      gens.push_back(mp_mul(B, mp_var(B, n + i), mp_var(B, n + j)));

  GB gb = groebner_ideal(B, gens);
  std::vector<MVec> out;
  for (const MVec& bv : gb.basis) {
    const MPoly& f = bv[0];
    bool xfree = true;
    for (const MTerm& t : f)
      for (size_t i = 0; i < el.size() && xfree; i++)
        if (t.e[i] > 0) xfree = false;
    if (!xfree) continue;
    MVec w = mv_zero(rank);
    for (const MTerm& t : f) {
      int edeg = 0, comp = -1;
      for (int c = 0; c < rank; c++) {
        edeg += t.e[n + c];
        if (t.e[n + c] >= 1 && comp < 0) comp = c;
      }
      if (edeg != 1) continue;
      Expo ke(keep.size(), 0);
      for (size_t i = 0; i < keep.size(); i++) ke[i] = t.e[el.size() + i];
      w[comp].push_back(MTerm{std::move(ke), t.c});
    }
    for (int c = 0; c < rank; c++) mp_norm(O, w[c]);
    if (!mv_is_zero(w)) out.push_back(std::move(w));
  }
  std::sort(out.begin(), out.end(),
            [&](const MVec& a, const MVec& b) { return mv_cmp(O, a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end(),
                        [&](const MVec& a, const MVec& b) { return mv_eq(O, a, b); }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Rees algebra and associated graded

ReesData rees_and_graded(const QRingPtr& R, const Ideal& Jgens,
                         const ModulePresentation* M) {
  const RingPtr& S = R->S;
  int n = S->nvars();
  int r = (int)Jgens.size();
  if (M && !qring_eq(M->R, R)) fail("RingMismatch", "module over a different ring");

  ReesData out;
  for (int i = 0; i < r; i++) {
    std::string nm = "T" + std::to_string(i + 1);
    auto taken = [&](const std::string& s) {
      if (S->var_index(s) >= 0) return true;
      for (const std::string& t : out.tnames)
        if (t == s) return true;
      return false;
    };
    while (taken(nm)) nm += "_";
    out.tnames.push_back(nm);
  }

  std::vector<std::string> rtn{"@t"};
  for (const std::string& v : S->vars) rtn.push_back(v);
  for (const std::string& v : out.tnames) rtn.push_back(v);
  RingPtr Rt = PolyRing::make(S->K, rtn);
  std::vector<MPoly> imgS(n);
  for (int i = 0; i < n; i++) imgS[i] = mp_var(Rt, 1 + i);
  auto toRt = [&](const MPoly& f) { return mp_map(S, f, Rt, imgS); };

  std::vector<MPoly> graphs;
  for (int i = 0; i < r; i++)
    graphs.push_back(mp_sub(Rt, mp_var(Rt, 1 + n + i),
                            mp_mul(Rt, mp_var(Rt, 0), toRt(Jgens[i]))));
  Ideal Qi;
  for (const MPoly& f : R->I) Qi.push_back(toRt(f));
  for (const MPoly& g : graphs) Qi.push_back(g);

  std::vector<int> keepidx;
  for (int j = 1; j <= n + r; j++) keepidx.push_back(j);
  RingPtr ST;
  Ideal L = eliminate(Rt, Qi, keepidx, &ST);
  out.rees = QuotientRing::make(ST, L);

  std::vector<MPoly> imgST(n);
  for (int i = 0; i < n; i++) imgST[i] = mp_var(ST, i);
  Ideal G = L;
  for (const MPoly& f : Jgens) G.push_back(mp_map(S, f, ST, imgST));
  out.graded = QuotientRing::make(ST, G);
  for (int i = 0; i < r; i++) out.tvars.push_back(n + i);

  if (M) {
    int m = M->rank;
    std::vector<MVec> rows;
    for (const MVec& v : M->rels) {
      MVec w(m);
      for (int c = 0; c < m; c++) w[c] = toRt(v[c]);
      rows.push_back(std::move(w));
    }
    for (const MPoly& g : graphs)
      for (int c = 0; c < m; c++) rows.push_back(unit_vec(m, c, g));
    RingPtr Ot;
    auto LM = module_eliminate(Rt, m, rows, {0}, &Ot);
    std::vector<MPoly> io(Ot->nvars());
    for (int j = 0; j < Ot->nvars(); j++) io[j] = mp_var(ST, j);
    std::vector<MVec> LMst;
    for (const MVec& v : LM) {
      MVec w(m);
      for (int c = 0; c < m; c++) w[c] = mp_map(Ot, v[c], ST, io);
      LMst.push_back(std::move(w));
    }
    out.reesModule = mod_make(out.rees, m, LMst);
    out.gradedModule = mod_make(out.graded, m, LMst);
  }
  return out;
}

// ---------------------------------------------------------------------------
// multiplicity

namespace {

HilbertData cell_hilbert(int nv, const std::vector<int>& tpos,
                         const std::vector<std::vector<Expo>>& leads) {
  std::vector<int> zpos;
  for (int j = 0; j < nv; j++)
    if (std::find(tpos.begin(), tpos.end(), j) == tpos.end()) zpos.push_back(j);
  int r = (int)tpos.size();
  const FieldPtr& Q = Qf();

  struct CellTerm {
    Int c;
    int asz;
    long s;
  };
  std::vector<CellTerm> terms;

  for (const auto& lc : leads) {
    bool dead = false;
    for (const Expo& e : lc)
      if (mono_deg(e) == 0) dead = true;
    if (dead) continue;
    Expo G(r, 0);
    for (const Expo& e : lc)
      for (int j = 0; j < r; j++) G[j] = std::max(G[j], e[tpos[j]]);
    Expo gp(r, 0);
    while (true) {
      long s = 0;
      int asz = 0;
      for (int j = 0; j < r; j++) {
        if (gp[j] == G[j]) {
          asz++;
          s += G[j];
        } else {
          s += gp[j];
        }
      }
      std::vector<Expo> zl;
      for (const Expo& e : lc) {
        bool act = true;
        for (int j = 0; j < r && act; j++)
          if (gp[j] < G[j] && e[tpos[j]] > gp[j]) act = false;
        if (act) {
          Expo ze(zpos.size(), 0);
          for (size_t i = 0; i < zpos.size(); i++) ze[i] = e[zpos[i]];
          zl.push_back(std::move(ze));
        }
      }
      if (!staircase_finite((int)zpos.size(), zl))
        fail("Internal", "associated graded has an infinite fiber cell");
      Int c = staircase_count((int)zpos.size(), zl);
      if (c > 0) terms.push_back({c, asz, s});
      int j = 0;
      while (j < r) {
        if (gp[j] < G[j]) {
          gp[j]++;
          break;
        }
        gp[j] = 0;
        j++;
      }
      if (j == r) break;
    }
  }

  HilbertData H;
  H.lo = 0;
  UPoly poly;
  int n0 = 0;
  for (const CellTerm& t : terms) {
    if (t.asz == 0) {
      n0 = std::max(n0, (int)t.s + 1);
    } else {
      UPoly term = ubinom(t.asz - 1, (long)t.asz - 1 - t.s);
      term = upscale(Q, Q->from_rat(Rat(t.c)), term);
      poly = upadd(Q, poly, term);
      n0 = std::max(n0, (int)t.s - t.asz + 1);
    }
  }
  H.n0 = n0;
  for (int n = 0; n <= n0 + 2; n++) {
    Int v = 0;
    for (const CellTerm& t : terms) {
      if (t.asz == 0)
        v += (n == t.s) ? t.c : Int(0);
      else
        v += t.c * binom_int((long)n - t.s + t.asz - 1, t.asz - 1);
    }
    H.values.push_back(v);
  }
  H.poly = poly;
  finish_hilbert(H);
  return H;
}

HilbertData mult_data(const QRingPtr& R, const Ideal& P_S,
                      const ModulePresentation& M) {
  const RingPtr& S = R->S;
  int n = S->nvars();
  ReesData rd = rees_and_graded(R, P_S, &M);
  const ModulePresentation& GM = *rd.gradedModule;
  const RingPtr& ST = rd.graded->S;
  int m = GM.rank;

  std::vector<MVec> rows;
  for (const MVec& v : GM.rels) {
    std::map<int, MVec> parts;
    for (int c = 0; c < m; c++)
      for (const MTerm& t : v[c]) {
        int td = 0;
        for (int tv : rd.tvars) td += t.e[tv];
        auto& w = parts[td];
        if (w.empty()) w = mv_zero(m);
        w[c].push_back(t);
      }
    for (auto& pr : parts) {
      for (int c = 0; c < m; c++) mp_norm(ST, pr.second[c]);
      if (!mv_is_zero(pr.second)) rows.push_back(std::move(pr.second));
    }
  }

  std::vector<int> U = max_independent_set(S, P_S);
  LocalRing L = make_local(ST, U);
  std::vector<MVec> lrows;
  for (const MVec& v : rows) {
    MVec w(m);
    for (int c = 0; c < m; c++) w[c] = L.to_loc(v[c]);
    if (!mv_is_zero(w)) lrows.push_back(std::move(w));
  }

  LocalRing L2 = make_local(S, U);
  Ideal Ploc;
  for (const MPoly& f : P_S) {
    MPoly g = L2.to_loc(f);
    if (!mp_is_zero(g)) Ploc.push_back(std::move(g));
  }
  Int fk = ideal_vdim(L2.Sloc, Ploc);
  if (fk <= 0) fail("Internal", "localized prime is not maximal");

  GB gb = groebner(L.Sloc, m, lrows);
  std::vector<std::vector<Expo>> leads(m);
  for (const MVec& row : gb.basis) {
    MvLead l = mv_lead(L.Sloc, row);
    leads[l.comp].push_back(l.e);
  }
  std::vector<int> tpos;
  for (size_t j = 0; j < L.W.size(); j++)
    if (L.W[j] >= n) tpos.push_back((int)j);

  HilbertData H = cell_hilbert((int)L.W.size(), tpos, leads);
  const FieldPtr& Q = Qf();
  for (Int& v : H.values) {
    if (v % fk != 0) fail("Internal", "residue degree does not divide the count");
    v /= fk;
  }
  H.poly = upscale(Q, Q->from_rat(Rat(1) / Rat(fk)), H.poly);
  finish_hilbert(H);
  return H;
}

}  // namespace

Int multiplicity(const QRingPtr& R, const Ideal& prime, const ModulePresentation& M) {
  if (!qring_eq(M.R, R)) fail("RingMismatch", "module over a different ring");
  const RingPtr& S = R->S;
  Ideal P_S = qr_ideal(R, prime);
  if (ideal_contains_one(S, P_S) || !ideal_is_prime(S, P_S))
    fail("NotPrime", "localization requires a prime ideal");
  if (mod_is_zero(M)) return 0;
  HilbertData H = mult_data(R, P_S, M);
  return H.multiplicity;
}

Int mult_upper_bound(const QRingPtr& R, const Ideal& primaryIdeal,
                     const ModulePresentation& M) {
  if (!qring_eq(M.R, R)) fail("RingMismatch", "module over a different ring");
  const RingPtr& S = R->S;
  Ideal A_S = qr_ideal(R, primaryIdeal);
  if (ideal_contains_one(S, A_S)) fail("NotPrime", "the unit ideal is not primary");
  auto decomp = primary_decomposition(S, A_S);
  if (decomp.size() != 1) fail("NotPrime", "ideal is not primary");
  if (mod_is_zero(M)) return 0;
  HilbertData H = mult_data(R, decomp[0].prime, M);
  Int e = H.multiplicity;
  int d = std::max(H.dimension, 0);
  Int pw = 1;
  for (int i = 0; i < d; i++) pw *= Int(decomp[0].power);
  return e * pw;
}

}  // namespace effalg
