#include "effalg/groebner.hpp"

#include <algorithm>
#include <set>

namespace effalg {

namespace {

/// division with remainder against a fixed list of vectors; returns the
/// remainder and (optionally) the quotients, v = Σ q_k·basis_k + r
MVec nf_core(const RingPtr& R, const std::vector<MVec>& basis, const MVec& v,
             std::vector<MPoly>* quot) {
  if (quot) quot->assign(basis.size(), MPoly{});
  MVec work = v;
  MVec rem = mv_zero((int)v.size());
  while (!mv_is_zero(work)) {
    MvLead lead = mv_lead(R, work);
    int hit = -1;
    for (size_t k = 0; k < basis.size(); k++) {
      MvLead b = mv_lead(R, basis[k]);
      if (b.comp == lead.comp && mono_divides(b.e, lead.e)) {
        hit = (int)k;
        break;
      }
    }
    if (hit < 0) {
      rem[lead.comp] = mp_add(R, rem[lead.comp],
                              MPoly{MTerm{lead.e, lead.c}});
      work[lead.comp].erase(work[lead.comp].begin());
      continue;
    }
    MvLead b = mv_lead(R, basis[hit]);
    FElem t = R->K->div(lead.c, b.c);
    Expo e = mono_div(lead.e, b.e);
    work = mv_sub(R, work, mv_mul_term(R, t, e, basis[hit]));
    if (quot) (*quot)[hit] = mp_add(R, (*quot)[hit], MPoly{MTerm{e, t}});
  }
  return rem;
}

struct WElem {
  MVec v;
  std::vector<MPoly> rep;
  MvLead lt;
  int sugar = 0;
};

struct SPair {
  int sugar, deg, i, j;
  Expo lcm;
  bool operator<(const SPair& o) const {
    if (sugar != o.sugar) return sugar < o.sugar;
    if (deg != o.deg) return deg < o.deg;
    if (i != o.i) return i < o.i;
    return j < o.j;
  }
};

int mv_max_deg(const MVec& v) {
  int d = 0;
  for (auto& f : v) d = std::max(d, mp_total_deg(f));
  return d;
}

}  // namespace

GB groebner(const RingPtr& R, int rank, const std::vector<MVec>& gens) {
  const FieldPtr& K = R->K;
  int m = (int)gens.size();
  std::vector<WElem> G;
  std::set<SPair> pairs;

  auto insert = [&](MVec v, std::vector<MPoly> rep, int sugar) {
    MvLead lt = mv_lead(R, v);
    if (!K->is_one(lt.c)) {
      FElem s = K->inv(lt.c);
      for (auto& f : v) f = mp_scale(R, s, f);
      for (auto& f : rep) f = mp_scale(R, s, f);
      lt.c = K->one();
    }
    int n = (int)G.size();
    for (int k = 0; k < n; k++) {
      if (G[k].lt.comp != lt.comp) continue;
      Expo L = mono_lcm(G[k].lt.e, lt.e);
      int sug = std::max(G[k].sugar + mono_deg(L) - mono_deg(G[k].lt.e),
                         sugar + mono_deg(L) - mono_deg(lt.e));
      pairs.insert({sug, mono_deg(L), k, n, L});
    }
    G.push_back({std::move(v), std::move(rep), lt, sugar});
  };

  for (int j = 0; j < m; j++) {
    if (mv_is_zero(gens[j])) continue;
    std::vector<MPoly> rep(m);
    rep[j] = mp_const(R, K->one());
    insert(gens[j], std::move(rep), mv_max_deg(gens[j]));
  }

  while (!pairs.empty()) {
    SPair pr = *pairs.begin();
    pairs.erase(pairs.begin());
    const WElem& gi = G[pr.i];
    const WElem& gj = G[pr.j];
    if (rank == 1 && pr.lcm == mono_mul(gi.lt.e, gj.lt.e)) continue;
    bool chained = false;
    for (size_t k = 0; k < G.size() && !chained; k++) {
      if ((int)k == pr.i || (int)k == pr.j) continue;
      if (G[k].lt.comp != gi.lt.comp) continue;
      if (!mono_divides(G[k].lt.e, pr.lcm)) continue;
      if (mono_lcm(G[k].lt.e, gi.lt.e) == pr.lcm) continue;
      if (mono_lcm(G[k].lt.e, gj.lt.e) == pr.lcm) continue;
      chained = true;
    }
    if (chained) continue;
    Expo ui = mono_div(pr.lcm, gi.lt.e);
    Expo uj = mono_div(pr.lcm, gj.lt.e);
    MVec sp = mv_sub(R, mv_mul_term(R, K->one(), ui, gi.v),
                     mv_mul_term(R, K->one(), uj, gj.v));
    std::vector<MPoly> rep(m);
    for (int j0 = 0; j0 < m; j0++)
      rep[j0] = mp_sub(R, mp_mul_term(R, K->one(), ui, gi.rep[j0]),
                       mp_mul_term(R, K->one(), uj, gj.rep[j0]));
    std::vector<MVec> cur;
    cur.reserve(G.size());
    for (auto& w : G) cur.push_back(w.v);
    std::vector<MPoly> q;
    MVec r = nf_core(R, cur, sp, &q);
    if (mv_is_zero(r)) continue;
    for (size_t k = 0; k < G.size(); k++) {
      if (mp_is_zero(q[k])) continue;
      for (int j0 = 0; j0 < m; j0++)
        rep[j0] = mp_sub(R, rep[j0], mp_mul(R, q[k], G[k].rep[j0]));
    }
    int sug = std::max(gi.sugar + mono_deg(ui), gj.sugar + mono_deg(uj));
    insert(std::move(r), std::move(rep), sug);
  }

  // minimal set: sweep in increasing leading-term order
  std::vector<int> order(G.size());
  for (size_t i = 0; i < G.size(); i++) order[i] = (int)i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (G[a].lt.comp != G[b].lt.comp) return G[a].lt.comp < G[b].lt.comp;
    int c = mono_cmp(R, G[a].lt.e, G[b].lt.e);
    if (c) return c < 0;
    return mv_cmp(R, G[a].v, G[b].v) < 0;
  });
  std::vector<int> kept;
  for (int i : order) {
    bool covered = false;
    for (int j : kept)
      if (G[j].lt.comp == G[i].lt.comp && mono_divides(G[j].lt.e, G[i].lt.e)) {
        covered = true;
        break;
      }
    if (!covered) kept.push_back(i);
  }

  // tail reduction against the other kept elements
  for (size_t a = 0; a < kept.size(); a++) {
    std::vector<MVec> others;
    std::vector<int> idx;
    for (size_t b = 0; b < kept.size(); b++)
      if (b != a) {
        others.push_back(G[kept[b]].v);
        idx.push_back(kept[b]);
      }
    std::vector<MPoly> q;
    MVec r = nf_core(R, others, G[kept[a]].v, &q);
    for (size_t b = 0; b < idx.size(); b++) {
      if (mp_is_zero(q[b])) continue;
      for (int j0 = 0; j0 < m; j0++)
        G[kept[a]].rep[j0] =
            mp_sub(R, G[kept[a]].rep[j0], mp_mul(R, q[b], G[idx[b]].rep[j0]));
    }
    G[kept[a]].v = std::move(r);
  }

  GB out;
  out.rank = rank;
  out.ngens = m;
  for (int i : kept) {
    out.basis.push_back(std::move(G[i].v));
    out.transform.push_back(std::move(G[i].rep));
  }
  return out;
}

MVec normal_form(const RingPtr& R, const GB& gb, const MVec& v,
                 std::vector<MPoly>* quotients) {
  return nf_core(R, gb.basis, v, quotients);
}

bool membership(const RingPtr& R, const GB& gb, const MVec& v,
                std::vector<MPoly>* cert) {
  std::vector<MPoly> q;
  MVec r = normal_form(R, gb, v, &q);
  if (!mv_is_zero(r)) return false;
  if (cert) {
    int m = gb.ngens;
    cert->assign(m, MPoly{});
    for (size_t i = 0; i < gb.basis.size(); i++) {
      if (mp_is_zero(q[i])) continue;
      for (int j = 0; j < m; j++)
        (*cert)[j] = mp_add(R, (*cert)[j], mp_mul(R, q[i], gb.transform[i][j]));
    }
  }
  return true;
}

std::vector<MVec> syzygies(const RingPtr& R, int rank,
                           const std::vector<MVec>& gens) {
  const FieldPtr& K = R->K;
  int m = (int)gens.size();
  GB g = groebner(R, rank, gens);
  int t = (int)g.basis.size();

  auto to_orig = [&](const std::vector<MPoly>& s) {
    MVec row(m);
    for (int k = 0; k < t; k++) {
      if (mp_is_zero(s[k])) continue;
      for (int j = 0; j < m; j++)
        row[j] = mp_add(R, row[j], mp_mul(R, s[k], g.transform[k][j]));
    }
    return row;
  };

  std::vector<MVec> out;
  auto push = [&](MVec row) {
    if (mv_is_zero(row)) return;
    MvLead l = mv_lead(R, row);
    if (!K->is_one(l.c)) {
      FElem s = K->inv(l.c);
      for (auto& f : row) f = mp_scale(R, s, f);
    }
    out.push_back(std::move(row));
  };

  // Schreyer generators from every same-component pair of the basis
  for (int i = 0; i < t; i++)
    for (int j = i + 1; j < t; j++) {
      MvLead li = mv_lead(R, g.basis[i]);
      MvLead lj = mv_lead(R, g.basis[j]);
      if (li.comp != lj.comp) continue;
      Expo L = mono_lcm(li.e, lj.e);
      Expo ui = mono_div(L, li.e);
      Expo uj = mono_div(L, lj.e);
      MVec sp = mv_sub(R, mv_mul_term(R, K->one(), ui, g.basis[i]),
                       mv_mul_term(R, K->one(), uj, g.basis[j]));
      std::vector<MPoly> q;
      MVec r = nf_core(R, g.basis, sp, &q);
      if (!mv_is_zero(r)) fail("Internal", "S-vector escapes the basis");
      std::vector<MPoly> s(t);
      s[i] = MPoly{MTerm{ui, K->one()}};
      s[j] = mp_sub(R, s[j], MPoly{MTerm{uj, K->one()}});
      for (int k = 0; k < t; k++) s[k] = mp_sub(R, s[k], q[k]);
      push(to_orig(s));
    }

  // rows of I - B·A, catching relations among the generators themselves
  for (int k = 0; k < m; k++) {
    std::vector<MPoly> q;
    MVec r = nf_core(R, g.basis, gens[k], &q);
    if (!mv_is_zero(r)) fail("Internal", "generator escapes its own basis");
    MVec row = to_orig(q);
    for (auto& f : row) f = mp_neg(R, f);
    row[k] = mp_add(R, row[k], mp_const(R, K->one()));
    push(std::move(row));
  }

  std::sort(out.begin(), out.end(),
            [&](const MVec& a, const MVec& b) { return mv_cmp(R, a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end(),
                        [&](const MVec& a, const MVec& b) {
                          return mv_eq(R, a, b);
                        }),
            out.end());
  return out;
}

/* ---------------- ideal conveniences ---------------- */

static std::vector<MVec> wrap(const Ideal& I) {
  std::vector<MVec> g;
  g.reserve(I.size());
  for (auto& f : I) g.push_back(MVec{f});
  return g;
}

GB groebner_ideal(const RingPtr& R, const Ideal& I) {
  return groebner(R, 1, wrap(I));
}

MPoly nf_ideal(const RingPtr& R, const GB& gb, const MPoly& f) {
  return normal_form(R, gb, MVec{f})[0];
}

bool ideal_member(const RingPtr& R, const GB& gb, const MPoly& f,
                  std::vector<MPoly>* cert) {
  return membership(R, gb, MVec{f}, cert);
}

bool ideal_contains_one(const RingPtr& R, const Ideal& I) {
  GB gb = groebner_ideal(R, I);
  return gb.basis.size() == 1 && !gb.basis[0][0].empty() &&
         mono_deg(gb.basis[0][0][0].e) == 0;
}

bool ideal_eq(const RingPtr& R, const Ideal& I, const Ideal& J) {
  GB a = groebner_ideal(R, I);
  GB b = groebner_ideal(R, J);
  if (a.basis.size() != b.basis.size()) return false;
  for (size_t i = 0; i < a.basis.size(); i++)
    if (!mv_eq(R, a.basis[i], b.basis[i])) return false;
  return true;
}

/* ---------------- elimination ---------------- */

namespace {

/// Gröbner in Rblk (block order, first eblock variables eliminated), keep the
/// block-free rows, map them through var_images into Rout and re-reduce there.
Ideal elim_core(const RingPtr& Rblk, const Ideal& gens, int eblock,
                const RingPtr& Rout, const std::vector<MPoly>& var_images) {
  GB gb = groebner_ideal(Rblk, gens);
  Ideal picked;
  for (auto& v : gb.basis) {
    bool free = true;
    for (auto& tm : v[0])
      for (int i = 0; i < eblock && free; i++)
        if (tm.e[i]) free = false;
    if (free) picked.push_back(mp_map(Rblk, v[0], Rout, var_images));
  }
  GB red = groebner_ideal(Rout, picked);
  Ideal out;
  for (auto& v : red.basis) out.push_back(v[0]);
  return out;
}

}  // namespace

Ideal eliminate(const RingPtr& R, const Ideal& I, const std::vector<int>& keep,
                RingPtr* out_ring) {
  int n = R->nvars();
  std::vector<int> kp = keep;
  std::sort(kp.begin(), kp.end());
  kp.erase(std::unique(kp.begin(), kp.end()), kp.end());
  std::vector<char> keepmask(n, 0);
  for (int i : kp) keepmask[i] = 1;
  std::vector<int> perm;
  for (int i = 0; i < n; i++)
    if (!keepmask[i]) perm.push_back(i);
  int eblock = (int)perm.size();
  for (int i : kp) perm.push_back(i);

  std::vector<std::string> bvars;
  for (int i : perm) bvars.push_back(R->vars[i]);
  RingPtr Rblk = PolyRing::make(R->K, bvars, MOrder{OrdKind::Block, eblock});

  std::vector<MPoly> into_blk(n);
  for (int j = 0; j < n; j++) into_blk[perm[j]] = mp_var(Rblk, j);
  Ideal gens;
  for (auto& f : I)
    if (!f.empty()) gens.push_back(mp_map(R, f, Rblk, into_blk));

  std::vector<std::string> kvars;
  for (int i : kp) kvars.push_back(R->vars[i]);
  RingPtr Rout = PolyRing::make(R->K, kvars);
  std::vector<MPoly> into_out(Rblk->nvars());
  for (int j = 0; j < Rblk->nvars(); j++)
    into_out[j] = j < eblock ? MPoly{} : mp_var(Rout, j - eblock);

  if (out_ring) *out_ring = Rout;
  return elim_core(Rblk, gens, eblock, Rout, into_out);
}

Ideal eliminate_in_ring(const RingPtr& R, const Ideal& I,
                        const std::vector<int>& keep) {
  RingPtr Rout;
  Ideal J = eliminate(R, I, keep, &Rout);
  std::vector<int> kp = keep;
  std::sort(kp.begin(), kp.end());
  kp.erase(std::unique(kp.begin(), kp.end()), kp.end());
  std::vector<MPoly> back(Rout->nvars());
  for (size_t j = 0; j < kp.size(); j++) back[j] = mp_var(R, kp[j]);
  Ideal out;
  for (auto& f : J) out.push_back(mp_map(Rout, f, R, back));
  return out;
}

/* ---------------- ideal arithmetic ---------------- */

namespace {

/// K[@t, vars...] with @t forming the elimination block
RingPtr t_ring(const RingPtr& R) {
  std::vector<std::string> vars{"@t"};
  for (auto& v : R->vars) vars.push_back(v);
  return PolyRing::make(R->K, vars, MOrder{OrdKind::Block, 1});
}

std::vector<MPoly> shift_images(const RingPtr& R, const RingPtr& Rt) {
  std::vector<MPoly> im(R->nvars());
  for (int i = 0; i < R->nvars(); i++) im[i] = mp_var(Rt, i + 1);
  return im;
}

std::vector<MPoly> drop_images(const RingPtr& R, const RingPtr& Rt) {
  std::vector<MPoly> im(Rt->nvars());
  for (int i = 0; i < R->nvars(); i++) im[i + 1] = mp_var(R, i);
  return im;
}

Ideal reduced(const RingPtr& R, const Ideal& I) {
  GB gb = groebner_ideal(R, I);
  Ideal out;
  for (auto& v : gb.basis) out.push_back(v[0]);
  return out;
}

}  // namespace

Ideal ideal_intersect(const RingPtr& R, const Ideal& I, const Ideal& J) {
  RingPtr Rt = t_ring(R);
  std::vector<MPoly> up = shift_images(R, Rt);
  MPoly t = mp_var(Rt, 0);
  MPoly omt = mp_sub(Rt, mp_const(Rt, R->K->one()), t);
  Ideal gens;
  for (auto& f : I)
    if (!f.empty()) gens.push_back(mp_mul(Rt, t, mp_map(R, f, Rt, up)));
  for (auto& g : J)
    if (!g.empty()) gens.push_back(mp_mul(Rt, omt, mp_map(R, g, Rt, up)));
  return elim_core(Rt, gens, 1, R, drop_images(R, Rt));
}

MPoly mp_divide_exact(const RingPtr& R, const MPoly& f, const MPoly& g) {
  if (g.empty()) fail("DivisionByZero", "exact division by zero");
  MPoly q, r = f;
  while (!r.empty()) {
    if (!mono_divides(g[0].e, r[0].e))
      fail("Internal", "inexact polynomial division");
    FElem c = R->K->div(r[0].c, g[0].c);
    Expo e = mono_div(r[0].e, g[0].e);
    q.push_back({e, c});
    r = mp_sub(R, r, mp_mul_term(R, c, e, g));
  }
  mp_norm(R, q);
  return q;
}

Ideal ideal_colon(const RingPtr& R, const Ideal& I, const Ideal& J) {
  Ideal res;
  bool first = true;
  for (auto& g : J) {
    if (g.empty()) continue;
    Ideal cap = ideal_intersect(R, I, Ideal{g});
    Ideal part;
    for (auto& h : cap) part.push_back(mp_divide_exact(R, h, g));
    res = first ? part : ideal_intersect(R, res, part);
    first = false;
  }
  if (first) return {mp_const(R, R->K->one())};
  return reduced(R, res);
}

Ideal ideal_saturate(const RingPtr& R, const Ideal& I, const Ideal& J) {
  Ideal res;
  bool first = true;
  for (auto& g : J) {
    if (g.empty()) continue;
    RingPtr Rt = t_ring(R);
    std::vector<MPoly> up = shift_images(R, Rt);
    MPoly t = mp_var(Rt, 0);
    Ideal gens;
    for (auto& f : I)
      if (!f.empty()) gens.push_back(mp_map(R, f, Rt, up));
    gens.push_back(mp_sub(Rt, mp_const(Rt, R->K->one()),
                          mp_mul(Rt, t, mp_map(R, g, Rt, up))));
    Ideal part = elim_core(Rt, gens, 1, R, drop_images(R, Rt));
    res = first ? part : ideal_intersect(R, res, part);
    first = false;
  }
  if (first) return {mp_const(R, R->K->one())};
  return reduced(R, res);
}

bool radical_member(const RingPtr& R, const MPoly& g, const Ideal& I) {
  RingPtr Rt = t_ring(R);
  std::vector<MPoly> up = shift_images(R, Rt);
  MPoly t = mp_var(Rt, 0);
  Ideal gens;
  for (auto& f : I)
    if (!f.empty()) gens.push_back(mp_map(R, f, Rt, up));
  gens.push_back(mp_sub(Rt, mp_const(Rt, R->K->one()),
                        mp_mul(Rt, t, mp_map(R, g, Rt, up))));
  return ideal_contains_one(Rt, gens);
}

/* ---------------- residue towers ---------------- */

FieldPtr extend_field_maximal(const RingPtr& R, const Ideal& m,
                              std::vector<FElem>* images) {
  FieldPtr F = R->K;
  RingPtr cur = R;
  Ideal I = m;
  std::vector<FElem> imgs;

  for (int step = 0; step < R->nvars(); step++) {
    RingPtr R1;
    Ideal J = eliminate(cur, I, {0}, &R1);
    if (J.empty())
      fail("UsageError", "ideal is not maximal: no univariate eliminant");
    UPoly p = mp_to_upoly(R1, J[0], 0);
    if (updeg(p) < 1) fail("UsageError", "ideal is the whole ring");
    FElem alpha;
    FieldPtr next = F;
    if (updeg(p) == 1) {
      alpha = F->neg(p[0]);
    } else {
      next = Field::algext(F, cur->vars[0], p);
      for (auto& a : imgs) a = next->embed(a);
      alpha = next->generator();
    }
    imgs.push_back(alpha);
    if (cur->nvars() == 1) {
      F = next;
      break;
    }
    std::vector<std::string> rest(cur->vars.begin() + 1, cur->vars.end());
    RingPtr nr = PolyRing::make(next, rest);
    std::vector<MPoly> im(cur->nvars());
    im[0] = mp_const(nr, alpha);
    for (int j = 1; j < cur->nvars(); j++) im[j] = mp_var(nr, j - 1);
    std::function<FElem(const FElem&)> cmap = nullptr;
    if (next != F) cmap = [&](const FElem& c) { return next->embed(c); };
    Ideal nid;
    for (auto& f : I) {
      MPoly g = mp_map(cur, f, nr, im, cmap);
      if (!g.empty()) nid.push_back(g);
    }
    I = std::move(nid);
    cur = nr;
    F = next;
  }
  if (images) *images = imgs;
  return F;
}

}  // namespace effalg
