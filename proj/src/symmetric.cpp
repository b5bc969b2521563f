#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "effalg/fieldvm.hpp"
#include "fieldvm_impl.hpp"

namespace effalg {

namespace {

using vmdetail::poly_key;

/// Permutations of the trailing nsym variables as full image-index vectors.
std::vector<std::vector<int>> trailing_perms(int nv, int nsym,
                                             bool generators_only) {
  int m = nv - nsym;
  std::vector<std::vector<int>> out;
  if (generators_only) {
    for (int i = 0; i + 1 < nsym; i++) {
      std::vector<int> img(nv);
      for (int j = 0; j < nv; j++) img[j] = j;
      std::swap(img[m + i], img[m + i + 1]);
      out.push_back(img);
    }
    return out;
  }
  std::vector<int> p(nsym);
  for (int i = 0; i < nsym; i++) p[i] = i;
  do {
    std::vector<int> img(nv);
    for (int j = 0; j < m; j++) img[j] = j;
    for (int i = 0; i < nsym; i++) img[m + i] = m + p[i];
    out.push_back(img);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

MPoly perm_poly(const RingPtr& R, const MPoly& f, const std::vector<int>& img) {
  std::vector<MPoly> images;
  for (int i : img) images.push_back(mp_var(R, i));
  return mp_map(R, f, R, images);
}

FormulaPtr perm_formula(const FormulaCtx& c, const FormulaPtr& f,
                        const std::vector<int>& img) {
  std::vector<Disjunct> ds = bf_dnf(c, f);
  for (Disjunct& d : ds) {
    for (MPoly& g : d.eqs) g = perm_poly(c.R, g, img);
    for (MPoly& g : d.neqs) g = perm_poly(c.R, g, img);
  }
  return bf_from_dnf(c, ds);
}

void check_sym_range(const FormulaCtx& c, int nsym) {
  int nv = c.R->nvars();
  if (nsym < 1 || nsym > nv)
    fail("UsageError", "symmetric variable count out of range");
  if (nsym > 6) fail("UsageError", "too many symmetric variables");
}

/// Coefficients e_1..e_r of prod (T + g_i); zero entries are kept.
std::vector<MPoly> elem_list(const RingPtr& R, const std::vector<MPoly>& gs) {
  std::vector<MPoly> es(gs.size() + 1);
  es[0] = mp_from_int(R, 1);
  for (size_t i = 0; i < gs.size(); i++)
    for (size_t k = i + 1; k >= 1; k--)
      es[k] = mp_add(R, es[k], mp_mul(R, es[k - 1], gs[i]));
  return {es.begin() + 1, es.end()};
}

std::vector<MPoly> orbit_closure(const RingPtr& R, const std::vector<MPoly>& F,
                                 const std::vector<std::vector<int>>& perms) {
  std::vector<MPoly> G;
  std::set<std::string> seen;
  for (const MPoly& f : F) {
    if (f.empty()) continue;
    for (const auto& img : perms) {
      MPoly g = perm_poly(R, f, img);
      if (seen.insert(poly_key(R, g)).second) G.push_back(g);
    }
  }
  return G;
}

std::vector<MPoly> elem_combine(const RingPtr& R, const std::vector<MPoly>& G) {
  std::vector<MPoly> out;
  for (MPoly& e : elem_list(R, G))
    if (!e.empty()) out.push_back(std::move(e));
  return out;
}

/// The delta/pi orbit induction rewriting a symmetric boolean formula as a
/// combination of symmetric equalities.
struct SymRewriter {
  const FormulaCtx& c;
  std::vector<MPoly> P;
  std::vector<std::vector<int>> idxPerms;
  std::map<uint32_t, FormulaPtr> memo;

  uint32_t map_mask(const std::vector<int>& ip, uint32_t mask) const {
    uint32_t out = 0;
    for (size_t i = 0; i < P.size(); i++)
      if (mask & (1u << i)) out |= 1u << ip[i];
    return out;
  }

  std::vector<uint32_t> orbit(uint32_t mask) const {
    std::set<uint32_t> s;
    for (const auto& ip : idxPerms) s.insert(map_mask(ip, mask));
    return {s.begin(), s.end()};
  }

  /// Symmetric closed description of pi_O = OR over I in O of (all of I = 0).
  FormulaPtr pi_sym(const std::vector<uint32_t>& O) {
    std::vector<std::vector<int>> bits;
    for (uint32_t mask : O) {
      if (mask == 0) return bf_true();
      std::vector<int> b;
      for (size_t i = 0; i < P.size(); i++)
        if (mask & (1u << i)) b.push_back((int)i);
      bits.push_back(b);
    }
    uint64_t count = 1;
    for (const auto& b : bits) {
      count *= b.size();
      if (count > 5000) fail("UsageError", "symmetrization blow-up");
    }
    std::vector<MPoly> prods;
    std::set<std::string> seen;
    std::vector<size_t> choice(bits.size(), 0);
    while (true) {
      MPoly p = mp_from_int(c.R, 1);
      for (size_t t = 0; t < bits.size(); t++)
        p = mp_mul(c.R, p, P[bits[t][choice[t]]]);
      if (seen.insert(poly_key(c.R, p)).second) prods.push_back(p);
      size_t t = 0;
      while (t < bits.size() && ++choice[t] == bits[t].size()) choice[t++] = 0;
      if (t == bits.size()) break;
    }
    std::vector<FormulaPtr> atoms;
    for (const MPoly& e : elem_combine(c.R, prods))
      atoms.push_back(bf_eq0(c, e));
    return bf_and(std::move(atoms));
  }

  FormulaPtr delta_orbit(const std::vector<uint32_t>& O) {
    uint32_t rep = O.front();
    auto it = memo.find(rep);
    if (it != memo.end()) return it->second;
    FormulaPtr pure = pi_sym(O);
    uint32_t full = (uint32_t)((1u << P.size()) - 1);
    std::set<uint32_t> zs;
    for (uint32_t mask : O)
      for (uint32_t j = 0; j <= full; j++)
        if (j != mask && (j & mask) == mask) zs.insert(j);
    std::vector<FormulaPtr> zparts;
    std::set<uint32_t> done;
    for (uint32_t z : zs) {
      if (done.count(z)) continue;
      std::vector<uint32_t> zo = orbit(z);
      done.insert(zo.begin(), zo.end());
      zparts.push_back(delta_orbit(zo));
    }
    FormulaPtr res = zparts.empty()
                         ? pure
                         : bf_and({pure, bf_not(bf_or(std::move(zparts)))});
    memo[rep] = res;
    return res;
  }
};

void check_formula_symmetric(const FormulaCtx& c, const FormulaPtr& f,
                             int nsym) {
  for (const auto& img : trailing_perms(c.R->nvars(), nsym, true))
    if (!bf_equals(c, f, perm_formula(c, f, img)))
      fail("NotSymmetric", "formula is not symmetric in the trailing variables");
}

}  // namespace

std::vector<MPoly> symmetrize_closed(const FormulaCtx& c,
                                     const std::vector<MPoly>& F, int nsym) {
  check_sym_range(c, nsym);
  std::vector<FormulaPtr> atoms;
  for (const MPoly& f : F) atoms.push_back(bf_eq0(c, f));
  FormulaPtr conj = bf_and(atoms);
  for (const auto& img : trailing_perms(c.R->nvars(), nsym, true)) {
    std::vector<FormulaPtr> patoms;
    for (const MPoly& f : F) patoms.push_back(bf_eq0(c, perm_poly(c.R, f, img)));
    if (!bf_equals(c, conj, bf_and(std::move(patoms))))
      fail("NotSymmetric", "closed set is not symmetric in the trailing variables");
  }
  return elem_combine(
      c.R, orbit_closure(c.R, F, trailing_perms(c.R->nvars(), nsym, false)));
}

FormulaPtr symmetrize_formula(const FormulaCtx& c, const FormulaPtr& f,
                              int nsym) {
  check_sym_range(c, nsym);
  check_formula_symmetric(c, f, nsym);
  auto perms = trailing_perms(c.R->nvars(), nsym, false);
  SymRewriter rw{c, {}, {}, {}};
  std::set<std::string> seen;
  std::map<std::string, int> index;
  for (const Disjunct& d : bf_dnf(c, f))
    for (const auto* side : {&d.eqs, &d.neqs})
      for (const MPoly& g : *side)
        for (const auto& img : perms) {
          MPoly pg = perm_poly(c.R, g, img);
          std::string key = poly_key(c.R, pg);
          if (seen.insert(key).second) {
            index[key] = (int)rw.P.size();
            rw.P.push_back(pg);
          }
        }
  if (rw.P.size() > 12) fail("UsageError", "too many atoms to symmetrize");
  for (const auto& img : perms) {
    std::vector<int> ip(rw.P.size());
    for (size_t i = 0; i < rw.P.size(); i++)
      ip[i] = index.at(poly_key(c.R, perm_poly(c.R, rw.P[i], img)));
    rw.idxPerms.push_back(ip);
  }
  uint32_t full = (uint32_t)((1u << rw.P.size()) - 1);
  std::vector<char> inC(full + 1);
  for (uint32_t mask = 0; mask <= full; mask++) {
    Disjunct d;
    for (size_t i = 0; i < rw.P.size(); i++)
      ((mask & (1u << i)) ? d.eqs : d.neqs).push_back(rw.P[i]);
    inC[mask] = bf_implies(c, bf_from_dnf(c, {d}), f);
  }
  std::vector<FormulaPtr> parts;
  std::vector<char> visited(full + 1);
  for (uint32_t mask = 0; mask <= full; mask++) {
    if (visited[mask] || !inC[mask]) continue;
    std::vector<uint32_t> O = rw.orbit(mask);
    for (uint32_t o : O) {
      if (!inC[o]) fail("Internal", "implication set is not permutation stable");
      visited[o] = 1;
    }
    parts.push_back(rw.delta_orbit(O));
  }
  return bf_or(std::move(parts));
}

// --------------------------------------------------------------- descent

namespace {

/// Transfer a polynomial into a ring containing its used variables by name.
MPoly poly_rename(const RingPtr& from, const MPoly& f, const RingPtr& to) {
  std::vector<MPoly> images;
  for (int i = 0; i < from->nvars(); i++) {
    int j = to->var_index(from->vars[i]);
    if (j < 0) {
      if (mp_deg_in(f, i) > 0)
        fail("UnknownVariable", "variable " + from->vars[i] + " not in target");
      images.push_back(MPoly{});
    } else {
      images.push_back(mp_var(to, j));
    }
  }
  return mp_map(from, f, to, images);
}

FormulaPtr qe_n(FormulaCtx c, FormulaPtr f, int k, FormulaCtx* out = nullptr) {
  for (int i = 0; i < k; i++) {
    f = qe_project(c, f);
    c = ctx_drop(c, 1);
  }
  if (out) *out = c;
  return f;
}

std::string fresh_against(std::set<std::string>& used, std::string stem) {
  while (used.count(stem)) stem += "_";
  used.insert(stem);
  return stem;
}

}  // namespace

StratifiedFunction descend_symmetric(const StratifiedFunction& h, int nsym,
                                     bool strict) {
  const FormulaCtx& cy = h.ctx;
  check_sym_range(cy, nsym);
  int nv = cy.R->nvars();
  int m = nv - nsym;
  bool anyNat = false, anyRat = false;
  for (const SFPiece& p : h.pieces)
    (p.val.kind == SFValue::Nat ? anyNat : anyRat) = true;
  if (anyNat && anyRat) fail("UsageError", "mixed value kinds in descent");
  bool ratv = anyRat;

  std::set<std::string> used(cy.R->vars.begin(), cy.R->vars.end());
  std::vector<std::string> outVars(cy.R->vars.begin(), cy.R->vars.begin() + m);
  for (int i = 1; i <= nsym; i++)
    outVars.push_back(fresh_against(used, "c" + std::to_string(i)));
  std::string yname = fresh_against(used, "y");

  std::vector<std::string> wVars = outVars;
  for (int i = m; i < nv; i++) wVars.push_back(cy.R->vars[i]);
  FormulaCtx cW = formula_ctx(cy.base, wVars);
  FormulaCtx cOut = ctx_drop(cW, nsym);

  StratifiedFunction res;
  res.ctx = cOut;
  if (h.pieces.empty()) return res;

  // the defining relation: e_i(x) = (-1)^i c_i
  std::vector<MPoly> xs;
  for (int i = 0; i < nsym; i++) xs.push_back(mp_var(cW.R, m + nsym + i));
  std::vector<MPoly> es = elem_list(cW.R, xs);
  std::vector<FormulaPtr> relAtoms;
  for (int k = 1; k <= nsym; k++) {
    MPoly ck = mp_var(cW.R, m + k - 1);
    if (k % 2 == 1) ck = mp_neg(cW.R, ck);
    relAtoms.push_back(bf_eq0(cW, mp_sub(cW.R, es[k - 1], ck)));
  }
  FormulaPtr rel = bf_and(std::move(relAtoms));

  StratifiedFunction ex = sf_exclusive(h);
  std::vector<FormulaPtr> covParts;
  for (const SFPiece& p : ex.pieces) {
    FormulaPtr phi = p.phi;
    if (ratv) {
      const FRational& u = *p.val.rat;
      phi = bf_and(
          {phi, bf_not(bf_eq0(cy, poly_rename(u.R, u.den, cy.R)))});
    }
    covParts.push_back(bf_extend(cy, phi, cW));
  }
  FormulaPtr covered = bf_or(covParts);
  FormulaPtr Dany = qe_n(cW, bf_and({rel, covered}), nsym);
  FormulaPtr Dall = bf_not(qe_n(cW, bf_and({rel, bf_not(covered)}), nsym));
  if (strict && !bf_is_empty(cOut, bf_and({Dany, bf_not(Dall)})))
    fail("NotSymmetric", "definedness is not symmetric in the roots");

  if (!ratv) {
    std::vector<Int> vals;
    for (const SFPiece& p : ex.pieces) vals.push_back(p.val.nat);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<FormulaPtr> avs;
    for (const Int& v : vals) {
      std::vector<FormulaPtr> dv;
      for (size_t l = 0; l < ex.pieces.size(); l++)
        if (ex.pieces[l].val.nat == v) dv.push_back(covParts[l]);
      FormulaPtr av =
          bf_not(qe_n(cW, bf_and({rel, bf_not(bf_or(std::move(dv)))}), nsym));
      avs.push_back(av);
      if (!bf_is_false(av)) res.pieces.push_back(SFPiece{av, sv_nat(v)});
    }
    FormulaPtr sent = bf_and({Dall, bf_not(bf_or(std::move(avs)))});
    if (strict) {
      if (!bf_is_empty(cOut, sent))
        fail("NotSymmetric", "values disagree across root orderings");
    } else if (!bf_is_false(sent)) {
      res.pieces.push_back(SFPiece{sent, sv_nat(kNotSymmetricSentinel)});
    }
    return res;
  }

  // field-valued descent through the graph relation
  std::vector<std::string> wyVars = outVars;
  wyVars.push_back(yname);
  for (int i = m; i < nv; i++) wyVars.push_back(cy.R->vars[i]);
  FormulaCtx cWY = formula_ctx(cy.base, wyVars);
  FormulaCtx cOutY = ctx_drop(cWY, nsym);
  FormulaPtr relY = bf_extend(cW, rel, cWY);
  std::vector<FormulaPtr> gparts;
  for (const SFPiece& p : ex.pieces)
    gparts.push_back(bf_and({bf_extend(cy, p.phi, cWY),
                             fr_graph(*p.val.rat, cWY, m + nsym)}));
  FormulaPtr gamma = qe_n(cWY, bf_and({relY, bf_or(std::move(gparts))}), nsym);

  std::set<std::string> used2(wyVars.begin(), wyVars.end());
  std::string y2name = fresh_against(used2, yname + "2");
  std::vector<std::string> yyVars = outVars;
  yyVars.push_back(yname);
  yyVars.push_back(y2name);
  FormulaCtx cYY = formula_ctx(cy.base, yyVars);
  std::vector<Disjunct> gds = bf_dnf(cOutY, gamma);
  std::vector<MPoly> ren;
  for (int i = 0; i < cOutY.R->nvars(); i++)
    ren.push_back(mp_var(cYY.R, i == m + nsym ? m + nsym + 1 : i));
  for (Disjunct& d : gds) {
    for (MPoly& g : d.eqs) g = mp_map(cOutY.R, g, cYY.R, ren);
    for (MPoly& g : d.neqs) g = mp_map(cOutY.R, g, cYY.R, ren);
  }
  FormulaPtr gamma2 = bf_from_dnf(cYY, gds);
  FormulaPtr gamma1 = bf_extend(cOutY, gamma, cYY);
  MPoly ydiff = mp_sub(cYY.R, mp_var(cYY.R, m + nsym), mp_var(cYY.R, m + nsym + 1));
  FormulaPtr multi = qe_n(
      cYY, bf_and({gamma1, gamma2, bf_not(bf_eq0(cYY, ydiff))}), 2);
  if (strict && !bf_is_empty(cOut, multi))
    fail("NotSymmetric", "values disagree across root orderings");

  FormulaPtr agree = bf_and({Dall, bf_not(multi)});
  StratifiedFunction ind;
  ind.ctx = cOutY;
  ind.pieces.push_back(
      SFPiece{bf_and({gamma, bf_extend(cOut, agree, cOutY)}), sv_nat(1)});
  ind.pieces.push_back(SFPiece{bf_true(), sv_nat(0)});
  StratifiedFunction sel = select_unique(ind);
  for (const SFPiece& p : sel.pieces) {
    FormulaPtr phi = bf_and({p.phi, agree});
    if (!bf_is_false(phi)) res.pieces.push_back(SFPiece{phi, p.val});
  }
  if (!strict) {
    FormulaPtr sent = bf_and({Dall, multi});
    if (!bf_is_false(sent))
      res.pieces.push_back(
          SFPiece{sent, sv_rat(fr_const(cOut, Int(kNotSymmetricSentinel)))});
  }
  return res;
}

}  // namespace effalg
