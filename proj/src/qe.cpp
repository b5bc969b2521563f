#include <algorithm>
#include <functional>
#include <map>
#include <utility>

#include "effalg/fieldvm.hpp"
#include "fieldvm_impl.hpp"

// Parametrized univariate elimination.  Everything here works over a
// locally closed stratum of the parameter space and forks it whenever a
// leading coefficient has both a vanishing and a non-vanishing locus; the
// univariate arithmetic is division-free (pseudo-remainders), so results
// are valid over every characteristic compatible with the stratum, and
// every positive membership decision records its certificate denominators
// when a prime sink is installed (the ℤ base reruns those primes natively).

namespace effalg {

using namespace vmdetail;

namespace {

struct Stratum {
  Ideal E;
  std::vector<MPoly> nu;
  std::shared_ptr<const GB> rab;  // GB of (E, 1 − t·∏nu) in the extended ring
};

struct Engine {
  RingPtr R;   // parameter ring
  RingPtr Rt;  // R plus the Rabinowitsch variable
  std::vector<MPoly> img;
  long p = 0;
  std::set<Int>* primes = nullptr;

  explicit Engine(const RingPtr& R_, std::set<Int>* sink) : R(R_), primes(sink) {
    p = R->K->characteristic();
    std::vector<std::string> names = R->vars;
    names.push_back(fresh_name(R, "t"));
    Rt = PolyRing::make(R->K, names, MOrder{});
    for (int i = 0; i < R->nvars(); i++) img.push_back(mp_var(Rt, i));
  }

  MPoly to_rt(const MPoly& f) const { return mp_map(R, f, Rt, img); }

  void prepare(Stratum& st) {
    if (st.rab) return;
    Ideal gens;
    for (const MPoly& e : st.E) gens.push_back(to_rt(e));
    MPoly prod = mp_from_int(Rt, 1);
    for (const MPoly& n : st.nu) prod = mp_mul(Rt, prod, to_rt(n));
    gens.push_back(mp_sub(Rt, mp_from_int(Rt, 1),
                          mp_mul(Rt, mp_var(Rt, R->nvars()), prod)));
    st.rab = std::make_shared<const GB>(groebner_ideal(Rt, gens));
  }

  bool vanishes(Stratum& st, const MPoly& c) {
    prepare(st);
    std::vector<MPoly> cert;
    bool yes = ideal_member(Rt, *st.rab, to_rt(c), primes ? &cert : nullptr);
    if (yes && primes)
      for (const MPoly& q : cert) poly_den_primes(Rt, q, *primes);
    return yes;
  }

  bool empty(Stratum& st) { return vanishes(st, mp_from_int(R, 1)); }
};

Stratum add_eq(const Stratum& st, const MPoly& c) {
  Stratum s;
  s.E = st.E;
  s.nu = st.nu;
  s.E.push_back(c);
  return s;
}

Stratum add_nu(Engine& eng, const Stratum& st, const MPoly& c) {
  Stratum s;
  s.E = st.E;
  s.nu = st.nu;
  std::string key = poly_key(eng.R, c);
  for (const MPoly& n : s.nu)
    if (poly_key(eng.R, n) == key) return s;
  s.nu.push_back(c);
  return s;
}

/// Deliver (refined stratum, whether c vanishes identically there).
void branch_vanishing(Engine& eng, const Stratum& st, const MPoly& c,
                      const std::function<void(Stratum, bool)>& k) {
  if (c.empty()) {
    k(st, true);
    return;
  }
  if (mp_total_deg(c) == 0) {
    if (eng.primes) {
      Rat v = felem_rat(eng.R->K, c.front().c);
      int_prime_factors(Int(v.get_num()), *eng.primes);
      int_prime_factors(Int(v.get_den()), *eng.primes);
    }
    k(st, false);
    return;
  }
  Stratum s0 = st;
  if (eng.vanishes(s0, c)) {
    k(std::move(s0), true);
    return;
  }
  Stratum s1 = add_eq(st, c);
  if (!eng.empty(s1)) k(std::move(s1), true);
  Stratum s2 = add_nu(eng, st, c);
  if (!eng.empty(s2)) k(std::move(s2), false);
}

// ------------------------------------------------- parametric univariates

/// Coefficients ascending in the auxiliary variable; `depth` means the
/// whole polynomial is understood with its parameters composed with
/// Frob^{-depth} (coefficients stay in the prime field, so raising the
/// parameter variables to p-th powers realigns depths).
struct PU {
  std::vector<MPoly> c;
  int depth = 0;
};

void pu_strim(PU& f) {
  while (!f.c.empty() && f.c.back().empty()) f.c.pop_back();
}

int pu_sdeg(const PU& f) { return (int)f.c.size() - 1; }

MPoly poly_var_power(const RingPtr& R, const MPoly& f, long q) {
  MPoly out;
  for (const MTerm& t : f) {
    Expo e = t.e;
    for (int& x : e) x *= (int)q;
    out.push_back(MTerm{e, t.c});
  }
  mp_norm(R, out);
  return out;
}

void pu_raise(Engine& eng, PU& a, int toDepth) {
  if (a.depth == toDepth) return;
  if (eng.p <= 0) fail("Internal", "Frobenius depth in characteristic zero");
  long q = 1;
  for (int i = a.depth; i < toDepth; i++) q *= eng.p;
  for (MPoly& g : a.c) g = poly_var_power(eng.R, g, q);
  a.depth = toDepth;
}

void pu_align(Engine& eng, PU& a, PU& b) {
  int d = std::max(a.depth, b.depth);
  pu_raise(eng, a, d);
  pu_raise(eng, b, d);
}

PU pu_mul(Engine& eng, PU a, PU b) {
  pu_align(eng, a, b);
  PU out;
  out.depth = a.depth;
  if (a.c.empty() || b.c.empty()) return out;
  out.c.assign(a.c.size() + b.c.size() - 1, MPoly{});
  for (size_t i = 0; i < a.c.size(); i++)
    for (size_t j = 0; j < b.c.size(); j++)
      if (!a.c[i].empty() && !b.c[j].empty())
        out.c[i + j] =
            mp_add(eng.R, out.c[i + j], mp_mul(eng.R, a.c[i], b.c[j]));
  pu_strim(out);
  return out;
}

PU pu_pow(Engine& eng, const PU& a, int d) {
  PU out;
  out.depth = a.depth;
  out.c = {mp_from_int(eng.R, 1)};
  for (int i = 0; i < d; i++) out = pu_mul(eng, out, a);
  return out;
}

/// One reduction step shared by pseudo-remainder and pseudo-quotient:
/// A ← lb·A − la·Y^{da−db}·B, with the top term cancelling structurally.
PU pu_step(Engine& eng, const PU& A, const MPoly& la, const PU& B,
           const MPoly& lb, int da, int db) {
  PU next;
  next.depth = A.depth;
  next.c.assign(da, MPoly{});
  for (int i = 0; i < da; i++) {
    MPoly v = A.c[i].empty() ? MPoly{} : mp_mul(eng.R, lb, A.c[i]);
    int j = i - (da - db);
    if (j >= 0 && j < db && !B.c[j].empty())
      v = mp_sub(eng.R, v, mp_mul(eng.R, la, B.c[j]));
    next.c[i] = std::move(v);
  }
  pu_strim(next);
  return next;
}

/// Division-free pseudo-remainder; the divisor must be trimmed with a
/// structurally nonzero (stratum-invertible, by contract) lead.
PU pu_prem(Engine& eng, PU A, PU B) {
  pu_align(eng, A, B);
  pu_strim(A);
  int db = pu_sdeg(B);
  const MPoly& lb = B.c.back();
  while (pu_sdeg(A) >= db) {
    int da = pu_sdeg(A);
    MPoly la = A.c.back();
    A = pu_step(eng, A, la, B, lb, da, db);
  }
  return A;
}

/// Pseudo-quotient of A by B, valid up to a stratum-invertible scalar on
/// every stratum where B divides A; same divisor contract as pu_prem.
PU pu_pquo(Engine& eng, PU A, PU B) {
  pu_align(eng, A, B);
  pu_strim(A);
  int db = pu_sdeg(B);
  const MPoly& lb = B.c.back();
  PU Q;
  Q.depth = A.depth;
  Q.c.assign(std::max(0, pu_sdeg(A) - db + 1), MPoly{});
  while (pu_sdeg(A) >= db) {
    int da = pu_sdeg(A);
    MPoly la = A.c.back();
    for (MPoly& q : Q.c)
      if (!q.empty()) q = mp_mul(eng.R, lb, q);
    Q.c[da - db] = mp_add(eng.R, Q.c[da - db], la);
    A = pu_step(eng, A, la, B, lb, da, db);
  }
  pu_strim(Q);
  return Q;
}

using PUSink = std::function<void(Stratum, PU)>;

/// Refine the stratum until f is either identically zero on it (delivered
/// as an empty PU) or trimmed with a stratum-invertible lead.
void for_lead(Engine& eng, Stratum st, PU f, const PUSink& k) {
  pu_strim(f);
  if (f.c.empty()) {
    k(std::move(st), std::move(f));
    return;
  }
  MPoly top = f.c.back();
  branch_vanishing(eng, st, top, [&](Stratum s, bool zero) {
    if (!zero) {
      k(std::move(s), f);
      return;
    }
    PU g = f;
    g.c.pop_back();
    for_lead(eng, std::move(s), std::move(g), k);
  });
}

/// gcd of A (trimmed, invertible lead) and B (arbitrary), up to a
/// stratum-invertible scalar.
void gcd_pair(Engine& eng, Stratum st, PU A, PU B, const PUSink& k) {
  for_lead(eng, std::move(st), std::move(B), [&](Stratum s, PU B2) {
    if (B2.c.empty()) {
      k(std::move(s), A);
      return;
    }
    if (pu_sdeg(B2) == 0) {
      k(std::move(s), B2);
      return;
    }
    if (pu_sdeg(A) < pu_sdeg(B2)) {
      gcd_pair(eng, std::move(s), std::move(B2), A, k);
      return;
    }
    PU r = pu_prem(eng, A, B2);
    gcd_pair(eng, std::move(s), std::move(B2), std::move(r), k);
  });
}

/// gcd of a list; the continuation receives an empty PU when every input
/// vanishes identically on the stratum.
void param_gcd(Engine& eng, Stratum st, const std::vector<PU>& fs,
               const PUSink& k) {
  std::function<void(Stratum, PU, size_t)> go = [&](Stratum s, PU cur,
                                                    size_t i) {
    if (i == fs.size() || (!cur.c.empty() && pu_sdeg(cur) == 0)) {
      k(std::move(s), std::move(cur));
      return;
    }
    if (cur.c.empty()) {
      for_lead(eng, std::move(s), fs[i], [&](Stratum s2, PU f2) {
        go(std::move(s2), std::move(f2), i + 1);
      });
      return;
    }
    gcd_pair(eng, std::move(s), std::move(cur), fs[i],
             [&](Stratum s2, PU g2) { go(std::move(s2), std::move(g2), i + 1); });
  };
  go(std::move(st), PU{}, 0);
}

// --------------------------------------------------------------- assembly

FormulaPtr stratum_formula(const FormulaCtx& cOut, const Stratum& st,
                           const std::vector<MPoly>* someNonzero = nullptr) {
  std::vector<FormulaPtr> conj;
  for (const MPoly& e : st.E) conj.push_back(bf_eq0(cOut, e));
  for (const MPoly& n : st.nu) conj.push_back(bf_not(bf_eq0(cOut, n)));
  if (someNonzero) {
    std::vector<FormulaPtr> alts;
    for (const MPoly& r : *someNonzero)
      alts.push_back(bf_not(bf_eq0(cOut, r)));
    conj.push_back(bf_or(std::move(alts)));
  }
  return bf_and(std::move(conj));
}

PU split_y(const RingPtr& Ry, const MPoly& f, const RingPtr& Rz) {
  (void)Ry;
  PU u;
  for (const MTerm& t : f) {
    int yk = t.e.back();
    if ((int)u.c.size() <= yk) u.c.resize(yk + 1);
    Expo e(t.e.begin(), t.e.end() - 1);
    u.c[yk].push_back(MTerm{e, t.c});
  }
  for (MPoly& g : u.c) mp_norm(Rz, g);
  pu_strim(u);
  return u;
}

PU pu_from_param(const RingPtr& R, const ParamUPoly& f) {
  PU u;
  for (const MPoly& g : f) {
    MPoly h = g;
    mp_norm(R, h);
    u.c.push_back(std::move(h));
  }
  pu_strim(u);
  return u;
}

// --------------------------------------------------------------- QE core

void qe_disjunct(Engine& eng, const FormulaCtx& cy, const FormulaCtx& cOut,
                 const Disjunct& d, std::vector<FormulaPtr>& out) {
  std::vector<PU> fs;
  for (const MPoly& f : d.eqs) fs.push_back(split_y(cy.R, f, cOut.R));
  bool haveG = !d.neqs.empty();
  PU g;
  g.c = {mp_from_int(cOut.R, 1)};
  for (const MPoly& h : d.neqs) g = pu_mul(eng, g, split_y(cy.R, h, cOut.R));
  auto emit = [&](const FormulaPtr& f) {
    if (!bf_is_false(f)) out.push_back(f);
  };
  param_gcd(eng, Stratum{}, fs, [&](Stratum s, PU u) {
    if (u.c.empty()) {
      // every equation vanishes identically in y on this stratum
      if (!haveG) {
        emit(stratum_formula(cOut, s));
        return;
      }
      emit(stratum_formula(cOut, s, &g.c));
      return;
    }
    if (pu_sdeg(u) == 0) return;  // the gcd is a unit: no common root
    if (!haveG) {
      emit(stratum_formula(cOut, s));
      return;
    }
    PU r = pu_prem(eng, pu_pow(eng, g, pu_sdeg(u)), u);
    emit(stratum_formula(cOut, s, &r.c));
  });
}

FormulaPtr qe_fixed(const FormulaCtx& cy, const FormulaPtr& f,
                    const FormulaCtx& cOut, std::set<Int>* primes) {
  Engine eng(cOut.R, primes);
  std::vector<FormulaPtr> parts;
  for (const Disjunct& d : bf_dnf(cy, f)) qe_disjunct(eng, cy, cOut, d, parts);
  return bf_or(std::move(parts));
}

FormulaPtr bf_lift_fp(const FormulaCtx& cp, const FormulaPtr& f,
                      const FormulaCtx& cz) {
  switch (f->kind) {
    case BoolFormula::Eq0:
      return bf_eq0(cz, poly_lift_p(cp.R, f->poly, cz.R));
    case BoolFormula::Not:
      return bf_not(bf_lift_fp(cp, f->kids[0], cz));
    case BoolFormula::And: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids) kids.push_back(bf_lift_fp(cp, k, cz));
      return bf_and(std::move(kids));
    }
    case BoolFormula::Or: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids) kids.push_back(bf_lift_fp(cp, k, cz));
      return bf_or(std::move(kids));
    }
  }
  fail("Internal", "unreachable formula kind");
}

MPoly char_atom(const FormulaCtx& cz, const Int& p) {
  return mp_const(cz.R, cz.R->K->from_int(p));
}

}  // namespace

FormulaPtr qe_project(const FormulaCtx& c, const FormulaPtr& f) {
  if (c.R->nvars() == 0) fail("UsageError", "no variable to project away");
  FormulaCtx cOut = ctx_drop(c, 1);
  if (!c.base.overZ) return qe_fixed(c, f, cOut, nullptr);
  std::set<Int> X = formula_coeff_primes(c, f);
  std::set<Int> certs;
  FormulaPtr phi0 = qe_fixed(c, f, cOut, &certs);
  X.insert(certs.begin(), certs.end());
  std::vector<FormulaPtr> guard{phi0};
  for (const Int& p : X)
    guard.push_back(bf_not(bf_eq0(cOut, char_atom(cOut, p))));
  std::vector<FormulaPtr> parts{bf_and(std::move(guard))};
  for (const Int& p : X) {
    FormulaCtx cyP = formula_ctx(vm_fp(p.get_si()), c.R->vars);
    FormulaCtx coP = ctx_drop(cyP, 1);
    FormulaPtr fp = bf_mod_p(c, f, cyP);
    FormulaPtr phip = qe_fixed(cyP, fp, coP, nullptr);
    parts.push_back(bf_and(
        {bf_eq0(cOut, char_atom(cOut, p)), bf_lift_fp(coP, phip, cOut)}));
  }
  return bf_or(std::move(parts));
}

// ------------------------------------------------------------ unique root

namespace {

struct URPiece {
  Stratum st;
  int flag = 0;
  int depth = 0;
  MPoly num, den;  // flag = 1 only
};

void squarefree_loop(Engine& eng, Stratum st, PU v,
                     const std::function<void(URPiece)>& sink) {
  for_lead(eng, std::move(st), std::move(v), [&](Stratum s, PU v2) {
    if (v2.c.empty())
      fail("Internal", "common-root part vanished on a live stratum");
    int d = pu_sdeg(v2);
    if (d == 0) {
      sink(URPiece{std::move(s), 0, 0, {}, {}});
      return;
    }
    if (d == 1) {
      URPiece out;
      out.st = std::move(s);
      out.flag = 1;
      out.depth = v2.depth;
      out.num = mp_neg(eng.R, v2.c[0]);
      out.den = v2.c[1];
      sink(std::move(out));
      return;
    }
    PU dv;
    dv.depth = v2.depth;
    dv.c.assign(d, MPoly{});
    for (int k = 1; k <= d; k++)
      if (!v2.c[k].empty())
        dv.c[k - 1] = mp_scale(eng.R, eng.R->K->from_int(k), v2.c[k]);
    for_lead(eng, std::move(s), std::move(dv), [&](Stratum s2, PU dv2) {
      if (dv2.c.empty()) {
        // v2 is a polynomial in Y^p on this stratum: take its p-th root,
        // read at one more Frobenius depth.
        if (eng.p <= 0)
          fail("Internal", "vanishing derivative in characteristic zero");
        PU root;
        root.depth = v2.depth + 1;
        for (int k = 0; k * (int)eng.p <= d; k++)
          root.c.push_back(k * (int)eng.p < (int)v2.c.size()
                               ? v2.c[k * (int)eng.p]
                               : MPoly{});
        squarefree_loop(eng, std::move(s2), std::move(root), sink);
        return;
      }
      gcd_pair(eng, std::move(s2), v2, std::move(dv2), [&](Stratum s3, PU w) {
        if (w.c.empty() || pu_sdeg(w) == 0) {
          sink(URPiece{std::move(s3), 0, 0, {}, {}});
          return;
        }
        squarefree_loop(eng, std::move(s3), pu_pquo(eng, v2, w), sink);
      });
    });
  });
}

void ur_core(Engine& eng, const std::vector<PU>& fs, const PU& g,
             const std::function<void(URPiece)>& sink) {
  param_gcd(eng, Stratum{}, fs, [&](Stratum s, PU u) {
    if (u.c.empty() || pu_sdeg(u) == 0) {
      // no equation (the admissible set is cofinite) or no common root
      sink(URPiece{std::move(s), 0, 0, {}, {}});
      return;
    }
    for_lead(eng, std::move(s), g, [&](Stratum s2, PU g2) {
      if (g2.c.empty()) {
        sink(URPiece{std::move(s2), 0, 0, {}, {}});
        return;
      }
      int d = pu_sdeg(u);
      if (pu_sdeg(g2) == 0) {
        squarefree_loop(eng, std::move(s2), u, sink);
        return;
      }
      gcd_pair(eng, std::move(s2), u, pu_pow(eng, g2, d),
               [&](Stratum s3, PU w) {
                 PU v = (w.c.empty() || pu_sdeg(w) == 0) ? u
                                                         : pu_pquo(eng, u, w);
                 pu_strim(v);
                 if (v.c.empty() || pu_sdeg(v) == 0) {
                   sink(URPiece{std::move(s3), 0, 0, {}, {}});
                   return;
                 }
                 squarefree_loop(eng, std::move(s3), std::move(v), sink);
               });
    });
  });
}

}  // namespace

UniqueRootResult unique_root(const FormulaCtx& c,
                             const std::vector<ParamUPoly>& fsIn,
                             const ParamUPoly& gIn) {
  UniqueRootResult res;
  res.flag.ctx = c;
  res.xi.ctx = c;
  // Emit a flag/value pair sharing one formula object so callers can match
  // them up; formulas over a mod-p context get lifted into the ℤ context.
  auto emit = [&](const FormulaCtx& cf, const URPiece& p,
                  const std::vector<FormulaPtr>& guards) {
    FormulaPtr phi = stratum_formula(cf, p.st);
    if (!vm_eq(cf.base, c.base)) phi = bf_lift_fp(cf, phi, c);
    std::vector<FormulaPtr> conj{phi};
    for (const FormulaPtr& g : guards) conj.push_back(g);
    phi = bf_and(std::move(conj));
    if (bf_is_false(phi)) return;
    res.flag.pieces.push_back(SFPiece{phi, sv_nat(p.flag)});
    if (p.flag == 1)
      res.xi.pieces.push_back(
          SFPiece{phi, sv_rat(fr_make(cf, p.num, p.den, p.depth))});
  };
  auto run = [&](const FormulaCtx& cf, std::set<Int>* sink,
                 const std::function<MPoly(const MPoly&)>& conv,
                 const std::function<void(URPiece)>& deliver) {
    Engine eng(cf.R, sink);
    std::vector<PU> fs;
    for (const ParamUPoly& f : fsIn) {
      ParamUPoly fc;
      for (const MPoly& g : f) fc.push_back(conv(g));
      fs.push_back(pu_from_param(cf.R, fc));
    }
    PU g;
    if (gIn.empty()) {
      g.c = {mp_from_int(cf.R, 1)};
    } else {
      ParamUPoly gc;
      for (const MPoly& h : gIn) gc.push_back(conv(h));
      g = pu_from_param(cf.R, gc);
    }
    ur_core(eng, fs, g, deliver);
  };
  auto ident = [](const MPoly& f) { return f; };
  if (!c.base.overZ) {
    run(c, nullptr, ident, [&](URPiece p) { emit(c, p, {}); });
    res.flag.total = true;
    return res;
  }
  std::set<Int> X;
  for (const ParamUPoly& f : fsIn)
    for (const MPoly& g : f) poly_coeff_primes(c.R, g, X);
  for (const MPoly& g : gIn) poly_coeff_primes(c.R, g, X);
  std::set<Int> certs;
  std::vector<URPiece> zeroPass;
  run(c, &certs, ident, [&](URPiece p) { zeroPass.push_back(std::move(p)); });
  X.insert(certs.begin(), certs.end());
  std::vector<FormulaPtr> zeroGuards;
  for (const Int& p : X)
    zeroGuards.push_back(bf_not(bf_eq0(c, char_atom(c, p))));
  for (const URPiece& p : zeroPass) emit(c, p, zeroGuards);
  for (const Int& p : X) {
    FormulaCtx cp = formula_ctx(vm_fp(p.get_si()), c.R->vars);
    std::vector<FormulaPtr> guards{bf_eq0(c, char_atom(c, p))};
    run(
        cp, nullptr,
        [&](const MPoly& f) { return poly_mod_p(c.R, f, cp.R); },
        [&](URPiece q) { emit(cp, q, guards); });
  }
  res.flag.total = true;
  return res;
}

// ----------------------------------------------------------- select unique

namespace {

/// Conjunctive exclusive pieces of a {0,1}-valued function.
std::vector<std::pair<Disjunct, int>> indicator_pieces(
    const StratifiedFunction& h) {
  for (const SFPiece& p : h.pieces) {
    if (p.val.kind != SFValue::Nat || (p.val.nat != 0 && p.val.nat != 1))
      fail("UsageError", "select_unique needs a {0,1}-valued function");
  }
  StratifiedFunction ex = sf_exclusive(h);
  std::vector<std::pair<Disjunct, int>> out;
  for (const SFPiece& p : ex.pieces) {
    int v = (int)p.val.nat.get_si();
    for (const Disjunct& d : bf_dnf(ex.ctx, p.phi)) out.push_back({d, v});
  }
  return out;
}

}  // namespace

StratifiedFunction select_unique(const StratifiedFunction& h) {
  const FormulaCtx& cy = h.ctx;
  if (cy.R->nvars() == 0) fail("UsageError", "no variable to select over");
  FormulaCtx cOut = ctx_drop(cy, 1);
  StratifiedFunction res;
  res.ctx = cOut;
  auto pieces = indicator_pieces(h);
  Engine aux(cOut.R, nullptr);
  for (size_t j = 0; j < pieces.size(); j++) {
    if (pieces[j].second != 1) continue;
    const Disjunct& d = pieces[j].first;
    // where any other indicator disjunct has a solution the fiber holds
    // more than one candidate point, so those loci are excluded
    std::vector<FormulaPtr> guards;
    for (size_t l = 0; l < pieces.size(); l++) {
      if (l == j || pieces[l].second != 1) continue;
      FormulaPtr ex = qe_project(cy, bf_from_dnf(cy, {pieces[l].first}));
      guards.push_back(bf_not(ex));
    }
    std::vector<ParamUPoly> fs;
    for (const MPoly& f : d.eqs) {
      PU u = split_y(cy.R, f, cOut.R);
      fs.push_back(ParamUPoly(u.c.begin(), u.c.end()));
    }
    ParamUPoly g;
    if (!d.neqs.empty()) {
      PU acc;
      acc.c = {mp_from_int(cOut.R, 1)};
      for (const MPoly& n : d.neqs)
        acc = pu_mul(aux, acc, split_y(cy.R, n, cOut.R));
      g.assign(acc.c.begin(), acc.c.end());
    }
    UniqueRootResult ur = unique_root(cOut, fs, g);
    for (const SFPiece& fp : ur.flag.pieces) {
      if (fp.val.nat != 1) continue;
      for (const SFPiece& xp : ur.xi.pieces) {
        if (xp.phi != fp.phi) continue;
        std::vector<FormulaPtr> conj{fp.phi};
        for (const FormulaPtr& gg : guards) conj.push_back(gg);
        FormulaPtr phi = bf_and(std::move(conj));
        if (!bf_is_false(phi)) res.pieces.push_back(SFPiece{phi, xp.val});
        break;
      }
    }
  }
  return res;
}

}  // namespace effalg
