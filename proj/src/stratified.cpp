#include <algorithm>
#include <map>
#include <sstream>

#include "effalg/fieldvm.hpp"
#include "fieldvm_impl.hpp"

namespace effalg {

using namespace vmdetail;

SFValue sv_nat(const Int& n) {
  SFValue v;
  v.kind = SFValue::Nat;
  v.nat = n;
  return v;
}

SFValue sv_rat(FRational u) {
  SFValue v;
  v.kind = SFValue::Rat;
  v.rat = std::move(u);
  return v;
}

bool sv_eq(const SFValue& a, const SFValue& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == SFValue::Nat) return a.nat == b.nat;
  return fr_eq(*a.rat, *b.rat);
}

std::string sv_to_string(const SFValue& v) {
  if (v.kind == SFValue::Nat) return v.nat.get_str();
  return fr_to_string(*v.rat);
}

PieceStream sf_stream(const StratifiedFunction& f) {
  PieceStream s;
  s.ctx = f.ctx;
  auto pieces = std::make_shared<std::vector<SFPiece>>(f.pieces);
  auto i = std::make_shared<size_t>(0);
  s.next = [pieces, i]() -> std::optional<SFPiece> {
    if (*i >= pieces->size()) return std::nullopt;
    return (*pieces)[(*i)++];
  };
  return s;
}

StratifiedFunction sf_collect(PieceStream& s, int maxPieces) {
  StratifiedFunction f;
  f.ctx = s.ctx;
  for (int k = 0; k < maxPieces; k++) {
    auto p = s.next();
    if (!p) break;
    f.pieces.push_back(std::move(*p));
  }
  return f;
}

StratifiedFunction sf_exclusive(const StratifiedFunction& f) {
  StratifiedFunction out;
  out.ctx = f.ctx;
  out.total = f.total;
  std::vector<FormulaPtr> seen;
  for (const SFPiece& p : f.pieces) {
    std::vector<FormulaPtr> conj{p.phi};
    for (const FormulaPtr& q : seen) conj.push_back(bf_not(q));
    FormulaPtr phi = bf_and(std::move(conj));
    seen.push_back(p.phi);
    if (!bf_is_false(phi)) out.pieces.push_back(SFPiece{phi, p.val});
  }
  return out;
}

bool sf_certify_total(StratifiedFunction& f) {
  // overlaps are fine under first-match; totality is coverage alone
  std::vector<FormulaPtr> all;
  for (const SFPiece& p : f.pieces) all.push_back(p.phi);
  f.total = bf_is_empty(f.ctx, bf_not(bf_or(std::move(all))));
  return f.total;
}

std::optional<SFValue> sf_eval(const StratifiedFunction& f, const FieldPtr& K,
                               const std::vector<FElem>& pt) {
  for (const SFPiece& p : f.pieces)
    if (bf_eval(f.ctx, p.phi, K, pt)) return p.val;
  return std::nullopt;
}

std::string sf_to_string(const StratifiedFunction& f) {
  std::ostringstream os;
  os << "over " << vm_to_string(f.ctx.base) << " (";
  for (int i = 0; i < f.ctx.R->nvars(); i++)
    os << (i ? "," : "") << f.ctx.R->vars[i];
  os << ")\n";
  for (const SFPiece& p : f.pieces)
    os << bf_to_string(f.ctx, p.phi) << "  ->  " << sv_to_string(p.val)
       << "\n";
  if (f.total) os << "total\n";
  return os.str();
}

// ------------------------------------------------------------------ trees

DTreePtr sf_to_tree(const StratifiedFunction& f) {
  DTreePtr undef = std::make_shared<const DecisionTree>();
  DTreePtr t = undef;
  for (auto it = f.pieces.rbegin(); it != f.pieces.rend(); ++it) {
    auto leaf = std::make_shared<DecisionTree>();
    leaf->val = it->val;
    auto node = std::make_shared<DecisionTree>();
    node->test = it->phi;
    node->yes = leaf;
    node->no = t;
    t = node;
  }
  return t;
}

namespace {

void tree_walk(const FormulaCtx& c, const DTreePtr& t,
               std::vector<FormulaPtr>& path, StratifiedFunction& out) {
  if (!t) return;
  if (!t->test) {
    if (t->val) {
      FormulaPtr phi = bf_and(path);
      if (!bf_is_false(phi)) out.pieces.push_back(SFPiece{phi, *t->val});
    }
    return;
  }
  path.push_back(t->test);
  tree_walk(c, t->yes, path, out);
  path.pop_back();
  path.push_back(bf_not(t->test));
  tree_walk(c, t->no, path, out);
  path.pop_back();
}

}  // namespace

StratifiedFunction tree_to_sf(const FormulaCtx& c, const DTreePtr& t) {
  StratifiedFunction out;
  out.ctx = c;
  std::vector<FormulaPtr> path;
  tree_walk(c, t, path, out);
  return out;
}

// ------------------------------------------------------------ quantifiers

StratifiedFunction lift_quantifier(const StratifiedFunction& h, Quant which,
                                   const FormulaPtr& range) {
  const FormulaCtx& cy = h.ctx;
  if (cy.R->nvars() == 0) fail("UsageError", "no variable to quantify");
  FormulaCtx cOut = ctx_drop(cy, 1);
  FormulaPtr rng = range ? range : bf_true();
  for (const SFPiece& p : h.pieces)
    if (p.val.kind != SFValue::Nat)
      fail("UsageError", "quantifier lift needs ℕ-valued pieces");
  StratifiedFunction ex = sf_exclusive(h);
  StratifiedFunction res;
  res.ctx = cOut;
  auto push = [&](const FormulaPtr& phi, const Int& v) {
    if (!bf_is_false(phi)) res.pieces.push_back(SFPiece{phi, sv_nat(v)});
  };
  if (which == Quant::Forall || which == Quant::Exists) {
    // staged construction: after j pieces the covered region is known, and
    // first-match order makes the earliest certain stage win
    std::vector<FormulaPtr> hit;   // pieces with value 0 (predicate holds)
    std::vector<FormulaPtr> miss;  // pieces with nonzero value
    std::vector<FormulaPtr> all;
    for (const SFPiece& p : ex.pieces) {
      (p.val.nat == 0 ? hit : miss).push_back(p.phi);
      all.push_back(p.phi);
      if (which == Quant::Forall) {
        // all y in range are 0-covered / are covered at all
        FormulaPtr all0 =
            bf_not(qe_project(cy, bf_and({rng, bf_not(bf_or(hit))})));
        FormulaPtr cov =
            bf_not(qe_project(cy, bf_and({rng, bf_not(bf_or(all))})));
        push(all0, 0);
        push(cov, 1);
      } else {
        if (p.val.nat == 0)
          push(qe_project(cy, bf_and({rng, p.phi})), 0);
        FormulaPtr none0 =
            bf_not(qe_project(cy, bf_and({rng, bf_not(bf_or(miss))})));
        push(none0, 1);
      }
    }
    return res;
  }
  // Min / Max over an ℕ-valued function, total in y on the range
  {
    std::vector<FormulaPtr> all;
    for (const SFPiece& p : ex.pieces) all.push_back(p.phi);
    if (!bf_is_empty(cy, bf_and({rng, bf_not(bf_or(std::move(all)))})))
      fail("UsageError", "function not total on the range");
  }
  std::vector<Int> vals;
  for (const SFPiece& p : ex.pieces) vals.push_back(p.val.nat);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  if (which == Quant::Max) std::reverse(vals.begin(), vals.end());
  for (const Int& v : vals) {
    std::vector<FormulaPtr> level;
    for (const SFPiece& p : ex.pieces)
      if (p.val.nat == v) level.push_back(p.phi);
    push(qe_project(cy, bf_and({rng, bf_or(std::move(level))})), v);
  }
  return res;
}

// --------------------------------------------------------------- totality

TotalityResult totality(PieceStream& s, int budget) {
  TotalityResult r;
  StratifiedFunction acc;
  acc.ctx = s.ctx;
  std::vector<FormulaPtr> formulas;
  for (int i = 0; i < budget; i++) {
    auto p = s.next();
    if (!p) {
      r.kind = TotalityResult::NotTotal;
      r.witness = bf_not(bf_or(formulas));
      return r;
    }
    acc.pieces.push_back(*p);
    formulas.push_back(p->phi);
    if (bf_is_empty(s.ctx, bf_not(bf_or(formulas)))) {
      r.kind = TotalityResult::Total;
      r.fn = sf_exclusive(acc);
      r.fn.total = true;
      r.pieces = i + 1;
      return r;
    }
  }
  r.kind = TotalityResult::Unknown;
  return r;
}

// ------------------------------------------------------------ ℤ threshold

namespace {

/// Truth of a variable-free formula in "large characteristic" semantics
/// (an integer constant vanishes only when it is zero), collecting the
/// primes of every nonzero constant met along the way.
bool eval_large_char(const FormulaCtx& c, const FormulaPtr& f,
                     const std::vector<FElem>& ptQ, const FieldPtr& Q,
                     std::set<Int>& primes) {
  switch (f->kind) {
    case BoolFormula::Eq0: {
      FElem v = mpoly_eval(c.R, f->poly, Q, ptQ);
      Rat q = felem_rat(Q, v);
      if (q == 0) return true;
      int_prime_factors(Int(q.get_num()), primes);
      int_prime_factors(Int(q.get_den()), primes);
      return false;
    }
    case BoolFormula::Not:
      return !eval_large_char(c, f->kids[0], ptQ, Q, primes);
    case BoolFormula::And: {
      bool out = true;
      for (const auto& k : f->kids)
        out = eval_large_char(c, k, ptQ, Q, primes) && out;
      return out;
    }
    case BoolFormula::Or: {
      bool out = false;
      for (const auto& k : f->kids)
        out = eval_large_char(c, k, ptQ, Q, primes) || out;
      return out;
    }
  }
  fail("Internal", "unreachable formula kind");
}

}  // namespace

P0Data p0_threshold(const StratifiedFunction& f, const std::vector<Int>& pt) {
  if (!f.ctx.base.overZ) fail("UsageError", "threshold needs the ℤ base");
  if ((int)pt.size() != f.ctx.R->nvars()) fail("UsageError", "point arity");
  StratifiedFunction g = f;
  if (!g.total && !sf_certify_total(g))
    fail("UsageError", "threshold needs a total function");
  FieldPtr Q = Field::Q();
  std::vector<FElem> ptQ;
  for (const Int& x : pt) ptQ.push_back(Q->from_int(x));
  std::set<Int> primes;
  const SFPiece* match = nullptr;
  for (const SFPiece& p : g.pieces) {
    bool holds = eval_large_char(g.ctx, p.phi, ptQ, Q, primes);
    if (holds && !match) match = &p;
  }
  if (!match) fail("Internal", "total function matched no piece");
  P0Data out;
  if (match->val.kind == SFValue::Nat) {
    out.stable = match->val;
  } else {
    const FRational& u = *match->val.rat;
    if (u.depth != 0)
      fail("Internal", "ℤ-base stable value with Frobenius depth");
    FElem n = mpoly_eval(u.R, u.num, Q, ptQ);
    FElem d = mpoly_eval(u.R, u.den, Q, ptQ);
    Rat dq = felem_rat(Q, d);
    if (dq == 0)
      fail("UndefinedAtPoint", "stable value denominator vanishes");
    Rat v = felem_rat(Q, n) / dq;
    int_prime_factors(Int(v.get_den()), primes);
    FormulaCtx c0 = formula_ctx(vm_z(), {});
    out.stable = sv_rat(fr_make(
        c0, mp_const(c0.R, c0.R->K->from_rat(v)), mp_from_int(c0.R, 1)));
  }
  out.p0 = 1;
  for (const Int& p : primes) out.p0 = std::max(out.p0, Int(p + 1));
  return out;
}

}  // namespace effalg
