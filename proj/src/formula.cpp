#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <utility>

#include "effalg/fieldvm.hpp"
#include "fieldvm_impl.hpp"

namespace effalg {
namespace vmdetail {

Rat felem_rat(const FieldPtr& K, const FElem& c) {
  if (K->kind == Field::kQ) return std::get<Rat>(c.v);
  if (K->kind == Field::kFp) return Rat(std::get<int64_t>(c.v));
  fail("Internal", "formula coefficients must live in Q or a prime field");
}

FElem rat_to_field(const Rat& q, const FieldPtr& K) {
  FElem d = K->from_int(Int(q.get_den()));
  if (K->is_zero(d))
    fail("UsageError", "coefficient denominator vanishes in the target field");
  return K->div(K->from_int(Int(q.get_num())), d);
}

MPoly zb_clear(const RingPtr& R, MPoly f) {
  if (f.empty()) return f;
  Int den = 1;
  for (const MTerm& t : f) {
    Rat c = felem_rat(R->K, t.c);
    den = lcm(den, Int(c.get_den()));
  }
  if (den != 1) f = mp_scale(R, R->K->from_int(den), f);
  Rat lead = felem_rat(R->K, f.front().c);
  if (lead < 0) f = mp_neg(R, f);
  return f;
}

MPoly atom_normalize(const FormulaCtx& c, MPoly f) {
  mp_norm(c.R, f);
  if (f.empty()) return f;
  if (c.base.overZ) return zb_clear(c.R, f);
  return mp_monic(c.R, f);
}

static Int rho_step(const Int& x, const Int& c, const Int& n) {
  return (x * x + c) % n;
}

void int_prime_factors(Int n, std::set<Int>& out) {
  n = abs(n);
  if (n <= 1) return;
  for (long d : {2L, 3L, 5L, 7L, 11L, 13L}) {
    while (n % d == 0) {
      out.insert(Int(d));
      n /= d;
    }
  }
  Int d = 17;
  while (d * d <= n && d < 1000000) {
    while (n % d == 0) {
      out.insert(d);
      n /= d;
    }
    d += 2;
  }
  if (n == 1) return;
  std::vector<Int> stack{n};
  while (!stack.empty()) {
    Int m = stack.back();
    stack.pop_back();
    if (m == 1) continue;
    if (mpz_probab_prime_p(m.get_mpz_t(), 30)) {
      out.insert(m);
      continue;
    }
    Int c = 1, found = m;
    while (found == m) {
      Int x = 2, y = 2, g = 1;
      while (g == 1) {
        x = rho_step(x, c, m);
        y = rho_step(rho_step(y, c, m), c, m);
        Int diff = abs(x - y);
        if (diff == 0) break;
        g = gcd(diff, m);
      }
      if (g != 1 && g != m) found = g;
      c += 1;
    }
    stack.push_back(found);
    stack.push_back(m / found);
  }
}

void rat_den_primes(const Rat& q, std::set<Int>& out) {
  int_prime_factors(Int(q.get_den()), out);
}

void poly_den_primes(const RingPtr& R, const MPoly& f, std::set<Int>& out) {
  for (const MTerm& t : f) rat_den_primes(felem_rat(R->K, t.c), out);
}

void poly_coeff_primes(const RingPtr& R, const MPoly& f, std::set<Int>& out) {
  for (const MTerm& t : f) {
    Rat c = felem_rat(R->K, t.c);
    int_prime_factors(Int(c.get_num()), out);
    int_prime_factors(Int(c.get_den()), out);
  }
}

MPoly poly_mod_p(const RingPtr& Rq, const MPoly& f, const RingPtr& Rp) {
  long p = Rp->K->characteristic();
  MPoly out;
  for (const MTerm& t : f) {
    Rat c = felem_rat(Rq->K, t.c);
    if (Int(c.get_den()) % p == 0)
      fail("Internal", "denominator not invertible mod p");
    FElem cp = Rp->K->div(Rp->K->from_int(Int(c.get_num())),
                          Rp->K->from_int(Int(c.get_den())));
    if (Rp->K->is_zero(cp)) continue;
    out.push_back(MTerm{t.e, cp});
  }
  mp_norm(Rp, out);
  return out;
}

std::string poly_key(const RingPtr& R, const MPoly& f) {
  return mp_to_string(R, f);
}

FElem mpoly_eval(const RingPtr& R, const MPoly& f, const FieldPtr& K,
                 const std::vector<FElem>& pt) {
  FElem acc = K->zero();
  for (const MTerm& t : f) {
    FElem v = rat_to_field(felem_rat(R->K, t.c), K);
    for (int i = 0; i < R->nvars(); i++)
      if (t.e[i] > 0) v = K->mul(v, K->pow(pt[i], t.e[i]));
    acc = K->add(acc, v);
  }
  return acc;
}

MPoly poly_lift_p(const RingPtr& Rp, const MPoly& f, const RingPtr& Rq) {
  MPoly lift;
  for (const MTerm& t : f) {
    int64_t v = std::get<int64_t>(t.c.v);
    lift.push_back(MTerm{t.e, Rq->K->from_int(Int(v))});
  }
  mp_norm(Rq, lift);
  return lift;
}

FormulaPtr bf_mod_p(const FormulaCtx& cz, const FormulaPtr& f,
                    const FormulaCtx& cp) {
  switch (f->kind) {
    case BoolFormula::Eq0:
      return bf_eq0(cp, poly_mod_p(cz.R, f->poly, cp.R));
    case BoolFormula::Not:
      return bf_not(bf_mod_p(cz, f->kids[0], cp));
    case BoolFormula::And: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids) kids.push_back(bf_mod_p(cz, k, cp));
      return bf_and(std::move(kids));
    }
    case BoolFormula::Or: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids) kids.push_back(bf_mod_p(cz, k, cp));
      return bf_or(std::move(kids));
    }
  }
  fail("Internal", "unreachable");
}

std::set<Int> formula_coeff_primes(const FormulaCtx& c, const FormulaPtr& f) {
  std::set<Int> out;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (g->kind == BoolFormula::Eq0)
      poly_coeff_primes(c.R, g->poly, out);
    else
      for (const auto& k : g->kids) go(k);
  };
  go(f);
  return out;
}

std::string fresh_name(const RingPtr& R, const std::string& stem) {
  auto taken = [&](const std::string& s) {
    for (const std::string& v : R->vars)
      if (v == s) return true;
    return false;
  };
  if (!taken(stem)) return stem;
  for (int i = 0;; i++) {
    std::string cand = stem + std::to_string(i);
    if (!taken(cand)) return cand;
  }
}

/// Nonemptiness over a single algebraically closed field, by Rabinowitsch:
/// V(eqs) ∖ V(∏ neqs) = ∅ ⟺ 1 ∈ (eqs, 1 − t·∏ neqs).  The certificate of
/// the 1, when requested, is expressed over those generators.
static bool conj_empty_one_char(const RingPtr& R,
                                const std::vector<MPoly>& eqs,
                                const std::vector<MPoly>& neqs,
                                std::set<Int>* certPrimes) {
  std::vector<std::string> names = R->vars;
  names.push_back(fresh_name(R, "t"));
  RingPtr Rt = PolyRing::make(R->K, names, MOrder{});
  std::vector<MPoly> img;
  for (int i = 0; i < R->nvars(); i++) img.push_back(mp_var(Rt, i));
  Ideal gens;
  for (const MPoly& f : eqs) gens.push_back(mp_map(R, f, Rt, img));
  MPoly prod = mp_from_int(Rt, 1);
  for (const MPoly& g : neqs) prod = mp_mul(Rt, prod, mp_map(R, g, Rt, img));
  gens.push_back(
      mp_sub(Rt, mp_from_int(Rt, 1), mp_mul(Rt, mp_var(Rt, R->nvars()), prod)));
  GB gb = groebner_ideal(Rt, gens);
  std::vector<MPoly> cert;
  bool empty = ideal_member(Rt, gb, mp_from_int(Rt, 1),
                            certPrimes ? &cert : nullptr);
  if (empty && certPrimes)
    for (const MPoly& q : cert) poly_den_primes(Rt, q, *certPrimes);
  return empty;
}

bool conj_satisfiable(const FormulaCtx& c, const std::vector<MPoly>& eqs,
                      const std::vector<MPoly>& neqs) {
  if (!c.base.overZ)
    return !conj_empty_one_char(c.R, eqs, neqs, nullptr);
  std::set<Int> primes;
  if (!conj_empty_one_char(c.R, eqs, neqs, &primes)) return true;
  for (const Int& p : primes) {
    RingPtr Rp = PolyRing::make(Field::Fp(p.get_si()), c.R->vars, c.R->ord);
    std::vector<MPoly> eqp, nep;
    for (const MPoly& f : eqs) eqp.push_back(poly_mod_p(c.R, f, Rp));
    for (const MPoly& g : neqs) nep.push_back(poly_mod_p(c.R, g, Rp));
    if (!conj_empty_one_char(Rp, eqp, nep, nullptr)) return true;
  }
  return false;
}

}  // namespace vmdetail

using namespace vmdetail;

VmBase vm_fp(long p) {
  if (p < 1) fail("UsageError", "characteristic must be 1 or a prime");
  if (p > 1) {
    Int n(p);
    if (!mpz_probab_prime_p(n.get_mpz_t(), 30))
      fail("UsageError", "characteristic must be 1 or a prime");
  }
  VmBase b;
  b.overZ = false;
  b.p = p;
  return b;
}

VmBase vm_z() {
  VmBase b;
  b.overZ = true;
  b.p = 1;
  return b;
}

bool vm_eq(const VmBase& a, const VmBase& b) {
  if (a.overZ != b.overZ) return false;
  return a.overZ || a.p == b.p;
}

std::string vm_to_string(const VmBase& b) {
  if (b.overZ) return "Z";
  return "Fp(" + std::to_string(b.p) + ")";
}

FormulaCtx formula_ctx(const VmBase& b, const std::vector<std::string>& vars) {
  FormulaCtx c;
  c.base = b;
  FieldPtr K = (!b.overZ && b.p > 1) ? Field::Fp(b.p) : Field::Q();
  c.R = PolyRing::make(K, vars, MOrder{});
  return c;
}

FormulaCtx ctx_drop(const FormulaCtx& c, int k) {
  std::vector<std::string> vars(c.R->vars.begin(), c.R->vars.end() - k);
  return formula_ctx(c.base, vars);
}

FormulaCtx ctx_append(const FormulaCtx& c,
                      const std::vector<std::string>& names) {
  std::vector<std::string> vars = c.R->vars;
  for (const std::string& n : names) vars.push_back(n);
  return formula_ctx(c.base, vars);
}

FormulaPtr bf_true() {
  auto f = std::make_shared<BoolFormula>();
  f->kind = BoolFormula::And;
  return f;
}

FormulaPtr bf_false() {
  auto f = std::make_shared<BoolFormula>();
  f->kind = BoolFormula::Or;
  return f;
}

bool bf_is_true(const FormulaPtr& f) {
  return f->kind == BoolFormula::And && f->kids.empty();
}

bool bf_is_false(const FormulaPtr& f) {
  return f->kind == BoolFormula::Or && f->kids.empty();
}

FormulaPtr bf_eq0(const FormulaCtx& c, const MPoly& f0) {
  MPoly f = atom_normalize(c, f0);
  if (f.empty()) return bf_true();
  if (mp_total_deg(f) == 0) {
    // Over a fixed base a nonzero constant never vanishes; over Z the atom
    // selects the characteristics dividing it.
    if (!c.base.overZ) return bf_false();
    Rat v = felem_rat(c.R->K, f.front().c);
    if (Int(v.get_num()) == 1) return bf_false();
  }
  auto node = std::make_shared<BoolFormula>();
  node->kind = BoolFormula::Eq0;
  node->poly = f;
  return node;
}

FormulaPtr bf_and(std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> flat;
  for (auto& k : kids) {
    if (bf_is_true(k)) continue;
    if (bf_is_false(k)) return bf_false();
    if (k->kind == BoolFormula::And) {
      for (auto& kk : k->kids) flat.push_back(kk);
    } else {
      flat.push_back(k);
    }
  }
  if (flat.size() == 1) return flat[0];
  auto f = std::make_shared<BoolFormula>();
  f->kind = BoolFormula::And;
  f->kids = std::move(flat);
  return f;
}

FormulaPtr bf_or(std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> flat;
  for (auto& k : kids) {
    if (bf_is_false(k)) continue;
    if (bf_is_true(k)) return bf_true();
    if (k->kind == BoolFormula::Or) {
      for (auto& kk : k->kids) flat.push_back(kk);
    } else {
      flat.push_back(k);
    }
  }
  if (flat.size() == 1) return flat[0];
  auto f = std::make_shared<BoolFormula>();
  f->kind = BoolFormula::Or;
  f->kids = std::move(flat);
  return f;
}

FormulaPtr bf_not(FormulaPtr f) {
  if (bf_is_true(f)) return bf_false();
  if (bf_is_false(f)) return bf_true();
  if (f->kind == BoolFormula::Not) return f->kids[0];
  auto g = std::make_shared<BoolFormula>();
  g->kind = BoolFormula::Not;
  g->kids = {std::move(f)};
  return g;
}

// ---------------------------------------------------------------- parsing

namespace {

struct FParser {
  const FormulaCtx& c;
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
  }
  bool eat(char ch) {
    skip();
    if (i < s.size() && s[i] == ch) {
      i++;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }

  FormulaPtr expr() {
    std::vector<FormulaPtr> kids{term()};
    while (peek() == '|') {
      i++;
      kids.push_back(term());
    }
    return bf_or(std::move(kids));
  }

  FormulaPtr term() {
    std::vector<FormulaPtr> kids{factor()};
    for (;;) {
      char ch = peek();
      if (ch == '&') {
        i++;
        kids.push_back(factor());
      } else {
        break;
      }
    }
    return bf_and(std::move(kids));
  }

  // A parenthesized group is a sub-formula when its closing paren is
  // followed by a connective or the end; otherwise the parens belong to a
  // polynomial atom.
  FormulaPtr factor() {
    skip();
    if (i >= s.size()) fail("SchemaError", "formula ends unexpectedly");
    if (s[i] == '!') {
      if (i + 1 < s.size() && s[i + 1] == '=')
        fail("SchemaError", "atom starts with !=");
      i++;
      return bf_not(factor());
    }
    if (s.compare(i, 4, "true") == 0) {
      i += 4;
      return bf_true();
    }
    if (s.compare(i, 5, "false") == 0) {
      i += 5;
      return bf_false();
    }
    if (s[i] == '(') {
      size_t j = i, depth = 0;
      for (; j < s.size(); j++) {
        if (s[j] == '(') depth++;
        if (s[j] == ')' && --depth == 0) break;
      }
      if (j >= s.size()) fail("SchemaError", "unbalanced parentheses");
      size_t k = j + 1;
      while (k < s.size() && std::isspace((unsigned char)s[k])) k++;
      if (k >= s.size() || s[k] == '&' || s[k] == '|' || s[k] == ')') {
        size_t open = i;
        i++;
        FormulaPtr f = expr();
        if (!eat(')'))
          fail("SchemaError", "expected ')' for group at " +
                                 std::to_string(open));
        return f;
      }
    }
    return atom();
  }

  FormulaPtr atom() {
    skip();
    size_t start = i;
    int depth = 0;
    while (i < s.size()) {
      char ch = s[i];
      if (ch == '(') depth++;
      if (ch == ')') {
        if (depth == 0) break;
        depth--;
      }
      if (depth == 0 && (ch == '&' || ch == '|')) break;
      i++;
    }
    std::string chunk = s.substr(start, i - start);
    bool neq = false;
    size_t pos = chunk.find("!=");
    size_t cut = 2;
    if (pos != std::string::npos) {
      neq = true;
    } else {
      pos = chunk.find("==");
      if (pos == std::string::npos) {
        pos = chunk.find('=');
        cut = 1;
      }
    }
    if (pos == std::string::npos)
      fail("SchemaError", "atom without '=': " + chunk);
    std::string lhs = chunk.substr(0, pos);
    std::string rhs = chunk.substr(pos + cut);
    MPoly f = mp_parse(c.R, "(" + lhs + ")-(" + rhs + ")");
    FormulaPtr a = bf_eq0(c, f);
    return neq ? bf_not(a) : a;
  }
};

void to_string_rec(const FormulaCtx& c, const FormulaPtr& f,
                   std::ostringstream& out, int parentPrec) {
  // precedence: Or = 0, And = 1, Not/atom = 2
  switch (f->kind) {
    case BoolFormula::Eq0:
      out << mp_to_string(c.R, f->poly) << " = 0";
      return;
    case BoolFormula::Not:
      if (f->kids[0]->kind == BoolFormula::Eq0) {
        out << mp_to_string(c.R, f->kids[0]->poly) << " != 0";
        return;
      }
      out << "!(";
      to_string_rec(c, f->kids[0], out, 0);
      out << ")";
      return;
    case BoolFormula::And: {
      if (f->kids.empty()) {
        out << "true";
        return;
      }
      bool wrap = parentPrec > 1;
      if (wrap) out << "(";
      for (size_t i = 0; i < f->kids.size(); i++) {
        if (i) out << " & ";
        to_string_rec(c, f->kids[i], out, 2);
      }
      if (wrap) out << ")";
      return;
    }
    case BoolFormula::Or: {
      if (f->kids.empty()) {
        out << "false";
        return;
      }
      bool wrap = parentPrec > 0;
      if (wrap) out << "(";
      for (size_t i = 0; i < f->kids.size(); i++) {
        if (i) out << " | ";
        to_string_rec(c, f->kids[i], out, 1);
      }
      if (wrap) out << ")";
      return;
    }
  }
}

}  // namespace

FormulaPtr bf_parse(const FormulaCtx& c, const std::string& s) {
  FParser p{c, s};
  FormulaPtr f = p.expr();
  p.skip();
  if (p.i != s.size())
    fail("SchemaError", "trailing input in formula: " + s.substr(p.i));
  return f;
}

std::string bf_to_string(const FormulaCtx& c, const FormulaPtr& f) {
  std::ostringstream out;
  to_string_rec(c, f, out, 0);
  return out.str();
}

// ------------------------------------------------------------------- DNF

namespace {

// Returns false when the disjunct became syntactically contradictory.
bool disjunct_add(const FormulaCtx& c, Disjunct& d, const MPoly& f, bool eq) {
  if (f.empty()) return eq;
  if (!c.base.overZ && mp_total_deg(f) == 0) return !eq;
  if (c.base.overZ && mp_total_deg(f) == 0) {
    Rat v = felem_rat(c.R->K, f.front().c);
    if (Int(v.get_num()) == 1) return !eq;  // ±1 never vanishes
  }
  std::string key = poly_key(c.R, f);
  auto& mine = eq ? d.eqs : d.neqs;
  auto& other = eq ? d.neqs : d.eqs;
  for (const MPoly& g : other)
    if (poly_key(c.R, g) == key) return false;
  for (const MPoly& g : mine)
    if (poly_key(c.R, g) == key) return true;
  mine.push_back(f);
  return true;
}

void dnf_rec(const FormulaCtx& c, const FormulaPtr& f, bool neg,
             std::vector<Disjunct>& out) {
  switch (f->kind) {
    case BoolFormula::Eq0: {
      Disjunct d;
      if (disjunct_add(c, d, f->poly, !neg)) out.push_back(std::move(d));
      return;
    }
    case BoolFormula::Not:
      dnf_rec(c, f->kids[0], !neg, out);
      return;
    case BoolFormula::And:
    case BoolFormula::Or: {
      bool conj = (f->kind == BoolFormula::And) != neg;
      if (!conj) {
        for (const auto& k : f->kids) dnf_rec(c, k, neg, out);
        return;
      }
      std::vector<Disjunct> acc{Disjunct{}};
      for (const auto& k : f->kids) {
        std::vector<Disjunct> kd;
        dnf_rec(c, k, neg, kd);
        std::vector<Disjunct> next;
        for (const Disjunct& a : acc)
          for (const Disjunct& b : kd) {
            Disjunct m = a;
            bool ok = true;
            for (const MPoly& g : b.eqs)
              if (!disjunct_add(c, m, g, true)) {
                ok = false;
                break;
              }
            if (ok)
              for (const MPoly& g : b.neqs)
                if (!disjunct_add(c, m, g, false)) {
                  ok = false;
                  break;
                }
            if (ok) next.push_back(std::move(m));
          }
        acc = std::move(next);
        if (acc.empty()) return;
      }
      for (Disjunct& d : acc) out.push_back(std::move(d));
      return;
    }
  }
}

std::string disjunct_key(const FormulaCtx& c, const Disjunct& d) {
  std::ostringstream o;
  for (const MPoly& f : d.eqs) o << poly_key(c.R, f) << "=0;";
  o << "/";
  for (const MPoly& f : d.neqs) o << poly_key(c.R, f) << "!=0;";
  return o.str();
}

void disjunct_sort(const FormulaCtx& c, Disjunct& d) {
  auto lt = [&](const MPoly& a, const MPoly& b) {
    int da = mp_total_deg(a), db = mp_total_deg(b);
    if (da != db) return da < db;
    return poly_key(c.R, a) < poly_key(c.R, b);
  };
  std::sort(d.eqs.begin(), d.eqs.end(), lt);
  std::sort(d.neqs.begin(), d.neqs.end(), lt);
}

}  // namespace

std::vector<Disjunct> bf_dnf(const FormulaCtx& c, const FormulaPtr& f) {
  std::vector<Disjunct> raw;
  dnf_rec(c, f, false, raw);
  std::map<std::string, Disjunct> uniq;
  for (Disjunct& d : raw) {
    disjunct_sort(c, d);
    uniq.emplace(disjunct_key(c, d), std::move(d));
  }
  std::vector<Disjunct> out;
  for (auto& [k, d] : uniq) out.push_back(std::move(d));
  return out;
}

FormulaPtr bf_from_dnf(const FormulaCtx& c, const std::vector<Disjunct>& ds) {
  std::vector<FormulaPtr> ors;
  for (const Disjunct& d : ds) {
    std::vector<FormulaPtr> ands;
    for (const MPoly& f : d.eqs) ands.push_back(bf_eq0(c, f));
    for (const MPoly& f : d.neqs) ands.push_back(bf_not(bf_eq0(c, f)));
    ors.push_back(bf_and(std::move(ands)));
  }
  return bf_or(std::move(ors));
}

// ------------------------------------------------------ decision procedures

bool bf_is_empty(const FormulaCtx& c, const FormulaPtr& f) {
  for (const Disjunct& d : bf_dnf(c, f))
    if (conj_satisfiable(c, d.eqs, d.neqs)) return false;
  return true;
}

bool bf_implies(const FormulaCtx& c, const FormulaPtr& f, const FormulaPtr& g) {
  return bf_is_empty(c, bf_and({f, bf_not(g)}));
}

bool bf_equals(const FormulaCtx& c, const FormulaPtr& f, const FormulaPtr& g) {
  return bf_implies(c, f, g) && bf_implies(c, g, f);
}

FormulaPtr bf_closure(const FormulaCtx& c, const FormulaPtr& f) {
  std::vector<FormulaPtr> parts;
  for (const Disjunct& d : bf_dnf(c, f)) {
    if (!conj_satisfiable(c, d.eqs, d.neqs)) continue;
    Ideal I = d.eqs.empty() ? Ideal{} : Ideal(d.eqs.begin(), d.eqs.end());
    Ideal div(d.neqs.begin(), d.neqs.end());
    Ideal sat = div.empty() ? I : ideal_saturate(c.R, I, div);
    std::vector<FormulaPtr> conj;
    for (const MPoly& g : sat) conj.push_back(bf_eq0(c, g));
    parts.push_back(bf_and(std::move(conj)));
    if (c.base.overZ) {
      // Closed pieces for the finitely many characteristics where the
      // characteristic-zero saturation can deviate: primes seen in the
      // data and in the membership certificates of the saturation output.
      std::set<Int> primes;
      for (const MPoly& g : d.eqs) poly_coeff_primes(c.R, g, primes);
      for (const MPoly& g : d.neqs) poly_coeff_primes(c.R, g, primes);
      for (const MPoly& g : sat) poly_coeff_primes(c.R, g, primes);
      for (const Int& p : primes) {
        RingPtr Rp = PolyRing::make(Field::Fp(p.get_si()), c.R->vars, c.R->ord);
        Ideal Ip, divp;
        for (const MPoly& g : d.eqs) Ip.push_back(poly_mod_p(c.R, g, Rp));
        bool neqDead = false;
        for (const MPoly& g : d.neqs) {
          MPoly gp = poly_mod_p(c.R, g, Rp);
          if (gp.empty()) neqDead = true;
          divp.push_back(gp);
        }
        if (neqDead) continue;  // the disjunct is empty in characteristic p
        Ideal satp = divp.empty() ? Ip : ideal_saturate(Rp, Ip, divp);
        std::vector<FormulaPtr> conjp{bf_eq0(c, mp_from_int(c.R, p.get_si()))};
        bool trivial = false;
        for (const MPoly& g : satp) {
          if (!g.empty() && mp_total_deg(g) == 0) trivial = true;
          conjp.push_back(bf_eq0(c, poly_lift_p(Rp, g, c.R)));
        }
        if (!trivial) parts.push_back(bf_and(std::move(conjp)));
      }
    }
  }
  return bf_or(std::move(parts));
}

bool bf_eval(const FormulaCtx& c, const FormulaPtr& f, const FieldPtr& K,
             const std::vector<FElem>& pt) {
  if ((int)pt.size() != c.R->nvars())
    fail("UsageError", "point arity does not match the formula context");
  if (!c.base.overZ) {
    long want = c.base.p == 1 ? 0 : c.base.p;
    if (K->characteristic() != want)
      fail("UsageError", "field characteristic incompatible with the base");
  }
  switch (f->kind) {
    case BoolFormula::Eq0:
      return K->is_zero(mpoly_eval(c.R, f->poly, K, pt));
    case BoolFormula::Not:
      return !bf_eval(c, f->kids[0], K, pt);
    case BoolFormula::And:
      for (const auto& k : f->kids)
        if (!bf_eval(c, k, K, pt)) return false;
      return true;
    case BoolFormula::Or:
      for (const auto& k : f->kids)
        if (bf_eval(c, k, K, pt)) return true;
      return false;
  }
  fail("Internal", "unreachable");
}

FormulaPtr bf_extend(const FormulaCtx& from, const FormulaPtr& f,
                     const FormulaCtx& to) {
  if (!vm_eq(from.base, to.base))
    fail("BaseMismatch", "formula bases differ");
  std::vector<MPoly> img(from.R->nvars());
  std::vector<int> missing;
  for (int i = 0; i < from.R->nvars(); i++) {
    int j = -1;
    for (int k = 0; k < to.R->nvars(); k++)
      if (to.R->vars[k] == from.R->vars[i]) j = k;
    if (j < 0) {
      missing.push_back(i);
      img[i] = mp_const(to.R, to.R->K->zero());
    } else {
      img[i] = mp_var(to.R, j);
    }
  }
  std::function<FormulaPtr(const FormulaPtr&)> go =
      [&](const FormulaPtr& g) -> FormulaPtr {
    switch (g->kind) {
      case BoolFormula::Eq0: {
        for (int i : missing)
          if (mp_deg_in(g->poly, i) > 0)
            fail("UnknownVariable",
                 "variable " + from.R->vars[i] + " missing from the target");
        return bf_eq0(to, mp_map(from.R, g->poly, to.R, img));
      }
      case BoolFormula::Not:
        return bf_not(go(g->kids[0]));
      case BoolFormula::And: {
        std::vector<FormulaPtr> kids;
        for (const auto& k : g->kids) kids.push_back(go(k));
        return bf_and(std::move(kids));
      }
      case BoolFormula::Or: {
        std::vector<FormulaPtr> kids;
        for (const auto& k : g->kids) kids.push_back(go(k));
        return bf_or(std::move(kids));
      }
    }
    fail("Internal", "unreachable");
  };
  return go(f);
}

}  // namespace effalg
