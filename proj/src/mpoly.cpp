#include "effalg/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

namespace effalg {

RingPtr PolyRing::make(const FieldPtr& K, const std::vector<std::string>& vars,
                       MOrder ord) {
  auto r = std::make_shared<PolyRing>();
  r->K = K;
  r->vars = vars;
  r->ord = ord;
  return r;
}

int PolyRing::var_index(const std::string& name) const {
  for (int i = 0; i < (int)vars.size(); i++)
    if (vars[i] == name) return i;
  return -1;
}

/* ---------------- monomials ---------------- */

int mono_deg(const Expo& a) {
  int d = 0;
  for (int e : a) d += e;
  return d;
}

Expo mono_mul(const Expo& a, const Expo& b) {
  Expo r(a.size());
  for (size_t i = 0; i < a.size(); i++) r[i] = a[i] + b[i];
  return r;
}

bool mono_divides(const Expo& a, const Expo& b) {
  for (size_t i = 0; i < a.size(); i++)
    if (a[i] > b[i]) return false;
  return true;
}

Expo mono_div(const Expo& b, const Expo& a) {
  Expo r(b.size());
  for (size_t i = 0; i < b.size(); i++) r[i] = b[i] - a[i];
  return r;
}

Expo mono_lcm(const Expo& a, const Expo& b) {
  Expo r(a.size());
  for (size_t i = 0; i < a.size(); i++) r[i] = std::max(a[i], b[i]);
  return r;
}

static int grevlex_slice(const Expo& a, const Expo& b, int lo, int hi) {
  int da = 0, db = 0;
  for (int i = lo; i < hi; i++) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (int i = hi - 1; i >= lo; i--)
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  return 0;
}

int mono_cmp(const RingPtr& R, const Expo& a, const Expo& b) {
  int n = R->nvars();
  switch (R->ord.kind) {
    case OrdKind::Grevlex:
      return grevlex_slice(a, b, 0, n);
    case OrdKind::Lex:
      for (int i = 0; i < n; i++)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
      return 0;
    case OrdKind::Block: {
      int c = grevlex_slice(a, b, 0, R->ord.block);
      if (c) return c;
      return grevlex_slice(a, b, R->ord.block, n);
    }
  }
  return 0;
}

/* ---------------- polynomial arithmetic ---------------- */

void mp_norm(const RingPtr& R, MPoly& f) {
  std::sort(f.begin(), f.end(), [&](const MTerm& a, const MTerm& b) {
    return mono_cmp(R, a.e, b.e) > 0;
  });
  MPoly out;
  for (auto& t : f) {
    if (!out.empty() && out.back().e == t.e)
      out.back().c = R->K->add(out.back().c, t.c);
    else
      out.push_back(t);
    if (!out.empty() && R->K->is_zero(out.back().c)) out.pop_back();
  }
  f = std::move(out);
}

bool mp_is_zero(const MPoly& f) { return f.empty(); }

MPoly mp_const(const RingPtr& R, const FElem& c) {
  if (R->K->is_zero(c)) return {};
  return {MTerm{Expo(R->nvars(), 0), c}};
}

MPoly mp_from_int(const RingPtr& R, long n) { return mp_const(R, R->K->from_int(n)); }

MPoly mp_var(const RingPtr& R, int i, int e) {
  if (e == 0) return mp_const(R, R->K->one());
  Expo ex(R->nvars(), 0);
  ex[i] = e;
  return {MTerm{ex, R->K->one()}};
}

MPoly mp_add(const RingPtr& R, const MPoly& a, const MPoly& b) {
  MPoly r;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i >= a.size())
      c = -1;
    else if (j >= b.size())
      c = 1;
    else
      c = mono_cmp(R, a[i].e, b[j].e);
    if (c > 0)
      r.push_back(a[i++]);
    else if (c < 0)
      r.push_back(b[j++]);
    else {
      FElem s = R->K->add(a[i].c, b[j].c);
      if (!R->K->is_zero(s)) r.push_back({a[i].e, s});
      i++;
      j++;
    }
  }
  return r;
}

MPoly mp_neg(const RingPtr& R, const MPoly& a) {
  MPoly r = a;
  for (auto& t : r) t.c = R->K->neg(t.c);
  return r;
}

MPoly mp_sub(const RingPtr& R, const MPoly& a, const MPoly& b) {
  return mp_add(R, a, mp_neg(R, b));
}

MPoly mp_mul_term(const RingPtr& R, const FElem& c, const Expo& e, const MPoly& a) {
  if (R->K->is_zero(c)) return {};
  MPoly r;
  r.reserve(a.size());
  for (auto& t : a) {
    FElem p = R->K->mul(c, t.c);
    if (!R->K->is_zero(p)) r.push_back({mono_mul(t.e, e), p});
  }
  return r;
}

MPoly mp_mul(const RingPtr& R, const MPoly& a, const MPoly& b) {
  MPoly acc;
  for (auto& t : a) acc = mp_add(R, acc, mp_mul_term(R, t.c, t.e, b));
  return acc;
}

MPoly mp_scale(const RingPtr& R, const FElem& c, const MPoly& a) {
  return mp_mul_term(R, c, Expo(R->nvars(), 0), a);
}

MPoly mp_pow(const RingPtr& R, const MPoly& a, int n) {
  MPoly acc = mp_const(R, R->K->one());
  MPoly base = a;
  while (n > 0) {
    if (n & 1) acc = mp_mul(R, acc, base);
    n >>= 1;
    if (n) base = mp_mul(R, base, base);
  }
  return acc;
}

MPoly mp_monic(const RingPtr& R, const MPoly& a) {
  if (a.empty() || R->K->is_one(a[0].c)) return a;
  return mp_scale(R, R->K->inv(a[0].c), a);
}

bool mp_eq(const RingPtr& R, const MPoly& a, const MPoly& b) {
  return mp_cmp(R, a, b) == 0;
}

int mp_cmp(const RingPtr& R, const MPoly& a, const MPoly& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; i++) {
    int c = mono_cmp(R, a[i].e, b[i].e);
    if (c) return c;
    c = felem_cmp(a[i].c, b[i].c);
    if (c) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int mp_total_deg(const MPoly& f) {
  int d = -1;
  for (auto& t : f) d = std::max(d, mono_deg(t.e));
  return d;
}

int mp_deg_in(const MPoly& f, int var) {
  int d = -1;
  for (auto& t : f) d = std::max(d, t.e[var]);
  return d;
}

MPoly mp_deriv(const RingPtr& R, const MPoly& f, int var) {
  MPoly r;
  for (auto& t : f) {
    if (t.e[var] == 0) continue;
    FElem c = R->K->mul(R->K->from_int(t.e[var]), t.c);
    if (R->K->is_zero(c)) continue;
    Expo e = t.e;
    e[var]--;
    r.push_back({e, c});
  }
  mp_norm(R, r);
  return r;
}

MPoly mp_subst(const RingPtr& R, const MPoly& f, int var, const MPoly& value) {
  // Horner over the exponents of `var`
  std::map<int, MPoly, std::greater<int>> layers;
  for (auto& t : f) {
    Expo e = t.e;
    int k = e[var];
    e[var] = 0;
    layers[k].push_back({e, t.c});
  }
  for (auto& [k, g] : layers) mp_norm(R, g);
  MPoly acc;
  int prev = -1;
  for (auto& [k, g] : layers) {
    if (prev < 0)
      acc = g;
    else {
      for (int i = 0; i < prev - k; i++) acc = mp_mul(R, acc, value);
      acc = mp_add(R, acc, g);
    }
    prev = k;
  }
  if (prev > 0)
    for (int i = 0; i < prev; i++) acc = mp_mul(R, acc, value);
  return acc;
}

MPoly mp_map(const RingPtr& R_from, const MPoly& f, const RingPtr& R_to,
             const std::vector<MPoly>& images,
             const std::function<FElem(const FElem&)>& coeff_map) {
  MPoly acc;
  for (auto& t : f) {
    MPoly term = mp_const(R_to, coeff_map ? coeff_map(t.c) : t.c);
    for (int i = 0; i < R_from->nvars(); i++)
      if (t.e[i]) term = mp_mul(R_to, term, mp_pow(R_to, images[i], t.e[i]));
    acc = mp_add(R_to, acc, term);
  }
  return acc;
}

bool mp_is_univariate(const MPoly& f, int var) {
  for (auto& t : f)
    for (size_t i = 0; i < t.e.size(); i++)
      if ((int)i != var && t.e[i]) return false;
  return true;
}

UPoly mp_to_upoly(const RingPtr& R, const MPoly& f, int var) {
  if (!mp_is_univariate(f, var)) fail("Internal", "polynomial is not univariate");
  UPoly r;
  for (auto& t : f) {
    if ((int)r.size() <= t.e[var]) r.resize(t.e[var] + 1, R->K->zero());
    r[t.e[var]] = t.c;
  }
  upnorm(R->K, r);
  return r;
}

MPoly mp_from_upoly(const RingPtr& R, const UPoly& f, int var) {
  MPoly r;
  for (size_t i = 0; i < f.size(); i++) {
    if (R->K->is_zero(f[i])) continue;
    Expo e(R->nvars(), 0);
    e[var] = (int)i;
    r.push_back({e, f[i]});
  }
  mp_norm(R, r);
  return r;
}

/* ---------------- text form ---------------- */

static bool coeff_needs_paren(const std::string& s) {
  for (char c : s)
    if (c == '+' || c == '-' || c == '*' || c == ' ') return true;
  return false;
}

std::string mp_to_string(const RingPtr& R, const MPoly& f) {
  if (f.empty()) return "0";
  std::string out;
  for (size_t k = 0; k < f.size(); k++) {
    const MTerm& t = f[k];
    std::string cs = R->K->to_string(t.c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (neg) cs = R->K->to_string(R->K->neg(t.c));
    std::string mono;
    for (int i = 0; i < R->nvars(); i++) {
      if (!t.e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += R->vars[i];
      if (t.e[i] > 1) mono += "^" + std::to_string(t.e[i]);
    }
    std::string term;
    if (mono.empty())
      term = coeff_needs_paren(cs) ? "(" + cs + ")" : cs;
    else if (cs == "1")
      term = mono;
    else
      term = (coeff_needs_paren(cs) ? "(" + cs + ")" : cs) + "*" + mono;
    if (k == 0)
      out += (neg ? "-" : "") + term;
    else
      out += (neg ? " - " : " + ") + term;
  }
  return out;
}

namespace {

struct MParser {
  const RingPtr& R;
  const std::string& s;
  size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
  }
  bool peek(char c) {
    ws();
    return i < s.size() && s[i] == c;
  }
  bool take(char c) {
    if (peek(c)) {
      i++;
      return true;
    }
    return false;
  }

  MPoly expr() {
    MPoly r = term();
    while (true) {
      if (take('+'))
        r = mp_add(R, r, term());
      else if (take('-'))
        r = mp_sub(R, r, term());
      else
        return r;
    }
  }

  MPoly term() {
    MPoly r = factor();
    while (true) {
      if (take('*'))
        r = mp_mul(R, r, factor());
      else if (take('/')) {
        MPoly d = factor();
        if (mp_total_deg(d) > 0) fail("SchemaError", "division by a non-constant");
        if (d.empty()) fail("DivisionByZero", "division by zero");
        r = mp_scale(R, R->K->inv(d[0].c), r);
      } else
        return r;
    }
  }

  MPoly factor() {
    ws();
    if (take('-')) return mp_neg(R, factor());
    if (take('+')) return factor();
    MPoly base = atom();
    ws();
    if (i < s.size() && s[i] == '^') {
      i++;
      ws();
      bool neg = false;
      if (i < s.size() && s[i] == '-') {
        neg = true;
        i++;
      }
      long e = 0;
      if (i >= s.size() || !std::isdigit((unsigned char)s[i]))
        fail("SchemaError", "exponent expected");
      while (i < s.size() && std::isdigit((unsigned char)s[i]))
        e = e * 10 + (s[i++] - '0');
      if (neg) {
        if (mp_total_deg(base) > 0) fail("SchemaError", "negative power of a variable");
        if (base.empty()) fail("DivisionByZero", "zero to a negative power");
        return mp_const(R, R->K->pow(R->K->inv(base[0].c), Int(e)));
      }
      return mp_pow(R, base, (int)e);
    }
    return base;
  }

  MPoly atom() {
    ws();
    if (i >= s.size()) fail("SchemaError", "unexpected end of polynomial");
    if (take('(')) {
      MPoly r = expr();
      if (!take(')')) fail("SchemaError", "missing )");
      return r;
    }
    if (std::isdigit((unsigned char)s[i])) {
      size_t j = i;
      while (j < s.size() && std::isdigit((unsigned char)s[j])) j++;
      Int n(s.substr(i, j - i));
      i = j;
      return mp_const(R, R->K->from_int(n));
    }
    if (std::isalpha((unsigned char)s[i]) || s[i] == '_') {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum((unsigned char)s[j]) || s[j] == '_' || s[j] == '\''))
        j++;
      std::string name = s.substr(i, j - i);
      if (name == "frobinv") {
        // hand the whole call to the coefficient-field parser
        size_t k = j;
        while (k < s.size() && s[k] != '(') k++;
        if (k == s.size()) fail("SchemaError", "frobinv needs arguments");
        int depth = 0;
        size_t end = k;
        for (; end < s.size(); end++) {
          if (s[end] == '(') depth++;
          if (s[end] == ')' && --depth == 0) break;
        }
        if (depth != 0) fail("SchemaError", "missing )");
        std::string call = s.substr(i, end + 1 - i);
        i = end + 1;
        return mp_const(R, R->K->parse_element(call));
      }
      i = j;
      int v = R->var_index(name);
      if (v >= 0) return mp_var(R, v);
      return mp_const(R, R->K->parse_element(name));
    }
    fail("SchemaError", std::string("unexpected character '") + s[i] + "'");
  }
};

}  // namespace

MPoly mp_parse(const RingPtr& R, const std::string& s) {
  MParser p{R, s};
  MPoly r = p.expr();
  p.ws();
  if (p.i != s.size()) fail("SchemaError", "trailing input in polynomial");
  return r;
}

/* ---------------- module vectors ---------------- */

MVec mv_zero(int n) { return MVec(n); }

bool mv_is_zero(const MVec& v) {
  for (auto& f : v)
    if (!f.empty()) return false;
  return true;
}

MVec mv_add(const RingPtr& R, const MVec& a, const MVec& b) {
  MVec r(a.size());
  for (size_t i = 0; i < a.size(); i++) r[i] = mp_add(R, a[i], b[i]);
  return r;
}

MVec mv_sub(const RingPtr& R, const MVec& a, const MVec& b) {
  MVec r(a.size());
  for (size_t i = 0; i < a.size(); i++) r[i] = mp_sub(R, a[i], b[i]);
  return r;
}

MVec mv_scale(const RingPtr& R, const MPoly& c, const MVec& a) {
  MVec r(a.size());
  for (size_t i = 0; i < a.size(); i++) r[i] = mp_mul(R, c, a[i]);
  return r;
}

MVec mv_mul_term(const RingPtr& R, const FElem& c, const Expo& e, const MVec& a) {
  MVec r(a.size());
  for (size_t i = 0; i < a.size(); i++) r[i] = mp_mul_term(R, c, e, a[i]);
  return r;
}

bool mv_eq(const RingPtr& R, const MVec& a, const MVec& b) {
  return mv_cmp(R, a, b) == 0;
}

int mv_cmp(const RingPtr& R, const MVec& a, const MVec& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); i++) {
    int c = mp_cmp(R, a[i], b[i]);
    if (c) return c;
  }
  return 0;
}

MvLead mv_lead(const RingPtr& R, const MVec& v) {
  MvLead l;
  for (size_t i = 0; i < v.size(); i++) {
    if (v[i].empty()) continue;
    l.comp = (int)i;
    l.e = v[i][0].e;
    l.c = v[i][0].c;
    return l;
  }
  return l;
}

std::string mv_to_string(const RingPtr& R, const MVec& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); i++) {
    if (i) out += ", ";
    out += mp_to_string(R, v[i]);
  }
  return out + "]";
}

}  // namespace effalg
