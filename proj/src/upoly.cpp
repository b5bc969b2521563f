#include "effalg/upoly.hpp"

namespace effalg {

int updeg(const UPoly& f) { return (int)f.size() - 1; }

void upnorm(const FieldPtr& K, UPoly& f) {
  while (!f.empty() && K->is_zero(f.back())) f.pop_back();
}

bool upis_zero(const FieldPtr& K, const UPoly& f) {
  for (auto& c : f)
    if (!K->is_zero(c)) return false;
  return true;
}

bool upeq(const FieldPtr& K, const UPoly& a, const UPoly& b) {
  UPoly d = upsub(K, a, b);
  return d.empty();
}

UPoly upconst(const FieldPtr& K, const FElem& c) {
  if (K->is_zero(c)) return {};
  return {c};
}

UPoly upx(const FieldPtr& K) { return {K->zero(), K->one()}; }

UPoly upmono(const FieldPtr& K, const FElem& c, int e) {
  if (K->is_zero(c)) return {};
  UPoly f(e + 1, K->zero());
  f[e] = c;
  return f;
}

UPoly upadd(const FieldPtr& K, const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()), K->zero());
  for (size_t i = 0; i < a.size(); i++) r[i] = a[i];
  for (size_t i = 0; i < b.size(); i++) r[i] = K->add(r[i], b[i]);
  upnorm(K, r);
  return r;
}

UPoly upneg(const FieldPtr& K, const UPoly& a) {
  UPoly r = a;
  for (auto& c : r) c = K->neg(c);
  return r;
}

UPoly upsub(const FieldPtr& K, const UPoly& a, const UPoly& b) {
  return upadd(K, a, upneg(K, b));
}

UPoly upmul(const FieldPtr& K, const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, K->zero());
  for (size_t i = 0; i < a.size(); i++) {
    if (K->is_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); j++) {
      if (K->is_zero(b[j])) continue;
      r[i + j] = K->add(r[i + j], K->mul(a[i], b[j]));
    }
  }
  upnorm(K, r);
  return r;
}

UPoly upscale(const FieldPtr& K, const FElem& c, const UPoly& a) {
  if (K->is_zero(c)) return {};
  UPoly r = a;
  for (auto& x : r) x = K->mul(c, x);
  upnorm(K, r);
  return r;
}

UPoly uppow(const FieldPtr& K, const UPoly& a, const Int& e_in) {
  Int e = e_in;
  UPoly base = a, acc = {K->one()};
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = upmul(K, acc, base);
    e >>= 1;
    if (e > 0) base = upmul(K, base, base);
  }
  return acc;
}

UPoly updivrem(const FieldPtr& K, const UPoly& a, const UPoly& b, UPoly* rem) {
  if (upis_zero(K, b)) fail("DivisionByZero", "polynomial division by zero");
  UPoly r = a, q;
  upnorm(K, r);
  int db = updeg(b);
  FElem ilc = K->inv(b[db]);
  while (updeg(r) >= db) {
    int k = updeg(r) - db;
    FElem c = K->mul(r[updeg(r)], ilc);
    if ((int)q.size() <= k) q.resize(k + 1, K->zero());
    q[k] = K->add(q[k], c);
    for (int i = 0; i <= db; i++) r[i + k] = K->sub_(r[i + k], K->mul(c, b[i]));
    upnorm(K, r);
  }
  upnorm(K, q);
  if (rem) *rem = r;
  return q;
}

bool updivides(const FieldPtr& K, const UPoly& d, const UPoly& a) {
  if (upis_zero(K, a)) return true;
  if (upis_zero(K, d)) return false;
  UPoly r;
  updivrem(K, a, d, &r);
  return r.empty();
}

UPoly upmod(const FieldPtr& K, const UPoly& a, const UPoly& b) {
  UPoly r;
  updivrem(K, a, b, &r);
  return r;
}

UPoly upmonic(const FieldPtr& K, const UPoly& a) {
  UPoly r = a;
  upnorm(K, r);
  if (r.empty()) return r;
  if (K->is_one(r.back())) return r;
  return upscale(K, K->inv(r.back()), r);
}

UPoly upgcd(const FieldPtr& K, UPoly a, UPoly b) {
  upnorm(K, a);
  upnorm(K, b);
  while (!b.empty()) {
    UPoly r = upmod(K, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return upmonic(K, a);
}

UPoly upxgcd(const FieldPtr& K, const UPoly& a, const UPoly& b, UPoly* u, UPoly* v) {
  UPoly r0 = a, r1 = b;
  upnorm(K, r0);
  upnorm(K, r1);
  UPoly s0 = {K->one()}, s1 = {};
  UPoly t0 = {}, t1 = {K->one()};
  while (!r1.empty()) {
    UPoly q = updivrem(K, r0, r1, nullptr);
    UPoly r2 = upsub(K, r0, upmul(K, q, r1));
    UPoly s2 = upsub(K, s0, upmul(K, q, s1));
    UPoly t2 = upsub(K, t0, upmul(K, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (u) *u = s0;
  if (v) *v = t0;
  return r0;
}

UPoly upderiv(const FieldPtr& K, const UPoly& a) {
  UPoly r;
  for (size_t i = 1; i < a.size(); i++) r.push_back(K->mul(K->from_int(Int((long)i)), a[i]));
  upnorm(K, r);
  return r;
}

FElem upeval(const FieldPtr& K, const UPoly& a, const FElem& x) {
  FElem acc = K->zero();
  for (int i = updeg(a); i >= 0; i--) acc = K->add(K->mul(acc, x), a[i]);
  return acc;
}

UPoly upcompose(const FieldPtr& K, const UPoly& a, const UPoly& b) {
  UPoly acc;
  for (int i = updeg(a); i >= 0; i--) {
    acc = upmul(K, acc, b);
    acc = upadd(K, acc, upconst(K, a[i]));
  }
  return acc;
}

UPoly uppowmod(const FieldPtr& K, const UPoly& a, const Int& e_in, const UPoly& mod) {
  Int e = e_in;
  UPoly base = upmod(K, a, mod), acc = {K->one()};
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = upmod(K, upmul(K, acc, base), mod);
    e >>= 1;
    if (e > 0) base = upmod(K, upmul(K, base, base), mod);
  }
  return acc;
}

FElem upresultant(const FieldPtr& K, const UPoly& a_in, const UPoly& b_in) {
  UPoly a = a_in, b = b_in;
  upnorm(K, a);
  upnorm(K, b);
  if (a.empty() || b.empty()) return K->zero();
  FElem acc = K->one();
  bool negate = false;
  while (true) {
    if (updeg(b) == 0) {
      acc = K->mul(acc, K->pow(b[0], Int(updeg(a))));
      break;
    }
    UPoly r = upmod(K, a, b);
    if (r.empty()) return K->zero();
    if ((updeg(a) & 1) && (updeg(b) & 1)) negate = !negate;
    acc = K->mul(acc, K->pow(b[updeg(b)], Int(updeg(a) - updeg(r))));
    a = std::move(b);
    b = std::move(r);
  }
  return negate ? K->neg(acc) : acc;
}

std::string upto_string_impl(const FieldPtr& K, const UPoly& f, const std::string& var);
std::string upto_string(const FieldPtr& K, const UPoly& f, const std::string& var) {
  return upto_string_impl(K, f, var);
}

/* ---------------- dense linear algebra ---------------- */

bool linsolve(const FieldPtr& K, std::vector<std::vector<FElem>> M,
              std::vector<FElem> rhs, std::vector<FElem>& x) {
  size_t n = M.size();
  size_t m = n ? M[0].size() : 0;
  std::vector<int> pivot_col;
  size_t row = 0;
  for (size_t col = 0; col < m && row < n; col++) {
    size_t pr = row;
    while (pr < n && K->is_zero(M[pr][col])) pr++;
    if (pr == n) continue;
    std::swap(M[pr], M[row]);
    std::swap(rhs[pr], rhs[row]);
    FElem ip = K->inv(M[row][col]);
    for (size_t j = col; j < m; j++) M[row][j] = K->mul(ip, M[row][j]);
    rhs[row] = K->mul(ip, rhs[row]);
    for (size_t r = 0; r < n; r++) {
      if (r == row || K->is_zero(M[r][col])) continue;
      FElem c = M[r][col];
      for (size_t j = col; j < m; j++) M[r][j] = K->sub_(M[r][j], K->mul(c, M[row][j]));
      rhs[r] = K->sub_(rhs[r], K->mul(c, rhs[row]));
    }
    pivot_col.push_back((int)col);
    row++;
  }
  for (size_t r = row; r < n; r++)
    if (!K->is_zero(rhs[r])) return false;
  x.assign(m, K->zero());
  for (size_t r = 0; r < pivot_col.size(); r++) x[pivot_col[r]] = rhs[r];
  return true;
}

int linrank(const FieldPtr& K, std::vector<std::vector<FElem>> M) {
  size_t n = M.size();
  size_t m = n ? M[0].size() : 0;
  size_t row = 0;
  for (size_t col = 0; col < m && row < n; col++) {
    size_t pr = row;
    while (pr < n && K->is_zero(M[pr][col])) pr++;
    if (pr == n) continue;
    std::swap(M[pr], M[row]);
    FElem ip = K->inv(M[row][col]);
    for (size_t j = col; j < m; j++) M[row][j] = K->mul(ip, M[row][j]);
    for (size_t r = row + 1; r < n; r++) {
      if (K->is_zero(M[r][col])) continue;
      FElem c = M[r][col];
      for (size_t j = col; j < m; j++) M[r][j] = K->sub_(M[r][j], K->mul(c, M[row][j]));
    }
    row++;
  }
  return (int)row;
}

std::vector<std::vector<FElem>> linnull(const FieldPtr& K,
                                        std::vector<std::vector<FElem>> M) {
  size_t n = M.size();
  size_t m = n ? M[0].size() : 0;
  std::vector<int> pivot_of_col(m, -1);
  size_t row = 0;
  for (size_t col = 0; col < m && row < n; col++) {
    size_t pr = row;
    while (pr < n && K->is_zero(M[pr][col])) pr++;
    if (pr == n) continue;
    std::swap(M[pr], M[row]);
    FElem ip = K->inv(M[row][col]);
    for (size_t j = col; j < m; j++) M[row][j] = K->mul(ip, M[row][j]);
    for (size_t r = 0; r < n; r++) {
      if (r == row || K->is_zero(M[r][col])) continue;
      FElem c = M[r][col];
      for (size_t j = col; j < m; j++) M[r][j] = K->sub_(M[r][j], K->mul(c, M[row][j]));
    }
    pivot_of_col[col] = (int)row;
    row++;
  }
  std::vector<std::vector<FElem>> basis;
  for (size_t col = 0; col < m; col++) {
    if (pivot_of_col[col] >= 0) continue;
    std::vector<FElem> v(m, K->zero());
    v[col] = K->one();
    for (size_t c2 = 0; c2 < m; c2++)
      if (pivot_of_col[c2] >= 0) v[c2] = K->neg(M[pivot_of_col[c2]][col]);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace effalg
