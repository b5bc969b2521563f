#pragma once
/// \file upoly.hpp
/// \brief Dense univariate polynomial arithmetic over a Field, plus small
/// dense linear algebra used by tower constructions and factorization.

#include "effalg/field.hpp"

namespace effalg {

int updeg(const UPoly& f);  // -1 for the zero polynomial
void upnorm(const FieldPtr& K, UPoly& f);
bool upis_zero(const FieldPtr& K, const UPoly& f);
bool upeq(const FieldPtr& K, const UPoly& a, const UPoly& b);
UPoly upconst(const FieldPtr& K, const FElem& c);
UPoly upx(const FieldPtr& K);  // the monomial x
UPoly upmono(const FieldPtr& K, const FElem& c, int e);
UPoly upadd(const FieldPtr& K, const UPoly& a, const UPoly& b);
UPoly upsub(const FieldPtr& K, const UPoly& a, const UPoly& b);
UPoly upneg(const FieldPtr& K, const UPoly& a);
UPoly upmul(const FieldPtr& K, const UPoly& a, const UPoly& b);
UPoly upscale(const FieldPtr& K, const FElem& c, const UPoly& a);
UPoly uppow(const FieldPtr& K, const UPoly& a, const Int& e);
/// Quotient; *rem receives the remainder if non-null.  DivisionByZero if b=0.
UPoly updivrem(const FieldPtr& K, const UPoly& a, const UPoly& b, UPoly* rem);
bool updivides(const FieldPtr& K, const UPoly& d, const UPoly& a);
UPoly upmod(const FieldPtr& K, const UPoly& a, const UPoly& b);
UPoly upgcd(const FieldPtr& K, UPoly a, UPoly b);  // monic
UPoly upmonic(const FieldPtr& K, const UPoly& a);
/// g = gcd(a,b) together with u,v such that u·a + v·b = g.
UPoly upxgcd(const FieldPtr& K, const UPoly& a, const UPoly& b, UPoly* u, UPoly* v);
UPoly upderiv(const FieldPtr& K, const UPoly& a);
FElem upeval(const FieldPtr& K, const UPoly& a, const FElem& x);
UPoly upcompose(const FieldPtr& K, const UPoly& a, const UPoly& b);  // a(b(x))
UPoly uppowmod(const FieldPtr& K, const UPoly& a, const Int& e, const UPoly& mod);
FElem upresultant(const FieldPtr& K, const UPoly& a, const UPoly& b);
std::string upto_string(const FieldPtr& K, const UPoly& f, const std::string& var);

/// Solve M·x = rhs over K by Gaussian elimination (M row-major, n×m).
/// Returns false if inconsistent; any solution is produced (free vars = 0).
bool linsolve(const FieldPtr& K, std::vector<std::vector<FElem>> M,
              std::vector<FElem> rhs, std::vector<FElem>& x);
/// Rank of a matrix over K (destructive Gaussian elimination).
int linrank(const FieldPtr& K, std::vector<std::vector<FElem>> M);
/// Nullspace basis of M (n×m): vectors x with M·x = 0.
std::vector<std::vector<FElem>> linnull(const FieldPtr& K,
                                        std::vector<std::vector<FElem>> M);

}  // namespace effalg
