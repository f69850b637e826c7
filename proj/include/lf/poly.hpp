#ifndef LF_POLY_HPP
#define LF_POLY_HPP

#include <vector>

#include "lf/tower.hpp"

namespace lf {

// Dense polynomial over a tower, low degree first. The leading coefficient
// must stay distinguishable from zero at working precision.
struct TPoly {
    TowerPtr T;
    std::vector<Element> c;
};

struct NewtonSegment {
    Rat slope;   // in the owner tower's normalized valuation
    long length; // horizontal length
    bool operator==(const NewtonSegment& o) const { return slope == o.slope && length == o.length; }
};

namespace poly {

TPoly make(const TowerPtr& T, std::vector<Element> coeffs);
TPoly from_ints(const TowerPtr& T, const std::vector<long>& coeffs);
int degree(const TPoly& f);
TPoly trim(TPoly f);
Element eval(const TPoly& f, const Element& x);
TPoly derivative(const TPoly& f);
TPoly add(const TPoly& f, const TPoly& g);
TPoly mul(const TPoly& f, const TPoly& g);
TPoly taylor_shift(const TPoly& f, const Element& a); // f(a + x)
TPoly scale_pi(const TPoly& f, int k);                // f(pi^k x)
TPoly shift_coeffs_pi(const TPoly& f, int k);         // pi^k * f
TPoly map_into(const TPoly& f, const TowerPtr& E);
TPoly monic_from_roots(const TowerPtr& T, const std::vector<Element>& roots);

// Lower convex hull of (i, v(a_i)); slopes non-decreasing. Roots of f have
// valuations equal to the negated slopes with multiplicity = length.
std::vector<NewtonSegment> newton_polygon(const TPoly& f);

// monic, non-leading coefficients of positive valuation, constant term of
// valuation exactly one, in the owner's normalization
bool is_eisenstein(const TPoly& f);

// All roots of f lying in E, to working precision, sorted by digit order.
// f must be monic with integral coefficients; squarefreeness is assumed.
std::vector<Element> roots_in(const TPoly& f, const TowerPtr& E, long max_depth = -1);
bool has_root(const TPoly& f, const TowerPtr& E);

} // namespace poly
} // namespace lf

#endif
