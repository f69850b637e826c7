#include "lf/poly.hpp"

#include <algorithm>

#include "lf/errors.hpp"

namespace lf {
namespace poly {

TPoly make(const TowerPtr& T, std::vector<Element> coeffs) {
    for (const auto& x : coeffs)
        if (x.T != T) throw InvalidArgument("polynomial coefficient from a different tower");
    return trim(TPoly{T, std::move(coeffs)});
}

TPoly from_ints(const TowerPtr& T, const std::vector<long>& coeffs) {
    std::vector<Element> c;
    c.reserve(coeffs.size());
    for (long v : coeffs) c.push_back(T->from_int(Int(v)));
    return trim(TPoly{T, std::move(c)});
}

TPoly trim(TPoly f) {
    while (!f.c.empty() && f.T->is_zero_at_precision(f.c.back())) f.c.pop_back();
    return f;
}

int degree(const TPoly& f) { return static_cast<int>(f.c.size()) - 1; }

Element eval(const TPoly& f, const Element& x) {
    Element r = f.T->zero();
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) r = f.T->add(f.T->mul(r, x), *it);
    return r;
}

TPoly derivative(const TPoly& f) {
    std::vector<Element> c;
    for (size_t i = 1; i < f.c.size(); ++i)
        c.push_back(f.T->mul(f.c[i], f.T->from_int(Int(static_cast<long>(i)))));
    return trim(TPoly{f.T, std::move(c)});
}

TPoly add(const TPoly& f, const TPoly& g) {
    std::vector<Element> c;
    size_t n = std::max(f.c.size(), g.c.size());
    for (size_t i = 0; i < n; ++i) {
        if (i < f.c.size() && i < g.c.size())
            c.push_back(f.T->add(f.c[i], g.c[i]));
        else if (i < f.c.size())
            c.push_back(f.c[i]);
        else
            c.push_back(g.c[i]);
    }
    return trim(TPoly{f.T, std::move(c)});
}

TPoly mul(const TPoly& f, const TPoly& g) {
    if (f.c.empty() || g.c.empty()) return TPoly{f.T, {}};
    std::vector<Element> c(f.c.size() + g.c.size() - 1, f.T->zero());
    for (size_t i = 0; i < f.c.size(); ++i)
        for (size_t j = 0; j < g.c.size(); ++j)
            c[i + j] = f.T->add(c[i + j], f.T->mul(f.c[i], g.c[j]));
    return trim(TPoly{f.T, std::move(c)});
}

TPoly taylor_shift(const TPoly& f, const Element& a) {
    std::vector<Element> b = f.c;
    const int n = static_cast<int>(b.size());
    for (int j = 0; j < n; ++j)
        for (int i = n - 2; i >= j; --i) b[i] = f.T->add(b[i], f.T->mul(b[i + 1], a));
    return TPoly{f.T, std::move(b)};
}

TPoly scale_pi(const TPoly& f, int k) {
    std::vector<Element> c = f.c;
    for (size_t j = 0; j < c.size(); ++j)
        c[j] = f.T->shift_pi(c[j], static_cast<int>(j) * k);
    return TPoly{f.T, std::move(c)};
}

TPoly shift_coeffs_pi(const TPoly& f, int k) {
    std::vector<Element> c = f.c;
    for (auto& x : c) x = f.T->shift_pi(x, k);
    return TPoly{f.T, std::move(c)};
}

TPoly map_into(const TPoly& f, const TowerPtr& E) {
    if (f.T == E) return f;
    std::vector<Element> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(E->embed_from(x));
    return TPoly{E, std::move(c)};
}

TPoly monic_from_roots(const TowerPtr& T, const std::vector<Element>& roots) {
    TPoly f{T, {T->one()}};
    for (const auto& r : roots) {
        TPoly lin{T, {T->neg(r), T->one()}};
        f = mul(f, lin);
    }
    return f;
}

std::vector<NewtonSegment> newton_polygon(const TPoly& f_in) {
    TPoly f = trim(f_in);
    if (f.c.empty()) throw InvalidArgument("Newton polygon of the zero polynomial");
    const auto& T = *f.T;
    // collect known points; track the precision floor of unknown ones
    std::vector<std::pair<long, Rat>> pts; // (i, v)
    std::vector<std::pair<long, Rat>> unknown_floor;
    for (long i = 0; i < static_cast<long>(f.c.size()); ++i) {
        auto v = T.val_rep(f.c[i]);
        if (v && *v < f.c[i].ap)
            pts.emplace_back(i, ratq(*v, T.e()));
        else
            unknown_floor.emplace_back(i, ratq(T.known_precision(f.c[i]), T.e()));
    }
    // lower convex hull, left to right
    std::vector<std::pair<long, Rat>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // keep if b is strictly below segment a->pt
            Rat lhs = (b.second - a.second) * (pt.first - a.first);
            Rat rhs = (pt.second - a.second) * (b.first - a.first);
            if (lhs < rhs) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    // a coefficient only known to be small cannot be allowed to cut the hull
    for (const auto& [i, floor_v] : unknown_floor) {
        for (size_t k = 0; k + 1 < hull.size(); ++k) {
            if (hull[k].first <= i && i <= hull[k + 1].first) {
                Rat t = hull[k].second + (hull[k + 1].second - hull[k].second) *
                                             ratq(i - hull[k].first, hull[k + 1].first - hull[k].first);
                if (floor_v <= t)
                    throw PrecisionUnderflow("coefficient precision too small for Newton polygon");
            }
        }
    }
    std::vector<NewtonSegment> segs;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        Rat slope = (hull[k + 1].second - hull[k].second) / Rat(hull[k + 1].first - hull[k].first);
        long len = hull[k + 1].first - hull[k].first;
        if (!segs.empty() && segs.back().slope == slope)
            segs.back().length += len;
        else
            segs.push_back({slope, len});
    }
    return segs;
}

bool is_eisenstein(const TPoly& f_in) {
    TPoly f = trim(f_in);
    const auto& T = *f.T;
    int d = degree(f);
    if (d < 1) return false;
    // monic
    Element lead_m1 = T.sub(f.c.back(), T.one());
    if (!T.is_zero_at_precision(lead_m1)) return false;
    for (int i = 1; i < d; ++i) {
        auto v = T.val_rep(f.c[i]);
        if (v && *v < T.e()) return false; // a unit or valuation < 1
    }
    auto v0 = T.val_rep(f.c[0]);
    if (!v0) return false;
    return *v0 == T.e(); // valuation exactly 1 in the owner's normalization
}

namespace {

struct RootSearch {
    const TowerPtr& E;
    const TPoly& f; // monic integral over E
    long max_depth;
    bool stop_at_first;
    std::vector<Element> found;
    bool found_any = false;

    // digit of x at v_T position k, zero when v(x) > k
    FqElt digit_at(const Element& x, long k) const {
        auto v = E->val_rep(x);
        if (!v || *v > k) return E->residue_field()->zero();
        return E->pi_digits(x, k, k + 1)[0];
    }

    // Newton-lift the simple root of g starting at x0. Tracked precision
    // decays along the iteration, so the approximation is periodically
    // rebuilt from its digit string at full representation precision and
    // re-certified with Hensel's bound: v(g(x)) > 2 v(g'(x)) puts the true
    // root within pi^(v(g(x)) - v(g'(x))) of x.
    Element lift(const TPoly& g, Element x) const {
        TPoly gd = derivative(g);
        // re-encode the digit string at full representation width; Newton is
        // self-correcting and the final Hensel certificate bounds the result,
        // so resetting the tracked precision here is sound
        auto rebuild = [&](const Element& y_in) {
            Element y = E->as_exact_representative(y_in);
            auto vr = E->val_rep(y);
            long lo = std::min<long>(vr ? *vr : 0, 0);
            long hi = std::min(E->known_precision(y), E->extractable_digit_bound(y, lo));
            if (hi <= lo) throw PrecisionUnderflow("root lifting lost all digits");
            return E->shift_pi(E->from_digits(0, E->pi_digits(y, lo, hi)),
                               static_cast<int>(lo));
        };
        long cg = -1; // content of g
        for (const auto& cc : g.c) {
            auto v = E->val_rep(cc);
            if (v && (cg < 0 || *v < cg)) cg = *v;
        }
        if (cg < 0) throw PrecisionUnderflow("root lifting on a zero polynomial");
        // coupled iteration: w tracks 1/g'(x) through multiplications only,
        // so the single division happens once
        Element w = E->zero();
        bool have_w = false;
        long prev_vv = -1;
        for (int round = 0; round < 64; ++round) {
            x = rebuild(x);
            Element val = eval(g, x);
            if (E->is_zero_at_precision(val)) {
                Element der = eval(gd, x);
                long vd = E->is_zero_at_precision(der) ? E->known_precision(der)
                                                       : E->valuation_vt(der);
                return E->with_precision(x, E->known_precision(val) - vd);
            }
            Element der = eval(gd, x);
            long vv = E->valuation_vt(val);
            long vd = E->valuation_vt(der);
            // Hensel for the content-stripped polynomial
            if (vv - cg <= 2 * (vd - cg))
                throw PrecisionTooSmallToSeparateRoots("Hensel certificate failed during lift");
            if (vv <= prev_vv) {
                // hit the representation wall; the Hensel ball still bounds
                // the root: v(x - rho) >= v(g(x)) - v(g'(x))
                return E->with_precision(x, vv - vd);
            }
            prev_vv = vv;
            if (!have_w) {
                w = E->inv(der);
                have_w = true;
            } else {
                Element err = E->sub(E->one(), E->mul(der, w));
                w = E->add(w, E->mul(w, err));
            }
            w = rebuild(w);
            x = E->sub(x, E->mul(val, w));
        }
        throw PrecisionTooSmallToSeparateRoots("root lifting did not converge");
    }

    void recurse(const TPoly& g, std::vector<FqElt>& prefix, long depth) {
        if (stop_at_first && found_any) return;
        if (depth > max_depth)
            throw PrecisionTooSmallToSeparateRoots("root search exceeded separation depth");
        const auto& FQ = E->residue_field();
        // content from the coefficients with known valuation; any coefficient
        // that is zero at its precision must be known strictly above it
        long cmin = -1;
        for (const auto& cc : g.c) {
            auto v = E->val_rep(cc);
            if (v && (cmin < 0 || *v < cmin)) cmin = *v;
        }
        if (cmin < 0) throw PrecisionUnderflow("root search lost all coefficient precision");
        for (const auto& cc : g.c) {
            if (!E->val_rep(cc) && E->known_precision(cc) <= cmin)
                throw PrecisionUnderflow("root search lost coefficient precision");
        }
        // residue polynomial at level cmin
        FqField::Poly gbar;
        for (const auto& cc : g.c) gbar.push_back(digit_at(cc, cmin));
        gbar = FQ->poly_trim(gbar);
        if (gbar.size() <= 1) return; // constant: no integral roots in this ball
        FqField::Poly gbar_d;
        for (size_t i = 1; i < gbar.size(); ++i) {
            FqElt t = FQ->zero();
            for (size_t k = 0; k < i; ++k) t = FQ->add(t, gbar[i]);
            gbar_d.push_back(t);
        }
        gbar_d = FQ->poly_trim(gbar_d);
        for (unsigned long di = 0; di < FQ->q(); ++di) {
            if (stop_at_first && found_any) return;
            FqElt d = FQ->from_index(di);
            if (!FQ->is_zero(FQ->poly_eval(gbar, d))) continue;
            Element dl = E->from_digits(0, {d});
            bool simple = !FQ->is_zero(FQ->poly_eval(gbar_d, d));
            if (simple) {
                Element rho = lift(g, dl);
                Element full = E->add(E->from_digits(0, prefix),
                                      E->shift_pi(rho, static_cast<int>(depth)));
                found.push_back(full);
                found_any = true;
            } else {
                TPoly gshift = taylor_shift(g, dl);
                TPoly gnext = scale_pi(gshift, 1);
                prefix.push_back(d);
                recurse(gnext, prefix, depth + 1);
                prefix.pop_back();
            }
        }
    }
};

} // namespace

std::vector<Element> roots_in(const TPoly& f_in, const TowerPtr& E, long max_depth) {
    TPoly f = trim(map_into(f_in, E));
    if (degree(f) < 1) return {};
    if (max_depth < 0) max_depth = 2L * E->e() * E->nmax();
    RootSearch rs{E, f, max_depth, false, {}, false};
    std::vector<FqElt> prefix;
    rs.recurse(f, prefix, 0);
    // deterministic order: by digit expansion
    std::sort(rs.found.begin(), rs.found.end(), [&](const Element& a, const Element& b) {
        auto cap = [&](const Element& x) {
            return std::min(E->known_precision(x), E->extractable_digit_bound(x, 0));
        };
        long lim = std::max<long>(1, std::min(cap(a), cap(b)));
        auto da = E->pi_digits(a, 0, lim);
        auto db = E->pi_digits(b, 0, lim);
        const auto& FQ = E->residue_field();
        for (size_t i = 0; i < da.size(); ++i) {
            unsigned long xa = FQ->to_index(da[i]), xb = FQ->to_index(db[i]);
            if (xa != xb) return xa < xb;
        }
        return false;
    });
    return rs.found;
}

bool has_root(const TPoly& f_in, const TowerPtr& E) {
    TPoly f = trim(map_into(f_in, E));
    if (degree(f) < 1) return false;
    RootSearch rs{E, f, 2L * E->e() * E->nmax(), true, {}, false};
    std::vector<FqElt> prefix;
    rs.recurse(f, prefix, 0);
    return rs.found_any;
}

} // namespace poly
} // namespace lf
