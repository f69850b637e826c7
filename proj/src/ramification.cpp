#include "lf/ramification.hpp"

#include <algorithm>

#include "lf/errors.hpp"

namespace lf {

namespace {
constexpr long kJIdentity = 1L << 30;
}

Element GaloisGroup::apply(int i, const Element& x) const {
    const auto& T = *L;
    if (x.T != L) throw InvalidArgument("automorphism applied outside its field");
    const Element& rho = roots[i];
    Element acc = T.zero();
    for (int k = T.e() - 1; k >= 0; --k)
        acc = T.add(T.mul(acc, rho), T.from_unram(T.coeff_ring().reduce(x.c[k], x.np)));
    if (x.z != 0) acc = T.mul(acc, T.pow(rho, x.z));
    return T.with_precision(acc, x.ap);
}

bool GaloisGroup::is_subgroup(const std::vector<int>& h) const {
    for (int a : h)
        for (int b : h) {
            int c = table[a][b];
            if (std::find(h.begin(), h.end(), c) == h.end()) return false;
        }
    return std::find(h.begin(), h.end(), 0) != h.end();
}

bool GaloisGroup::is_normal(const std::vector<int>& h) const {
    for (int g = 0; g < order(); ++g) {
        int gi = inverse_idx[g];
        for (int a : h) {
            int c = table[table[g][a]][gi];
            if (std::find(h.begin(), h.end(), c) == h.end()) return false;
        }
    }
    return true;
}

GaloisGroup galois_group(const TowerPtr& L) {
    GaloisGroup G;
    G.L = L;
    if (L->e() == 1) {
        G.roots = {L->uniformizer()};
        G.table = {{0}};
        G.inverse_idx = {0};
        G.jvals = {kJIdentity};
        G.abelian = true;
        return G;
    }
    std::vector<Element> coeffs;
    for (const auto& a : L->eis_coeffs()) coeffs.push_back(L->from_unram(a));
    coeffs.push_back(L->one());
    TPoly f = poly::make(L, std::move(coeffs));
    auto roots = poly::roots_in(f, L);
    if (static_cast<int>(roots.size()) != L->e())
        throw NotGalois("Eisenstein polynomial has " + std::to_string(roots.size()) + " of " +
                        std::to_string(L->e()) + " roots in the tower");
    // identify the identity root and replace it by pi exactly
    Element pi = L->uniformizer();
    size_t id_idx = 0;
    long best = -1;
    for (size_t i = 0; i < roots.size(); ++i) {
        Element d = L->sub(roots[i], pi);
        long v = L->is_zero_at_precision(d) ? kJIdentity : L->valuation_vt(d);
        if (v > best) {
            best = v;
            id_idx = i;
        }
    }
    std::swap(roots[0], roots[id_idx]);
    roots[0] = pi;
    G.roots = std::move(roots);

    G.jvals.assign(G.roots.size(), kJIdentity);
    long sep = 0;
    for (size_t i = 0; i < G.roots.size(); ++i)
        for (size_t j = i + 1; j < G.roots.size(); ++j) {
            long v = L->valuation_vt(L->sub(G.roots[i], G.roots[j]));
            sep = std::max(sep, v);
        }
    for (size_t i = 1; i < G.roots.size(); ++i)
        G.jvals[i] = L->valuation_vt(L->sub(G.roots[i], pi));

    const int n = G.order();
    G.table.assign(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Element img = G.apply(i, G.roots[j]);
            int match = -1;
            for (int k = 0; k < n; ++k) {
                Element d = L->sub(img, G.roots[k]);
                bool close = L->is_zero_at_precision(d);
                if (!close) {
                    long v = L->valuation_vt(d);
                    close = v > sep;
                }
                if (close) {
                    if (match >= 0)
                        throw PrecisionTooSmallToSeparateRoots("ambiguous automorphism match");
                    match = k;
                }
            }
            if (match < 0)
                throw PrecisionTooSmallToSeparateRoots("no automorphism match for a conjugate");
            G.table[i][j] = match;
        }
    // group sanity: rows and columns are permutations with identity row 0
    for (int i = 0; i < n; ++i) {
        if (G.table[0][i] != i || G.table[i][0] != i)
            throw NotGalois("composition table is inconsistent with the identity");
    }
    G.inverse_idx.assign(n, -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (G.table[i][j] == 0) G.inverse_idx[i] = j;
    G.abelian = true;
    for (int i = 0; i < n && G.abelian; ++i)
        for (int j = 0; j < n; ++j)
            if (G.table[i][j] != G.table[j][i]) {
                G.abelian = false;
                break;
            }
    return G;
}

std::vector<int> RamData::subgroup_serre(long i) const {
    std::vector<int> h;
    for (int k = 0; k < G.order(); ++k)
        if (G.jvals[k] >= i + 1) h.push_back(k);
    return h;
}

RamData ram_data(const TowerPtr& L) {
    RamData rd;
    rd.G = galois_group(L);
    const long e = rd.G.order();
    if (e == 1) {
        rd.trivial = true;
        rd.phi = PLFunc::identity();
        rd.psi = PLFunc::identity();
        rd.phi_tilde = PLFunc::identity();
        rd.psi_tilde = PLFunc::identity();
        return rd;
    }
    long bmax = 0;
    for (size_t i = 1; i < rd.G.jvals.size(); ++i) bmax = std::max(bmax, rd.G.jvals[i] - 1);
    {
        std::vector<long> js;
        for (size_t i = 1; i < rd.G.jvals.size(); ++i) js.push_back(rd.G.jvals[i] - 1);
        std::sort(js.begin(), js.end());
        js.erase(std::unique(js.begin(), js.end()), js.end());
        rd.serre_jumps = js;
    }
    auto size_at = [&](long i) {
        long c = 0;
        for (long jv : rd.G.jvals)
            if (jv >= i + 1) ++c;
        return c;
    };
    std::vector<std::pair<Rat, Rat>> pts;
    pts.emplace_back(Rat(-1), Rat(-1));
    Rat y(0);
    pts.emplace_back(Rat(0), y);
    for (long i = 1; i <= bmax; ++i) {
        y += ratq(size_at(i), e);
        pts.emplace_back(Rat(i), y);
    }
    rd.phi = PLFunc(std::move(pts), Rat(1), ratq(1, e));
    rd.psi = rd.phi.inverse();
    rd.phi_tilde = rd.phi.affine(Rat(1), Rat(e), Rat(-1), Rat(1));
    rd.psi_tilde = rd.psi.affine(ratq(1, e), Rat(1), Rat(-1), ratq(1, e));
    rd.u_break = rd.phi(Rat(bmax)) + 1;
    rd.i_break = ratq(bmax + 1, e);
    rd.tame = *rd.u_break <= 1;
    rd.wild = !rd.tame;
    rd.single_jump = rd.serre_jumps.size() == 1;
    return rd;
}

Rat upper_break(const RamData& rd) {
    if (rd.trivial) throw TrivialExtension("trivial extension has no upper break");
    return *rd.u_break;
}

Rat lower_break(const RamData& rd) {
    if (rd.trivial) throw TrivialExtension("trivial extension has no lower break");
    return *rd.i_break;
}

bool hasse_arf_check(const RamData& rd) {
    if (!rd.G.abelian) throw InvalidArgument("Hasse-Arf check needs an abelian extension");
    if (rd.trivial) return true;
    for (long b : rd.serre_jumps)
        if (!is_integer(rd.phi(Rat(b)))) return false;
    return true;
}

std::vector<FiltrationRow> filtration_rows(const RamData& rd, Convention cv) {
    std::vector<FiltrationRow> rows;
    if (rd.trivial) return rows;
    const long e = rd.G.order();
    for (long b : rd.serre_jumps) {
        FiltrationRow row;
        switch (cv) {
        case Convention::serre_lower: row.index = Rat(b); break;
        case Convention::fontaine_lower: row.index = ratq(b + 1, e); break;
        case Convention::serre_upper: row.index = rd.phi(Rat(b)); break;
        case Convention::fontaine_upper: row.index = rd.phi(Rat(b)) + 1; break;
        }
        row.members = rd.subgroup_serre(b);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<UnramElt> coeff_vector(const Element& x) {
    auto [c, np] = x.T->integral_coeffs(x);
    (void)np;
    return c;
}

UnramElt to_unram(const Element& x, long check_prec) {
    const auto& T = *x.T;
    auto [c, np] = T.integral_coeffs(x);
    const auto& R = T.coeff_ring();
    long thr = std::min(check_prec, T.known_precision(x));
    if (thr < T.e()) throw PrecisionUnderflow("not enough precision to project to the subfield");
    for (int i = 1; i < T.e(); ++i) {
        long v = static_cast<long>(T.e()) * R.val(c[i], np) + i;
        if (v < thr)
            throw InvalidArgument("element does not lie in the unramified subfield");
    }
    return c[0];
}

std::vector<UnramElt> local_solve(const UnramRing& R, int e,
                                  const std::vector<std::vector<UnramElt>>& cols,
                                  const std::vector<UnramElt>& rhs, int n) {
    const int d = static_cast<int>(cols.size());
    // augmented rows over R
    std::vector<std::vector<UnramElt>> A(e, std::vector<UnramElt>(d + 1, R.zero()));
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < e; ++i) A[i][j] = cols[j][i];
    for (int i = 0; i < e; ++i) A[i][d] = rhs[i];

    std::vector<int> pivot_row(d, -1);
    std::vector<bool> used(e, false);
    for (int j = 0; j < d; ++j) {
        int pr = -1;
        for (int i = 0; i < e; ++i)
            if (!used[i] && R.val(A[i][j], n) == 0) {
                pr = i;
                break;
            }
        if (pr < 0) throw PrecisionUnderflow("no unit pivot in local linear solve");
        used[pr] = true;
        pivot_row[j] = pr;
        UnramElt piv_inv = R.inv(A[pr][j], n);
        for (int k = 0; k <= d; ++k) A[pr][k] = R.mul(A[pr][k], piv_inv, n);
        for (int i = 0; i < e; ++i) {
            if (i == pr) continue;
            UnramElt factor = A[i][j];
            if (R.is_zero(factor, n)) continue;
            for (int k = 0; k <= d; ++k)
                A[i][k] = R.sub(A[i][k], R.mul(factor, A[pr][k], n), n);
        }
    }
    // consistency: untouched rows must have (near) zero rhs
    for (int i = 0; i < e; ++i) {
        if (used[i]) continue;
        if (R.val(A[i][d], n) < n - 1)
            throw InvalidArgument("inconsistent local linear system");
    }
    std::vector<UnramElt> b(d, R.zero());
    for (int j = 0; j < d; ++j) b[j] = A[pivot_row[j]][d];
    return b;
}

SubfieldData single_jump_subfield(const RamData& rd) {
    const auto& G = rd.G;
    const TowerPtr& L = G.L;
    if (rd.trivial) throw TrivialExtension("no single-jump subfield for the trivial extension");
    const int e = G.order();
    if (e > 9) throw DegreeTooLarge("fixed-field reconstruction limited to degree 9");

    SubfieldData out;
    long bmax = rd.serre_jumps.back();
    out.H = rd.subgroup_serre(bmax);
    if (!G.is_subgroup(out.H)) throw NotGalois("last filtration step is not a subgroup");
    if (!G.is_normal(out.H)) throw NotGalois("last filtration step is not normal");
    const int h = static_cast<int>(out.H.size());
    const int dM = e / h;

    // theta = product of sigma(pi) over H: a uniformizer of the fixed field
    Element theta = L->one();
    for (int k : out.H) theta = L->mul(theta, G.roots[k]);
    out.theta = theta;
    // fixed-field sanity
    for (int k : out.H)
        if (!L->is_zero_at_precision(L->sub(G.apply(k, theta), theta)))
            throw NotGalois("subgroup does not fix its orbit product");
    for (int g = 0; g < e; ++g) {
        if (std::find(out.H.begin(), out.H.end(), g) != out.H.end()) continue;
        Element d = L->sub(G.apply(g, theta), theta);
        if (L->is_zero_at_precision(d)) throw PrecisionTooSmallToSeparateRoots("theta not moved");
    }

    out.e_MK = dM;
    out.i_LK = *rd.i_break;
    long bH = 0;
    std::vector<long> jH;
    for (int k : out.H)
        if (k != 0) jH.push_back(G.jvals[k]);
    for (long jv : jH) bH = std::max(bH, jv - 1);
    out.i_LM = ratq(bH + 1, h);
    out.identity_ok = (out.i_LM == Rat(out.e_MK) * out.i_LK);

    // psi of L/M from the restricted filtration
    {
        std::vector<std::pair<Rat, Rat>> pts;
        pts.emplace_back(Rat(-1), Rat(-1));
        Rat y(0);
        pts.emplace_back(Rat(0), y);
        auto size_at = [&](long i) {
            long c = 1;
            for (long jv : jH)
                if (jv >= i + 1) ++c;
            return c;
        };
        for (long i = 1; i <= bH; ++i) {
            y += ratq(size_at(i), h);
            pts.emplace_back(Rat(i), y);
        }
        PLFunc phiLM(std::move(pts), Rat(1), ratq(1, h));
        out.u_LM = phiLM(Rat(bH)) + 1;
        out.psi_LM = phiLM.inverse();
    }

    TowerPtr Mur = L->unramified_subfield_tower();
    const auto& R = L->coeff_ring();
    long check_prec = static_cast<long>(L->e()) * (L->nmax() - 2);

    if (h == e) {
        out.M = Mur;
        // g = the Eisenstein polynomial itself; coefficients constant in theta
        out.g_coeffs_in_theta.resize(e);
        for (int k = 0; k < e; ++k) out.g_coeffs_in_theta[k] = {L->eis_coeffs()[k]};
        return out;
    }

    // conjugates of theta via coset products
    std::vector<Element> thetas;
    std::vector<bool> seen(e, false);
    for (int g = 0; g < e; ++g) {
        if (seen[g]) continue;
        Element t = L->one();
        for (int k : out.H) {
            int idx = G.table[g][k];
            seen[idx] = true;
            t = L->mul(t, G.roots[idx]);
        }
        thetas.push_back(t);
    }
    if (static_cast<int>(thetas.size()) != dM)
        throw NotGalois("coset decomposition size mismatch");

    TPoly gM = poly::monic_from_roots(L, thetas);
    std::vector<Element> M_coeffs;
    for (int k = 0; k < dM; ++k)
        M_coeffs.push_back(Mur->from_unram(to_unram(gM.c[k], check_prec)));
    out.M = Mur->extend_eisenstein(M_coeffs);

    // relative minimal polynomial of pi over M, expressed in powers of theta
    std::vector<Element> conj;
    for (int k : out.H) conj.push_back(G.roots[k]);
    TPoly grel = poly::monic_from_roots(L, conj);
    std::vector<std::vector<UnramElt>> cols;
    Element tp = L->one();
    long kp = static_cast<long>(L->e()) * L->nmax();
    for (int j = 0; j < dM; ++j) {
        kp = std::min(kp, L->known_precision(tp));
        auto [cv, np] = L->integral_coeffs(tp);
        (void)np;
        cols.push_back(cv);
        tp = L->mul(tp, theta);
    }
    out.g_coeffs_in_theta.resize(h);
    for (int k = 0; k < h; ++k) {
        long kpk = std::min(kp, L->known_precision(grel.c[k]));
        auto [rv, np] = L->integral_coeffs(grel.c[k]);
        (void)np;
        int nsolve = static_cast<int>(kpk / L->e());
        if (nsolve < 2) throw PrecisionUnderflow("subfield solve needs more precision");
        out.g_coeffs_in_theta[k] = local_solve(R, e, cols, rv, nsolve);
    }
    return out;
}

TowerPtr scaled_uniformizer_tower(const TowerPtr& L, const UnramElt& u) {
    const auto& R = L->coeff_ring();
    if (R.val(u, L->nmax()) != 0) throw InvalidArgument("scaling element must be a unit");
    TowerPtr Mur = L->unramified_subfield_tower();
    const int e = L->e();
    std::vector<Element> coeffs;
    for (int i = 0; i < e; ++i) {
        UnramElt up = R.pow(u, static_cast<unsigned long>(e - i), L->nmax());
        coeffs.push_back(Mur->from_unram(R.mul(L->eis_coeffs()[i], up, L->nmax())));
    }
    return Mur->extend_eisenstein(coeffs);
}

} // namespace lf
