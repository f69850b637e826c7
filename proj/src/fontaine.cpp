#include "lf/fontaine.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "lf/errors.hpp"

namespace lf {

namespace {

long check_prec_of(const TowerPtr& L) { return static_cast<long>(L->e()) * (L->nmax() - 2); }

std::vector<int> ascending_divisors(int n) {
    std::vector<int> ds;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) ds.push_back(d);
    return ds;
}

} // namespace

TPoly defining_poly_over_base(const TowerPtr& L) {
    TowerPtr K = L->unramified_subfield_tower();
    std::vector<Element> c;
    if (L->e() == 1) {
        // x - pi for the trivial Eisenstein step
        c.push_back(K->neg(K->embed_from(L->uniformizer())));
    } else {
        for (const auto& a : L->eis_coeffs()) c.push_back(K->from_unram(a));
    }
    c.push_back(K->one());
    return poly::make(K, std::move(c));
}

std::optional<HomWitness> hom_exists(const TowerPtr& L, const TowerPtr& E, const Rat& m) {
    TPoly f = defining_poly_over_base(L);
    MaxValResult r = max_image_valuation(f, E, m);
    if (!r.above_cap) return std::nullopt;
    HomWitness w;
    w.L = L;
    w.E = E;
    w.m = m;
    w.beta_digits = r.witness_digits;
    w.beta = materialize_witness(E, r);
    Element val = poly::eval(poly::map_into(f, E), w.beta);
    if (E->is_zero_at_precision(val))
        w.above_precision = true;
    else
        w.achieved = E->valuation(val);
    return w;
}

TowerPtr witness_extension(const TowerPtr& L, const UnramElt& u, long m) {
    const auto& R = L->coeff_ring();
    const int n = L->nmax();
    if (R.val(u, n) != 0) throw UnitNotAtRequiredLevel("perturbation is not a unit");
    if (m >= 2 && R.val(R.sub(u, R.one(), n), n) < m - 1)
        throw UnitNotAtRequiredLevel("unit is not in U_K^{m-1}");
    TowerPtr K = L->unramified_subfield_tower();
    std::vector<Element> coeffs;
    const auto& a = L->eis_coeffs();
    coeffs.push_back(K->from_unram(R.mul(a[0], u, n)));
    for (size_t i = 1; i < a.size(); ++i) coeffs.push_back(K->from_unram(a[i]));
    return K->extend_eisenstein(coeffs);
}

RescueResult find_unramified_rescue(const TowerPtr& L, const TowerPtr& E, int group_order,
                                    int degree_cap) {
    RescueResult out;
    TPoly f = defining_poly_over_base(L);
    for (int d : ascending_divisors(group_order)) {
        if (E->degree_over_base() * d > degree_cap) {
            out.degrees_tried.push_back(-d); // skipped for size
            continue;
        }
        out.degrees_tried.push_back(d);
        TowerPtr T = unramified_base_change(E, d);
        if (poly::has_root(f, T)) {
            out.found = true;
            out.degree = d;
            out.EK = T;
            return out;
        }
    }
    return out;
}

RatioCheckResult witness_ratio_check(const TowerPtr& L, const TowerPtr& E, long m,
                                     const UnramElt& u, const RescueResult& rescue) {
    RatioCheckResult out;
    if (!rescue.found) throw InvalidArgument("ratio check needs a successful rescue");
    const TowerPtr& T = rescue.EK;
    TPoly f = defining_poly_over_base(L);
    auto conjugates = poly::roots_in(f, T);
    if (conjugates.empty()) throw InvalidArgument("compositum does not contain L");
    Element piE = T->embed_from(E->uniformizer());
    // the root of f closest to pi_E ("maximum at sigma = 1"); ties resolve to
    // the first root in digit order since roots_in sorts canonically
    size_t best = 0;
    long bestv = -1;
    for (size_t i = 0; i < conjugates.size(); ++i) {
        Element d = T->sub(piE, conjugates[i]);
        long v = T->is_zero_at_precision(d) ? T->known_precision(d) : T->valuation_vt(d);
        if (v > bestv) {
            bestv = v;
            best = i;
        }
    }
    Element piL = conjugates[best];
    Element uprime = T->div(piE, piL);
    Element um1 = T->sub(uprime, T->one());
    // v_L(u' - 1) >= psi_{L/K}(m-1)
    RamData rdL = ram_data(L);
    Rat psi_m1 = rdL.psi(Rat(m - 1));
    if (T->is_zero_at_precision(um1)) {
        out.level = ratq(T->known_precision(um1) * L->e(), T->e());
        out.level_ok = true; // u' = 1 at precision
    } else {
        out.level = T->valuation_in(um1, *L);
        out.level_ok = out.level >= psi_m1;
    }
    // N_{T/K'}(u') = u
    GaloisGroup GT = galois_group(T);
    Element nrm = norm(GT, uprime);
    Element u_in_T = T->embed_from(L->unramified_subfield_tower()->from_unram(u));
    long cmp = std::min(T->known_precision(nrm), T->known_precision(u_in_T));
    out.norm_ok = T->eq_at(nrm, u_in_T, cmp);
    return out;
}

bool reduction_equivalence_check(const RamData& rd, const SubfieldData& sd, const TowerPtr& E) {
    const TowerPtr& L = rd.G.L;
    Rat u_LK = upper_break(rd);
    bool lhs = hom_exists(L, E, u_LK).has_value();

    // RHS: M contained in E, and an O_M-algebra hom at level u_{L/M}
    bool rhs = false;
    TPoly gM = defining_poly_over_base(sd.M);
    auto thetaE = poly::roots_in(gM, E);
    const int dM = static_cast<int>(sd.e_MK);
    for (const auto& th : thetaE) {
        // relative minimal polynomial of pi_L over M, coefficients mapped to
        // E through theta -> th
        std::vector<Element> coeffs;
        const auto& R = L->coeff_ring();
        bool built = true;
        for (const auto& in_theta : sd.g_coeffs_in_theta) {
            Element acc = E->zero();
            Element thp = E->one();
            for (int j = 0; j < dM; ++j) {
                UnramElt b = j < static_cast<int>(in_theta.size()) ? in_theta[j] : R.zero();
                Element bE = E->embed_from(L->unramified_subfield_tower()->from_unram(b));
                acc = E->add(acc, E->mul(bE, thp));
                thp = E->mul(thp, th);
            }
            coeffs.push_back(acc);
        }
        if (!built) continue;
        coeffs.push_back(E->one());
        TPoly grel = poly::make(E, std::move(coeffs));
        // v_M >= u_{L/M}  <=>  v_K >= u_{L/M} / e_{M/K}
        Rat cap = sd.u_LM / Rat(sd.e_MK);
        MaxValResult r = max_image_valuation(grel, E, cap);
        if (r.above_cap) {
            rhs = true;
            break;
        }
    }
    return lhs == rhs;
}

PsiIdentityResult psi_identity_check(const TowerPtr& L, const TowerPtr& T, const Element& beta) {
    TPoly f = poly::map_into(defining_poly_over_base(L), T);
    auto conjugates = poly::roots_in(f, T);
    if (static_cast<int>(conjugates.size()) != L->e())
        throw InvalidArgument("containing tower does not split the defining polynomial");
    RamData rd = ram_data(L);
    return psi_identity_check_pre(rd, f, conjugates, T, beta);
}

PsiIdentityResult psi_identity_check_pre(const RamData& rd, const TPoly& f,
                                         const std::vector<Element>& conjugates,
                                         const TowerPtr& T, const Element& beta) {
    PsiIdentityResult out;
    Element val = poly::eval(f, beta);
    if (T->is_zero_at_precision(val)) {
        // f(beta) ~ 0: beta must be indistinguishable from some conjugate
        out.infinite = true;
        for (const auto& r : conjugates)
            if (T->is_zero_at_precision(T->sub(beta, r))) {
                out.ok = true;
                return out;
            }
        out.ok = false;
        return out;
    }
    Rat vf = T->valuation(val);
    out.lhs = rd.psi_tilde(vf);
    bool have = false;
    for (const auto& r : conjugates) {
        Element d = T->sub(beta, r);
        if (T->is_zero_at_precision(d)) {
            // distance beyond precision while f(beta) is measurable
            throw PrecisionUnderflow("conjugate distance beyond precision");
        }
        Rat v = T->valuation(d);
        if (!have || v > out.rhs) {
            out.rhs = v;
            have = true;
        }
    }
    out.ok = out.lhs == out.rhs;
    return out;
}

ModuleCheckResult module_structure_check(const TowerPtr& L, const TowerPtr& E, long m,
                                         const Element& beta) {
    ModuleCheckResult out;
    const long n = L->e();
    const long eE = E->e();
    if (beta.T != E) throw InvalidArgument("beta must live in E");
    // v_K(beta) = 1/n
    Rat vb = E->valuation(beta);
    out.beta_val_ok = vb == ratq(1, n);
    // a^m kills T: v_K(beta^{nm}) >= m
    out.killed_ok = E->valuation(E->pow(beta, n * m)) >= Rat(m);
    // torsion: T[pi_L] = pi_L^{nm-1} T, as graded digit windows. With
    // v(beta) = 1/n both sides are the valuation window [m - 1/n, m).
    bool torsion = out.beta_val_ok;
    Element pi = E->uniformizer();
    for (long k = 0; k < m * eE && torsion; ++k) {
        Element x = E->mul(beta, E->pow(pi, k));
        Rat v = E->valuation(x);
        bool in_torsion = v >= Rat(m); // beta * pi^k = 0 in T
        bool expected = ratq(k, eE) >= Rat(m) - ratq(1, n);
        if (in_torsion != expected) torsion = false;
    }
    // beta^{nm-1} pi^j must realize every digit level in [m - 1/n, m)
    Element bp = E->pow(beta, n * m - 1);
    for (long j = 0; j < eE / n && torsion; ++j) {
        Rat v = E->valuation(E->mul(bp, E->pow(pi, j)));
        if (v != Rat(m) - ratq(1, n) + ratq(j, eE)) torsion = false;
    }
    out.torsion_ok = torsion;
    // freeness of the forced rank t = [E:K]/[L:K] via the explicit basis
    // {pi^j : j < t}: position i = t k + j must be realized by beta^k pi^j
    long t = (eE * E->f()) / (n * L->f());
    out.rank = t;
    bool rank_ok = (eE * E->f()) % (n * L->f()) == 0;
    for (long i = 0; i < m * eE && rank_ok; ++i) {
        long k = i / t, j = i % t;
        Element x = E->mul(E->pow(beta, k), E->pow(pi, j));
        if (E->valuation(x) != ratq(i, eE)) rank_ok = false;
    }
    out.rank_ok = rank_ok;
    out.ok = out.beta_val_ok && out.killed_ok && out.torsion_ok && out.rank_ok;
    return out;
}

bool witness_cokernel_correspondence(const TowerPtr& L, long m) {
    RamData rd = ram_data(L);
    CokernelResult ck = norm_cokernel(rd, m, 1);
    const auto& FQ = L->residue_field();
    const auto& R = L->coeff_ring();
    TPoly f = defining_poly_over_base(L);
    for (unsigned long di = 0; di < FQ->q(); ++di) {
        FqElt d = FQ->from_index(di);
        // u = 1 + [d] p^{m-1}
        std::vector<FqElt> digits(static_cast<size_t>(m), FQ->zero());
        digits[0] = FQ->one();
        digits[static_cast<size_t>(m - 1)] = FQ->add(digits[static_cast<size_t>(m - 1)], d);
        UnramElt u = R.from_base_digits(digits, L->nmax());
        TowerPtr E = witness_extension(L, u, m);
        bool contains = poly::has_root(f, E);
        bool trivial = cokernel_class_trivial(ck, cokernel_delta(L, u, m));
        if (contains != trivial) return false;
    }
    return true;
}

std::vector<CorpusEntry> generate_corpus(const BaseSpec& base, long m, const CorpusSpec& cs) {
    std::vector<CorpusEntry> out;
    const long B = cs.coeff_val_bound > 0 ? cs.coeff_val_bound : m + 1;
    TowerPtr K = FieldTower::make(base);
    const auto& FQ = K->residue_field();
    const unsigned long q = FQ->q();

    if (cs.include_trivial) {
        CorpusEntry ent;
        ent.E = K;
        ent.degree = 1;
        ent.different_exponent = 0;
        ent.label = "trivial";
        out.push_back(std::move(ent));
    }

    for (int e = 2; e <= cs.max_degree; ++e) {
        // digit counts: a_0 has digits at levels 1..B-1 with level-1 digit
        // nonzero; a_i (i >= 1) has digits at levels 1..B-1
        uint64_t per = 1;
        for (long l = 0; l < B - 1; ++l) per *= q;
        std::vector<CorpusEntry> bucket;
        uint64_t total = per;
        for (int i = 1; i < e; ++i) total *= per;
        for (uint64_t idx = 0; idx < total; ++idx) {
            uint64_t v = idx;
            std::vector<std::vector<unsigned long>> codes(e);
            bool ok_a0 = false;
            for (int i = 0; i < e; ++i) {
                codes[i].resize(B - 1);
                for (long l = 0; l < B - 1; ++l) {
                    codes[i][l] = static_cast<unsigned long>(v % q);
                    v /= q;
                }
            }
            ok_a0 = codes[0][0] != 0;
            if (!ok_a0) continue;
            std::vector<Element> coeffs;
            for (int i = 0; i < e; ++i) {
                std::vector<FqElt> digits(static_cast<size_t>(B), FQ->zero());
                for (long l = 1; l < B; ++l) digits[l] = FQ->from_index(codes[i][l - 1]);
                coeffs.push_back(K->from_digits(0, digits));
            }
            CorpusEntry ent;
            ent.E = K->extend_eisenstein(coeffs);
            ent.degree = e;
            ent.coeff_digit_codes = codes;
            {
                std::ostringstream os;
                os << "x^" << e;
                for (int i = e - 1; i >= 0; --i) {
                    os << "+(";
                    for (long l = 0; l < B - 1; ++l) {
                        if (l) os << ",";
                        os << codes[i][l];
                    }
                    os << ")x^" << i;
                }
                ent.label = os.str();
            }
            // different exponent: v_E(f'(pi)); -1 flags an inseparable
            // defining polynomial (possible in equal characteristic only)
            {
                std::vector<Element> fc;
                for (const auto& a : ent.E->eis_coeffs()) fc.push_back(ent.E->from_unram(a));
                fc.push_back(ent.E->one());
                TPoly f = poly::make(ent.E, std::move(fc));
                TPoly fd = poly::trim(poly::derivative(f));
                if (fd.c.empty()) {
                    ent.different_exponent = -1;
                } else {
                    Element d = poly::eval(fd, ent.E->uniformizer());
                    ent.different_exponent = ent.E->valuation_vt(d);
                }
            }
            bucket.push_back(std::move(ent));
        }
        if (!cs.dedup) {
            for (auto& ent : bucket) out.push_back(std::move(ent));
            continue;
        }
        // group by invariant, then mutual has_root within groups; root-based
        // detection assumes separability, so inseparable members are kept as
        // given (distinct coefficient tuples, possibly isomorphic)
        std::map<long, std::vector<CorpusEntry>> classes; // keyed by different exponent
        for (auto& ent : bucket) {
            auto& cls = classes[ent.different_exponent];
            bool dup = false;
            if (ent.different_exponent >= 0) {
                for (const auto& rep : cls) {
                    TPoly frep = defining_poly_over_base(rep.E);
                    TPoly fent = defining_poly_over_base(ent.E);
                    bool r1 = poly::has_root(frep, ent.E);
                    bool r2 = poly::has_root(fent, rep.E);
                    if (r1 != r2) throw InvalidArgument("asymmetric isomorphism detection");
                    if (r1) {
                        dup = true;
                        break;
                    }
                }
            }
            if (!dup) cls.push_back(std::move(ent));
        }
        for (auto& [inv, cls] : classes)
            for (auto& ent : cls) out.push_back(std::move(ent));
    }
    return out;
}

PmReport pm_experiment(const TowerPtr& L, const Rat& m, const CorpusSpec& cs) {
    PmReport rep;
    rep.extension = L->describe();
    rep.m = m;
    RamData rd = ram_data(L);
    rep.u_break = upper_break(rd);
    rep.m_is_break = (m == rep.u_break);
    rep.wild = rd.wild;
    TPoly f = defining_poly_over_base(L);
    const auto& FQ = L->residue_field();
    const auto& R = L->coeff_ring();

    bool refuted = false;
    TowerPtr witness_tower;

    // constructed witness at integer m = u (wild) or tame perturbation
    bool have_witness = false;
    if (rep.m_is_break && is_integer(m)) {
        long mi = to_long(Int(m.get_num()));
        if (rd.wild) {
            CokernelResult ck = norm_cokernel(rd, mi, 1);
            // smallest nontrivial class representative
            FqElt delta = FQ->zero();
            bool found = false;
            for (unsigned long di = 0; di < FQ->q() && !found; ++di) {
                FqElt cand = FQ->from_index(di);
                if (!cokernel_class_trivial(ck, cand)) {
                    delta = cand;
                    found = true;
                }
            }
            if (found) {
                std::vector<FqElt> digits(static_cast<size_t>(mi), FQ->zero());
                digits[0] = FQ->one();
                digits[static_cast<size_t>(mi - 1)] =
                    FQ->add(digits[static_cast<size_t>(mi - 1)], delta);
                UnramElt u = R.from_base_digits(digits, L->nmax());
                TowerPtr E = witness_extension(L, u, mi);
                rep.witness_label = "perturbed by 1 + [" + std::to_string(FQ->to_index(delta)) +
                                    "]*p^" + std::to_string(mi - 1);
                for (const auto& d : L->coeff_ring().base_digits(u, static_cast<int>(mi)))
                    rep.witness_unit_digits.push_back(FQ->to_index(d));
                rep.witness_hom = hom_exists(L, E, m).has_value();
                rep.witness_contains = poly::has_root(f, E);
                if (rep.witness_hom && !rep.witness_contains) {
                    refuted = true;
                    have_witness = true;
                    witness_tower = E;
                    RescueResult rescue = find_unramified_rescue(L, E, rd.G.order());
                    if (rescue.found) rep.witness_rescue_degree = rescue.degree;
                }
            }
        } else {
            // tame: perturb the constant term by units until L is escaped
            for (unsigned long di = 1; di < FQ->q() && !have_witness; ++di) {
                UnramElt u = R.teich(FQ->from_index(di), L->nmax());
                TowerPtr E = witness_extension(L, u, 1);
                bool hom = hom_exists(L, E, m).has_value();
                bool contains = poly::has_root(f, E);
                if (hom && !contains) {
                    have_witness = true;
                    refuted = true;
                    witness_tower = E;
                    rep.witness_label = "tame perturbation by [" + std::to_string(di) + "]";
                    rep.witness_unit_digits = {di};
                    rep.witness_hom = hom;
                    rep.witness_contains = contains;
                    RescueResult rescue = find_unramified_rescue(L, E, rd.G.order());
                    if (rescue.found) rep.witness_rescue_degree = rescue.degree;
                }
            }
        }
    }

    // corpus sweep
    auto corpus = generate_corpus(L->base(), to_long(ceil_int(m)), cs);
    Rat next_level = rep.u_break + 1;
    for (const auto& ent : corpus) {
        CandidateVerdict cv;
        cv.label = ent.label;
        cv.degree = ent.degree;
        try {
            cv.hom_at_m = hom_exists(L, ent.E, m).has_value();
            cv.contains_L = poly::has_root(f, ent.E);
            cv.hom_at_next = hom_exists(L, ent.E, next_level).has_value();
            if (cv.hom_at_m && !cv.contains_L) {
                refuted = true;
                RescueResult rescue = find_unramified_rescue(L, ent.E, rd.G.order());
                if (rescue.found) cv.rescue_degree = rescue.degree;
            }
        } catch (const Error& err) {
            cv.error = err.what();
            rep.errors.push_back(ent.label + ": " + err.what());
        }
        rep.corpus.push_back(std::move(cv));
    }

    // brackets: hom at u+1 forces containment; witnesses exist below u
    rep.bracket_above_ok = true;
    for (const auto& cv : rep.corpus)
        if (cv.error.empty() && cv.hom_at_next && !cv.contains_L) rep.bracket_above_ok = false;

    rep.bracket_below_ok = true;
    if (have_witness && is_integer(m)) {
        // the constructed witness must keep working at every lower level
        long mi = to_long(Int(m.get_num()));
        for (long mp = 1; mp < mi; ++mp)
            if (!hom_exists(L, witness_tower, Rat(mp)).has_value()) rep.bracket_below_ok = false;
    }

    if (refuted)
        rep.verdict = (rep.m_is_break && rd.wild) ? "theorem-confirmed-failure" : "refuted";
    else
        rep.verdict = "consistent-with-(P_m)";
    return rep;
}

} // namespace lf
