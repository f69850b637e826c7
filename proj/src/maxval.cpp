#include "lf/maxval.hpp"

#include <algorithm>

#include "lf/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lf {

namespace {

// digit-string order: value descending, then lexicographic ascending on
// zero-padded digit strings
bool better(const FqFieldPtr& F, long va, const std::vector<FqElt>& da, long vb,
            const std::vector<FqElt>& db) {
    if (va != vb) return va > vb;
    size_t n = std::max(da.size(), db.size());
    for (size_t i = 0; i < n; ++i) {
        unsigned long xa = i < da.size() ? F->to_index(da[i]) : 0;
        unsigned long xb = i < db.size() ? F->to_index(db[i]) : 0;
        if (xa != xb) return xa < xb;
    }
    return false;
}

struct Search {
    const TowerPtr& E;
    long capT;
    FqFieldPtr FQ;
    bool have_best = false;
    long best_v = -1;
    std::vector<FqElt> best_digits;
    bool above = false;

    void candidate(long v, std::vector<FqElt> digits) {
        if (!have_best || better(FQ, v, digits, best_v, best_digits)) {
            have_best = true;
            best_v = v;
            best_digits = std::move(digits);
        }
    }

    FqElt digit_at(const Element& x, long k) const {
        auto v = E->val_rep(x);
        if (!v || *v > k) return FQ->zero();
        return E->pi_digits(x, k, k + 1)[0];
    }

    // returns true when an above-cap witness was found (stop everything)
    bool node(const TPoly& g, std::vector<FqElt>& prefix) {
        long cmin = -1;
        for (const auto& cc : g.c) {
            auto v = E->val_rep(cc);
            long vl;
            if (v) {
                vl = *v;
            } else {
                vl = E->known_precision(cc);
                if (vl < capT)
                    throw PrecisionUnderflow("cap exceeds certified working precision");
            }
            if (cmin < 0 || vl < cmin) cmin = vl;
        }
        if (cmin >= capT) {
            // every beta in this ball achieves >= cap; beta = prefix + zeros
            above = true;
            best_digits = prefix;
            best_v = capT;
            have_best = true;
            return true;
        }
        auto v0 = E->val_rep(g.c[0]);
        long v0l = v0 ? *v0 : E->known_precision(g.c[0]);
        bool strict_min_at_0 = (v0l == cmin);
        if (strict_min_at_0) {
            for (size_t i = 1; i < g.c.size(); ++i) {
                auto vi = E->val_rep(g.c[i]);
                long vil = vi ? *vi : E->known_precision(g.c[i]);
                if (vil <= cmin) {
                    strict_min_at_0 = false;
                    break;
                }
            }
        }
        if (strict_min_at_0) {
            // dead ball: v(g(x)) = cmin for every integral x
            candidate(cmin, prefix);
            return false;
        }
        // residue polynomial at the content level
        FqField::Poly gbar;
        for (const auto& cc : g.c) gbar.push_back(digit_at(cc, cmin));
        gbar = FQ->poly_trim(gbar);
        bool recorded_noroot = false;
        for (unsigned long di = 0; di < FQ->q(); ++di) {
            FqElt d = FQ->from_index(di);
            if (FQ->is_zero(FQ->poly_eval(gbar, d))) {
                Element dl = E->from_digits(0, {d});
                TPoly gnext = poly::scale_pi(poly::taylor_shift(g, dl), 1);
                prefix.push_back(d);
                bool stop = node(gnext, prefix);
                prefix.pop_back();
                if (stop) return true;
            } else if (!recorded_noroot) {
                // the whole sub-ball has value exactly cmin; smallest such
                // digit gives the lexicographic representative
                std::vector<FqElt> w = prefix;
                w.push_back(d);
                candidate(cmin, std::move(w));
                recorded_noroot = true;
            }
        }
        return false;
    }
};

long capT_of(const TowerPtr& E, const Rat& cap) {
    if (cap <= 0) throw InvalidArgument("cap must be positive");
    long capT = to_long(ceil_int(cap * E->e()));
    if (capT + 2 > static_cast<long>(E->e()) * E->nmax())
        throw PrecisionUnderflow("cap exceeds what working precision can certify");
    return capT;
}

} // namespace

DigitGrid::DigitGrid(FqFieldPtr field, int length) : F(std::move(field)), len(length) {
    total = 1;
    for (int i = 0; i < len; ++i) {
        if (total > (UINT64_C(1) << 40))
            throw SearchBudgetExceeded("digit grid too large");
        total *= F->q();
    }
}

std::vector<FqElt> DigitGrid::decode(uint64_t idx) const {
    std::vector<FqElt> d(len, F->zero());
    for (int i = 0; i < len; ++i) {
        d[i] = F->from_index(idx % F->q());
        idx /= F->q();
    }
    return d;
}

Element materialize_witness(const TowerPtr& E, const MaxValResult& r) {
    return E->from_digits(0, r.witness_digits);
}

MaxValResult max_image_valuation(const TPoly& f_in, const TowerPtr& E, const Rat& cap) {
    TPoly f = poly::trim(poly::map_into(f_in, E));
    if (poly::degree(f) < 1) throw InvalidArgument("polynomial must be non-constant");
    long capT = capT_of(E, cap);
    Search s{E, capT, E->residue_field()};
    std::vector<FqElt> prefix;
    s.node(f, prefix);
    MaxValResult r;
    r.capT = capT;
    r.above_cap = s.above;
    r.value = s.above ? cap : ratq(s.best_v, E->e());
    r.witness_digits = s.best_digits;
    r.witness_digits.resize(static_cast<size_t>(capT), E->residue_field()->zero());
    return r;
}

MaxValResult max_image_valuation_bruteforce(const TPoly& f_in, const TowerPtr& E, const Rat& cap,
                                            Exec ex) {
    TPoly f = poly::trim(poly::map_into(f_in, E));
    if (poly::degree(f) < 1) throw InvalidArgument("polynomial must be non-constant");
    long capT = capT_of(E, cap);
    const auto& FQ = E->residue_field();
    DigitGrid grid(FQ, static_cast<int>(capT));
    if (grid.total > (UINT64_C(1) << 26))
        throw SearchBudgetExceeded("brute-force search space exceeds 2^26");

    // beta built from a precomputed table of teich(d) * pi^k
    std::vector<std::vector<Element>> tab(static_cast<size_t>(capT));
    for (long k = 0; k < capT; ++k) {
        tab[k].reserve(FQ->q());
        for (unsigned long di = 0; di < FQ->q(); ++di)
            tab[k].push_back(E->shift_pi(E->from_digits(0, {FQ->from_index(di)}),
                                         static_cast<int>(k)));
    }

    auto value_at = [&](uint64_t idx, std::vector<FqElt>& digits) {
        digits = grid.decode(idx);
        Element beta = E->zero();
        for (long k = 0; k < capT; ++k) {
            if (FQ->is_zero(digits[k])) continue;
            beta = E->add(beta, tab[k][FQ->to_index(digits[k])]);
        }
        Element val = poly::eval(f, beta);
        auto v = E->val_rep(val);
        long vl = v ? std::min(*v, capT) : capT;
        return vl;
    };

    const uint64_t chunk = 4096;
    const uint64_t nchunks = (grid.total + chunk - 1) / chunk;
    struct ChunkBest {
        bool have = false;
        long v = -1;
        std::vector<FqElt> digits;
    };
    std::vector<ChunkBest> bests(nchunks);

    auto run_chunk = [&](uint64_t ci) {
        uint64_t lo = ci * chunk, hi = std::min(grid.total, lo + chunk);
        ChunkBest b;
        std::vector<FqElt> digits;
        for (uint64_t idx = lo; idx < hi; ++idx) {
            long v = value_at(idx, digits);
            if (!b.have || better(FQ, v, digits, b.v, b.digits)) {
                b.have = true;
                b.v = v;
                b.digits = digits;
            }
        }
        bests[ci] = std::move(b);
    };

    if (ex == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
        for (long long ci = 0; ci < static_cast<long long>(nchunks); ++ci)
            run_chunk(static_cast<uint64_t>(ci));
#else
        for (uint64_t ci = 0; ci < nchunks; ++ci) run_chunk(ci);
#endif
    } else {
        for (uint64_t ci = 0; ci < nchunks; ++ci) run_chunk(ci);
    }

    ChunkBest best;
    for (const auto& b : bests) {
        if (!b.have) continue;
        if (!best.have || better(FQ, b.v, b.digits, best.v, best.digits)) best = b;
    }
    MaxValResult r;
    r.capT = capT;
    r.above_cap = best.v >= capT;
    r.value = r.above_cap ? cap : ratq(best.v, E->e());
    r.witness_digits = best.digits;
    r.witness_digits.resize(static_cast<size_t>(capT), FQ->zero());
    return r;
}

} // namespace lf
