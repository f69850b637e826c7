#include "lf/unit_norms.hpp"

#include <algorithm>
#include <set>

#include "lf/errors.hpp"

namespace lf {

namespace {

long psi_int(const PLFunc& psi, long u) {
    Rat v = psi(Rat(u));
    if (!is_integer(v)) throw InvalidArgument("psi is not integral at an integer level");
    return to_long(Int(v.get_num()));
}

long check_prec_of(const TowerPtr& L) { return static_cast<long>(L->e()) * (L->nmax() - 2); }

} // namespace

Element norm(const GaloisGroup& G, const Element& x) {
    Element r = x;
    for (int i = 1; i < G.order(); ++i) r = G.L->mul(r, G.apply(i, x));
    return r;
}

UnramElt norm_to_unram(const GaloisGroup& G, const Element& x) {
    return to_unram(norm(G, x), check_prec_of(G.L));
}

Element principal_unit(const TowerPtr& L, long a, const std::vector<FqElt>& window) {
    std::vector<FqElt> digits(static_cast<size_t>(a) + window.size(), L->residue_field()->zero());
    digits[0] = L->residue_field()->one();
    for (size_t i = 0; i < window.size(); ++i) digits[static_cast<size_t>(a) + i] = window[i];
    return L->from_digits(0, digits);
}

std::vector<unsigned long> unit_class_key(const TowerPtr& L, const UnramElt& y, int b) {
    const auto& R = L->coeff_ring();
    auto digits = R.base_digits(y, b);
    std::vector<unsigned long> key;
    key.reserve(digits.size());
    for (const auto& d : digits) key.push_back(L->residue_field()->to_index(d));
    return key;
}

SurjectivityResult norm_surjectivity_above_break(const RamData& rd, long m, int c, Exec ex) {
    const auto& G = rd.G;
    const TowerPtr& L = G.L;
    const auto& FQ = L->residue_field();
    const long a = psi_int(rd.psi, m - 1) + 1;
    const long ahi = psi_int(rd.psi, m + c - 1) + 1;
    DigitGrid grid(FQ, static_cast<int>(ahi - a));
    if (grid.total > (UINT64_C(1) << 24)) throw SearchBudgetExceeded("norm enumeration too large");

    // target classes: digits of the norm at levels m..m+c-1
    auto key_of = [&](uint64_t idx) {
        auto window = grid.decode(idx);
        Element x = principal_unit(L, a, window);
        UnramElt y = norm_to_unram(G, x);
        auto digits = L->coeff_ring().base_digits(y, static_cast<int>(m + c));
        // norms of U_L^{psi(m-1)+1} must land in U_K^m
        if (FQ->to_index(digits[0]) != 1)
            throw InvalidArgument("norm left the unit filtration");
        for (long k = 1; k < m; ++k)
            if (!FQ->is_zero(digits[static_cast<size_t>(k)]))
                throw InvalidArgument("norm not in U_K^m");
        std::vector<unsigned long> key;
        for (long k = m; k < m + c; ++k) key.push_back(FQ->to_index(digits[static_cast<size_t>(k)]));
        return key;
    };

    const unsigned long q = FQ->q(); // residue field of the unramified subfield
    long total = 1;
    for (int i = 0; i < c; ++i) total *= static_cast<long>(q);

    std::set<std::vector<unsigned long>> hits;
    if (ex == Exec::parallel) {
        const uint64_t chunk = 256;
        const uint64_t nchunks = (grid.total + chunk - 1) / chunk;
        std::vector<std::set<std::vector<unsigned long>>> parts(nchunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long long ci = 0; ci < static_cast<long long>(nchunks); ++ci) {
            uint64_t lo = static_cast<uint64_t>(ci) * chunk;
            uint64_t hi = std::min(grid.total, lo + chunk);
            for (uint64_t idx = lo; idx < hi; ++idx) parts[ci].insert(key_of(idx));
        }
        for (auto& part : parts) hits.merge(part);
    } else {
        for (uint64_t idx = 0; idx < grid.total; ++idx) {
            hits.insert(key_of(idx));
            if (static_cast<long>(hits.size()) == total) break; // early exit
        }
    }
    SurjectivityResult r;
    r.hit = static_cast<long>(hits.size());
    r.total = total;
    r.ok = r.hit == r.total;
    return r;
}

CokernelResult norm_cokernel(const RamData& rd, long m, int c) {
    const auto& G = rd.G;
    const TowerPtr& L = G.L;
    const auto& FQ = L->residue_field();
    const long psi_m1 = psi_int(rd.psi, m - 1);

    CokernelResult out;
    // graded image W at the break: delta(N(1 + [d] pi^{psi(m-1)})) over d
    std::set<unsigned long> W;
    for (unsigned long di = 0; di < FQ->q(); ++di) {
        Element x = principal_unit(L, psi_m1, {FQ->from_index(di)});
        UnramElt y = norm_to_unram(G, x);
        auto digits = L->coeff_ring().base_digits(y, static_cast<int>(m));
        W.insert(FQ->to_index(digits[static_cast<size_t>(m - 1)]));
    }
    out.image_order = static_cast<long>(W.size());
    for (unsigned long w : W) out.image.push_back(FQ->from_index(w));
    // subgroup of (F_q, +)
    out.image_subgroup_ok = W.count(0) == 1;
    for (unsigned long a : W)
        for (unsigned long b : W) {
            FqElt s = FQ->add(FQ->from_index(a), FQ->from_index(b));
            if (!W.count(FQ->to_index(s))) out.image_subgroup_ok = false;
        }
    // cosets
    std::vector<bool> covered(FQ->q(), false);
    for (unsigned long d = 0; d < FQ->q(); ++d) {
        if (covered[d]) continue;
        out.coset_reps.push_back(FQ->from_index(d));
        for (unsigned long w : W) {
            FqElt s = FQ->add(FQ->from_index(d), FQ->from_index(w));
            covered[FQ->to_index(s)] = true;
        }
    }
    out.order = static_cast<long>(out.coset_reps.size());

    // depth-c image of U_L^{psi(m-1)} in U_K^{m-1}/U_K^{m+c}
    const long dhi = psi_int(rd.psi, m + c - 1) + 1;
    DigitGrid grid(FQ, static_cast<int>(dhi - psi_m1));
    if (grid.total > (UINT64_C(1) << 24)) throw SearchBudgetExceeded("cokernel enumeration too large");
    std::set<std::vector<unsigned long>> S;
    for (uint64_t idx = 0; idx < grid.total; ++idx) {
        Element x = principal_unit(L, psi_m1, grid.decode(idx));
        UnramElt y = norm_to_unram(G, x);
        auto digits = L->coeff_ring().base_digits(y, static_cast<int>(m + c));
        std::vector<unsigned long> key;
        for (long k = m - 1; k < m + c; ++k)
            key.push_back(FQ->to_index(digits[static_cast<size_t>(k)]));
        S.insert(std::move(key));
    }
    out.depth_image_order = static_cast<long>(S.size());
    long expect = 1;
    for (int i = 0; i < c + 1; ++i) expect *= static_cast<long>(FQ->q());
    out.depth_consistency_ok = out.order * out.depth_image_order == expect;
    return out;
}

FqElt cokernel_delta(const TowerPtr& L, const UnramElt& u, long m) {
    auto digits = L->coeff_ring().base_digits(u, static_cast<int>(m));
    const auto& FQ = L->residue_field();
    if (FQ->to_index(digits[0]) != 1)
        throw UnitNotAtRequiredLevel("unit must be principal");
    for (long k = 1; k < m - 1; ++k)
        if (!FQ->is_zero(digits[static_cast<size_t>(k)]))
            throw UnitNotAtRequiredLevel("unit not in U_K^{m-1}");
    return digits[static_cast<size_t>(m - 1)];
}

bool cokernel_class_trivial(const CokernelResult& ck, const FqElt& delta) {
    for (const auto& w : ck.image)
        if (w == delta) return true;
    return false;
}

BaseChangeClassResult cokernel_class_base_change(const TowerPtr& L, long m, const UnramElt& u,
                                                 int d) {
    BaseChangeClassResult out;
    out.degree = d;
    RamData rd = ram_data(L);
    CokernelResult ck = norm_cokernel(rd, m, 1);
    FqElt delta = cokernel_delta(L, u, m);
    out.trivial_before = cokernel_class_trivial(ck, delta);

    TowerPtr Lp = unramified_base_change(L, d);
    RamData rdp = ram_data(Lp);
    CokernelResult ckp = norm_cokernel(rdp, m, 1);
    FqEmbed emb = FqEmbed::find(L->residue_field(), Lp->residue_field());
    FqElt deltap = emb.apply(delta);
    out.trivial_after = cokernel_class_trivial(ckp, deltap);
    return out;
}

long cft_unit_index(const RamData& rd, long m) {
    const auto& G = rd.G;
    const TowerPtr& L = G.L;
    const auto& FQ = L->residue_field();
    const long b = psi_int(rd.psi, m - 1) + 1; // x enumerated mod U_L^b
    DigitGrid tail(FQ, static_cast<int>(b - 1));
    if (tail.total * (FQ->q() - 1) > (UINT64_C(1) << 24))
        throw SearchBudgetExceeded("unit index enumeration too large");
    std::set<std::vector<unsigned long>> image;
    // leading digit ranges over F^x, the rest over F
    for (unsigned long lead = 1; lead < FQ->q(); ++lead) {
        for (uint64_t idx = 0; idx < tail.total; ++idx) {
            std::vector<FqElt> digits = tail.decode(idx);
            digits.insert(digits.begin(), FQ->from_index(lead));
            Element x = L->from_digits(0, digits);
            UnramElt y = norm_to_unram(G, x);
            image.insert(unit_class_key(L, y, static_cast<int>(m)));
        }
    }
    const unsigned long q = FQ->q();
    long total = static_cast<long>(q - 1);
    for (long k = 1; k < m; ++k) total *= static_cast<long>(q);
    if (total % static_cast<long>(image.size()) != 0)
        throw InvalidArgument("unit norm image size does not divide the group order");
    return total / static_cast<long>(image.size());
}

GradedNormInfo graded_norm(const RamData& rd, long u) {
    const auto& G = rd.G;
    const TowerPtr& L = G.L;
    const auto& FQ = L->residue_field();
    const long lu = psi_int(rd.psi, u);
    GradedNormInfo info;
    std::set<unsigned long> image;
    for (unsigned long di = 0; di < FQ->q(); ++di) {
        Element x = principal_unit(L, lu, {FQ->from_index(di)});
        UnramElt y = norm_to_unram(G, x);
        auto digits = L->coeff_ring().base_digits(y, static_cast<int>(u + 1));
        FqElt delta = digits[static_cast<size_t>(u)];
        image.insert(FQ->to_index(delta));
        if (FQ->is_zero(delta)) ++info.kernel_size;
    }
    info.surjective = image.size() == FQ->q();
    return info;
}

} // namespace lf
