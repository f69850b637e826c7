#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lf/ramification.hpp"

using namespace lf;

namespace {

TowerPtr q2_tower(int prec = 16) { return FieldTower::make(BaseSpec{Kind::mixed, 2, 1, {}, prec}); }
TowerPtr q3_tower(int prec = 16) { return FieldTower::make(BaseSpec{Kind::mixed, 3, 1, {}, prec}); }

TowerPtr gauss_tower(int prec = 16) {
    TowerPtr K = q2_tower(prec);
    return K->extend_eisenstein({K->from_int(2), K->from_int(-2)});
}

TowerPtr cyclotomic_cubic(int prec = 16) { // x^3 - 3x^2 + 3, the degree-3 subfield of Q_3(zeta_9)
    TowerPtr K = q3_tower(prec);
    return K->extend_eisenstein({K->from_int(3), K->from_int(0), K->from_int(-3)});
}

TowerPtr real_cyclotomic_quartic(int prec = 20) { // x^4 - 4x^2 + 2, two jumps
    TowerPtr K = q2_tower(prec);
    return K->extend_eisenstein(
        {K->from_int(2), K->from_int(0), K->from_int(-4), K->from_int(0)});
}

TowerPtr artin_schreier_tower(int prec = 16) {
    TowerPtr K = FieldTower::make(BaseSpec{Kind::equal, 2, 1, {}, prec});
    Element t = K->uniformizer();
    return K->extend_eisenstein({t, t});
}

} // namespace

TEST_CASE("Q_2(i)/Q_2: group, filtration, Herbrand data") {
    TowerPtr L = gauss_tower();
    GaloisGroup G = galois_group(L);
    REQUIRE(G.order() == 2);
    // the conjugate of pi is 2 - pi
    Element sigma_pi = G.roots[1];
    Element expect = L->sub(L->from_int(2), L->uniformizer());
    CHECK(L->is_zero_at_precision(L->sub(sigma_pi, expect)));
    CHECK(G.abelian);
    // v_L(sigma pi - pi) = 2: G_0 = G_1 = G, G_2 = 1
    CHECK(G.jvals[1] == 2);
    RamData rd = ram_data(L);
    CHECK(rd.serre_jumps == std::vector<long>{1});
    CHECK(rd.subgroup_serre(0).size() == 2);
    CHECK(rd.subgroup_serre(1).size() == 2);
    CHECK(rd.subgroup_serre(2).size() == 1);
    // phi(u) = u on [0,1], slope 1/2 after; psi(1) = 1, psi(2) = 3
    CHECK(rd.phi(Rat(1)) == Rat(1));
    CHECK(rd.phi(Rat(3)) == Rat(2));
    CHECK(rd.psi(Rat(1)) == Rat(1));
    CHECK(rd.psi(Rat(2)) == Rat(3));
    // tilde conventions: psi~(u_{L/K}) = i_{L/K}: psi~(2) = 1
    CHECK(rd.psi_tilde(Rat(2)) == Rat(1));
    CHECK(upper_break(rd) == Rat(2));
    CHECK(lower_break(rd) == Rat(1));
    CHECK(rd.wild);
    CHECK(rd.single_jump);
    CHECK(hasse_arf_check(rd));
}

TEST_CASE("tame quadratic x^2 - 3 over Q_3") {
    TowerPtr K = q3_tower();
    TowerPtr L = K->extend_eisenstein({K->from_int(-3), K->from_int(0)});
    RamData rd = ram_data(L);
    // v_L(sigma pi - pi) = v_L(2 pi) = 1: G_0 = G, G_1 = 1
    CHECK(rd.G.jvals[1] == 1);
    CHECK(rd.serre_jumps == std::vector<long>{0});
    CHECK(upper_break(rd) == Rat(1));
    CHECK(rd.tame);
    CHECK(hasse_arf_check(rd));
}

TEST_CASE("trivial extension") {
    TowerPtr K = q2_tower();
    RamData rd = ram_data(K);
    CHECK(rd.trivial);
    CHECK(rd.phi == PLFunc::identity());
    CHECK(rd.psi == PLFunc::identity());
    CHECK(filtration_rows(rd, Convention::serre_lower).empty());
    CHECK_THROWS_AS(upper_break(rd), TrivialExtension);
}

TEST_CASE("x^3 - 2 over Q_2 is not Galois") {
    TowerPtr K = q2_tower();
    TowerPtr L = K->extend_eisenstein({K->from_int(-2), K->from_int(0), K->from_int(0)});
    CHECK_THROWS_AS(galois_group(L), NotGalois);
}

TEST_CASE("cyclotomic cubic over Q_3: wild C_3 with u = 2") {
    TowerPtr L = cyclotomic_cubic();
    RamData rd = ram_data(L);
    CHECK(rd.G.order() == 3);
    CHECK(rd.G.abelian);
    CHECK(rd.serre_jumps == std::vector<long>{1});
    CHECK(upper_break(rd) == Rat(2));
    CHECK(lower_break(rd) == ratq(2, 3));
    CHECK(rd.wild);
    CHECK(hasse_arf_check(rd));
}

TEST_CASE("Artin-Schreier model over F_2((t)): u = 2") {
    TowerPtr L = artin_schreier_tower();
    RamData rd = ram_data(L);
    CHECK(rd.G.order() == 2);
    CHECK(rd.serre_jumps == std::vector<long>{1});
    CHECK(upper_break(rd) == Rat(2));
    CHECK(rd.wild);
}

TEST_CASE("phi/psi are mutually inverse and conventions round-trip") {
    for (TowerPtr L : {gauss_tower(), cyclotomic_cubic(), real_cyclotomic_quartic(),
                       artin_schreier_tower()}) {
        RamData rd = ram_data(L);
        CHECK(rd.phi.compose(rd.psi) == PLFunc::identity());
        CHECK(rd.psi.compose(rd.phi) == PLFunc::identity());
        CHECK(rd.phi_tilde.compose(rd.psi_tilde) == PLFunc::identity());
        // serre -> fontaine -> serre on the Herbrand functions
        long e = rd.G.order();
        PLFunc back = rd.phi_tilde.affine(Rat(1), ratq(1, e), ratq(1, e), Rat(-1));
        CHECK(back == rd.phi);
        // jump indices round-trip between conventions
        auto sl = filtration_rows(rd, Convention::serre_lower);
        auto fl = filtration_rows(rd, Convention::fontaine_lower);
        auto su = filtration_rows(rd, Convention::serre_upper);
        auto fu = filtration_rows(rd, Convention::fontaine_upper);
        for (size_t k = 0; k < sl.size(); ++k) {
            CHECK(fl[k].index == (sl[k].index + 1) / e);
            CHECK(su[k].index == rd.phi(sl[k].index));
            CHECK(fu[k].index == su[k].index + 1);
            CHECK(fl[k].members == sl[k].members);
            CHECK(fu[k].members == su[k].members);
        }
    }
}

TEST_CASE("two-jump cyclic quartic: x^4 - 4x^2 + 2 over Q_2") {
    TowerPtr L = real_cyclotomic_quartic();
    RamData rd = ram_data(L);
    REQUIRE(rd.G.order() == 4);
    CHECK(rd.G.abelian);
    CHECK(rd.serre_jumps == std::vector<long>{2, 4});
    CHECK(!rd.single_jump);
    CHECK(upper_break(rd) == Rat(4));
    CHECK(lower_break(rd) == ratq(5, 4));
    CHECK(hasse_arf_check(rd));
    // G^{(u)} has order 2
    CHECK(rd.subgroup_serre(4).size() == 2);
}

TEST_CASE("single-jump subfield of a single-jump extension is K") {
    TowerPtr L = gauss_tower();
    RamData rd = ram_data(L);
    SubfieldData sd = single_jump_subfield(rd);
    CHECK(sd.M->degree_over_base() == 1);
    CHECK(sd.e_MK == 1);
    CHECK(sd.identity_ok);
    CHECK(sd.u_LM == Rat(2));
}

TEST_CASE("single-jump subfield of the quartic: M = Q_2(sqrt 2)") {
    TowerPtr L = real_cyclotomic_quartic();
    RamData rd = ram_data(L);
    SubfieldData sd = single_jump_subfield(rd);
    // [L:M] = |G^{(u)}| = 2, so [M:K] = 2
    CHECK(sd.H.size() == 2);
    CHECK(sd.e_MK == 2);
    CHECK(sd.M->degree_over_base() == 2);
    // i_{L/M} = e_{M/K} i_{L/K}
    CHECK(sd.i_LK == ratq(5, 4));
    CHECK(sd.i_LM == ratq(5, 2));
    CHECK(sd.identity_ok);
    // theta generates Q_2(sqrt 2): x^2 + 4x + 2 or an equivalent Eisenstein
    RamData rdM = ram_data(sd.M);
    CHECK(rdM.G.order() == 2);
    // transitivity: psi_{L/K} = psi_{L/M} o psi_{M/K}
    PLFunc composed = sd.psi_LM.compose(rdM.psi);
    CHECK(composed == rd.psi);
    // u break of L/M: single jump at the top: u_{L/M} = bH + 1 = 5
    CHECK(sd.u_LM == Rat(5));
    // the subgroup at the last jump fixes M pointwise: G_(i_{L/K}) = Gal(L/M)
    CHECK(rd.subgroup_serre(rd.serre_jumps.back()) == sd.H);
}

TEST_CASE("filtration is independent of the uniformizer choice") {
    TowerPtr L = cyclotomic_cubic();
    RamData rd = ram_data(L);
    // multiset of v(sigma rho - rho) is the same from any base root rho
    const auto& G = rd.G;
    for (int base = 1; base < G.order(); ++base) {
        std::vector<long> js;
        for (int i = 0; i < G.order(); ++i) {
            if (G.table[i][base] == base) continue; // identity relative to rho
            Element diff = L->sub(G.apply(i, G.roots[base]), G.roots[base]);
            js.push_back(L->valuation_vt(diff));
        }
        std::vector<long> ref;
        for (size_t i = 1; i < G.jvals.size(); ++i) ref.push_back(G.jvals[i]);
        std::sort(js.begin(), js.end());
        std::sort(ref.begin(), ref.end());
        CHECK(js == ref);
    }
    // scaling the uniformizer by a unit gives the same invariants
    const auto& R = L->coeff_ring();
    UnramElt u = R.from_int(Int(2), L->nmax()); // the unit 2 in Z_3
    TowerPtr L2 = scaled_uniformizer_tower(L, u);
    RamData rd2 = ram_data(L2);
    CHECK(rd2.serre_jumps == rd.serre_jumps);
    CHECK(upper_break(rd2) == upper_break(rd));
    CHECK(rd2.phi == rd.phi);
}

TEST_CASE("unramified base change preserves the filtration") {
    for (TowerPtr L : {gauss_tower(), cyclotomic_cubic(), artin_schreier_tower()}) {
        RamData rd = ram_data(L);
        TowerPtr Lp = unramified_base_change(L, 2);
        RamData rdp = ram_data(Lp);
        CHECK(rdp.G.order() == rd.G.order());
        CHECK(rdp.serre_jumps == rd.serre_jumps);
        CHECK(upper_break(rdp) == upper_break(rd));
        CHECK(rdp.phi == rd.phi);
        // e and f bookkeeping
        CHECK(Lp->e() == L->e());
        CHECK(Lp->f() == 2 * L->f());
    }
}
