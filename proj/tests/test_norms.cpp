#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lf/unit_norms.hpp"

using namespace lf;

namespace {

TowerPtr q2_tower(int prec = 16) { return FieldTower::make(BaseSpec{Kind::mixed, 2, 1, {}, prec}); }

TowerPtr gauss_tower(int prec = 16) {
    TowerPtr K = q2_tower(prec);
    return K->extend_eisenstein({K->from_int(2), K->from_int(-2)});
}

TowerPtr cyclotomic_cubic(int prec = 16) {
    TowerPtr K = FieldTower::make(BaseSpec{Kind::mixed, 3, 1, {}, prec});
    return K->extend_eisenstein({K->from_int(3), K->from_int(0), K->from_int(-3)});
}

TowerPtr artin_schreier_tower(int prec = 16) {
    TowerPtr K = FieldTower::make(BaseSpec{Kind::equal, 2, 1, {}, prec});
    Element t = K->uniformizer();
    return K->extend_eisenstein({t, t});
}

} // namespace

TEST_CASE("norm of 1+i is 2; norms of units are units") {
    TowerPtr L = gauss_tower();
    GaloisGroup G = galois_group(L);
    Element n = norm(G, L->uniformizer());
    CHECK(L->eq_at(n, L->from_int(2), L->known_precision(n)));
    // norm of a unit is a unit, and a random sample keeps valuation 0
    for (long v : {1, 3, 5, 7}) {
        Element u = L->from_int(v);
        CHECK(L->valuation(norm(G, u)) == Rat(0));
    }
    // norm multiplicativity on a pair
    Element x = L->add(L->one(), L->uniformizer());
    Element y = L->add(L->from_int(3), L->uniformizer());
    Element lhs = norm(G, L->mul(x, y));
    Element rhs = L->mul(norm(G, x), norm(G, y));
    CHECK(L->eq_at(lhs, rhs, std::min(L->known_precision(lhs), L->known_precision(rhs))));
}

TEST_CASE("trivial extension norms") {
    TowerPtr K = q2_tower();
    GaloisGroup G = galois_group(K);
    Element x = K->from_int(7);
    CHECK(K->eq_at(norm(G, x), x, K->known_precision(x)));
}

TEST_CASE("norm surjectivity above the break") {
    for (TowerPtr L : {gauss_tower(), cyclotomic_cubic(), artin_schreier_tower()}) {
        RamData rd = ram_data(L);
        long m = to_long(Int(upper_break(rd).get_num()));
        SurjectivityResult r = norm_surjectivity_above_break(rd, m, 2);
        CHECK(r.ok);
        CHECK(r.hit == r.total);
        // parallel variant agrees
        SurjectivityResult rp = norm_surjectivity_above_break(rd, m, 2, Exec::parallel);
        CHECK(rp.ok == r.ok);
        CHECK(rp.hit == r.hit);
    }
}

TEST_CASE("norm cokernel of Q_2(i)/Q_2 at m = 2") {
    TowerPtr L = gauss_tower();
    RamData rd = ram_data(L);
    CokernelResult ck = norm_cokernel(rd, 2, 2);
    CHECK(ck.order == 2);
    CHECK(ck.image_order == 1);
    CHECK(ck.image_subgroup_ok);
    CHECK(ck.depth_consistency_ok);
    // the class of u = 3 = 1 + 2 is nontrivial (delta digit = 1)
    const auto& R = L->coeff_ring();
    UnramElt u3 = R.from_int(Int(3), L->nmax());
    FqElt delta = cokernel_delta(L, u3, 2);
    CHECK(!cokernel_class_trivial(ck, delta));
    // the class of u = 5 = 1 + 4 is trivial (5 = N(1+pi) lands in U^2)
    UnramElt u5 = R.from_int(Int(5), L->nmax());
    CHECK(cokernel_class_trivial(ck, cokernel_delta(L, u5, 2)));
    // a non-principal unit is rejected
    CHECK_THROWS_AS(cokernel_delta(L, R.from_int(Int(2), L->nmax()), 2), UnitNotAtRequiredLevel);
    // order matches |G| = [L:K]
    CHECK(ck.order == rd.G.order());
}

TEST_CASE("norm cokernel of the wild cubic and the Artin-Schreier model") {
    {
        TowerPtr L = cyclotomic_cubic();
        RamData rd = ram_data(L);
        CokernelResult ck = norm_cokernel(rd, 2, 2);
        CHECK(ck.order == 3);
        CHECK(ck.depth_consistency_ok);
    }
    {
        TowerPtr L = artin_schreier_tower();
        RamData rd = ram_data(L);
        CokernelResult ck = norm_cokernel(rd, 2, 2);
        CHECK(ck.order == 2);
        CHECK(ck.depth_consistency_ok);
    }
}

TEST_CASE("local CFT index [K^x : N L^x] = [L : K]") {
    for (TowerPtr L : {gauss_tower(), cyclotomic_cubic(), artin_schreier_tower()}) {
        RamData rd = ram_data(L);
        long m = to_long(Int(upper_break(rd).get_num()));
        CHECK(cft_unit_index(rd, m) == rd.G.order());
    }
}

TEST_CASE("graded norm: kernel |G| at the break, surjective above") {
    for (TowerPtr L : {gauss_tower(), cyclotomic_cubic(), artin_schreier_tower()}) {
        RamData rd = ram_data(L);
        long m = to_long(Int(upper_break(rd).get_num()));
        GradedNormInfo at_break = graded_norm(rd, m - 1);
        CHECK(at_break.kernel_size == rd.G.order());
        for (long u = m; u <= m + 2; ++u) {
            GradedNormInfo above = graded_norm(rd, u);
            CHECK(above.surjective);
            CHECK(above.kernel_size == 1);
        }
    }
}

TEST_CASE("base change kills the nontrivial class (Lemma 4.4 functoriality)") {
    TowerPtr L = gauss_tower();
    const auto& R = L->coeff_ring();
    UnramElt u3 = R.from_int(Int(3), L->nmax());
    BaseChangeClassResult bc = cokernel_class_base_change(L, 2, u3, 2);
    CHECK(!bc.trivial_before);
    CHECK(bc.trivial_after); // [k':k] = p = 2 kills every class
    // the trivial class stays trivial
    UnramElt u1 = R.one();
    BaseChangeClassResult bc1 = cokernel_class_base_change(L, 2, u1, 2);
    CHECK(bc1.trivial_before);
    CHECK(bc1.trivial_after);
}

TEST_CASE("cokernel order is invariant under the Eisenstein model") {
    // replace pi by u*pi for the unit u = 3 and recompute
    TowerPtr L = gauss_tower();
    const auto& R = L->coeff_ring();
    TowerPtr L2 = scaled_uniformizer_tower(L, R.from_int(Int(3), L->nmax()));
    RamData rd = ram_data(L);
    RamData rd2 = ram_data(L2);
    CokernelResult a = norm_cokernel(rd, 2, 2);
    CokernelResult b = norm_cokernel(rd2, 2, 2);
    CHECK(a.order == b.order);
}
