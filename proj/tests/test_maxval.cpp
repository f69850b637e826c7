#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lf/fontaine.hpp"
#include "lf/maxval.hpp"

using namespace lf;

namespace {

TowerPtr q2_tower(int prec = 16) { return FieldTower::make(BaseSpec{Kind::mixed, 2, 1, {}, prec}); }

TowerPtr gauss_tower(int prec = 16) {
    TowerPtr K = q2_tower(prec);
    return K->extend_eisenstein({K->from_int(2), K->from_int(-2)});
}

TowerPtr witness_tower(int prec = 16) { // x^2 - 2x + 6
    TowerPtr K = q2_tower(prec);
    return K->extend_eisenstein({K->from_int(6), K->from_int(-2)});
}

} // namespace

TEST_CASE("minimal polynomial over its own field is above every cap") {
    TowerPtr L = gauss_tower();
    TPoly f = defining_poly_over_base(L);
    for (long cap : {1, 2, 3, 5}) {
        MaxValResult r = max_image_valuation(f, L, Rat(cap));
        CHECK(r.above_cap);
        // the witness achieves >= cap
        Element beta = materialize_witness(L, r);
        Element val = poly::eval(poly::map_into(f, L), beta);
        auto v = L->val_rep(val);
        if (v) CHECK(ratq(*v, L->e()) >= Rat(cap));
    }
}

TEST_CASE("perturbed witness: max over E is exactly 2") {
    // f = x^2-2x+2, E = tower of x^2-2x+6, cap 3 -> maximum 2 at beta = pi_E
    TowerPtr K = q2_tower();
    TowerPtr L = gauss_tower();
    TowerPtr E = witness_tower();
    TPoly f = defining_poly_over_base(L);
    MaxValResult r = max_image_valuation(f, E, Rat(3));
    CHECK(!r.above_cap);
    CHECK(r.value == Rat(2));
    // v_K(f(pi_E)) = v_K((u-1) a_0) = v_2(2*2) = 2: check the witness achieves it
    Element beta = materialize_witness(E, r);
    Element val = poly::eval(poly::map_into(f, E), beta);
    CHECK(E->valuation(val) == Rat(2));
    // cross-check against exhaustive enumeration to depth 8 (spec oracle)
    MaxValResult bf = max_image_valuation_bruteforce(f, E, Rat(3), Exec::serial);
    CHECK(!bf.above_cap);
    CHECK(bf.value == Rat(2));
    CHECK(bf.witness_digits == r.witness_digits);
    // pi_E itself achieves the maximum
    Element piE = E->uniformizer();
    Element fpi = poly::eval(poly::map_into(f, E), piE);
    CHECK(E->valuation(fpi) == Rat(2));
}

TEST_CASE("over the base field the best value is 1") {
    TowerPtr K = q2_tower();
    TowerPtr L = gauss_tower();
    TPoly f = defining_poly_over_base(L);
    MaxValResult r = max_image_valuation(f, K, Rat(3));
    CHECK(!r.above_cap);
    CHECK(r.value == Rat(1));
    MaxValResult bf = max_image_valuation_bruteforce(f, K, Rat(3), Exec::serial);
    CHECK(bf.value == Rat(1));
    CHECK(bf.witness_digits == r.witness_digits);
}

TEST_CASE("oracle equivalence on assorted instances") {
    TowerPtr K = q2_tower();
    TowerPtr K3 = FieldTower::make(BaseSpec{Kind::mixed, 3, 1, {}, 16});
    TowerPtr L3 = K3->extend_eisenstein({K3->from_int(3), K3->from_int(0), K3->from_int(-3)});
    TowerPtr Ft = FieldTower::make(BaseSpec{Kind::equal, 2, 1, {}, 16});
    Element t = Ft->uniformizer();
    TowerPtr AS = Ft->extend_eisenstein({t, t});

    struct Inst {
        TPoly f;
        TowerPtr E;
        Rat cap;
    };
    std::vector<Inst> instances = {
        {poly::from_ints(K, {2, -2, 1}), witness_tower(), Rat(3)},
        {poly::from_ints(K, {6, -2, 1}), gauss_tower(), Rat(3)},
        {poly::from_ints(K, {2, 0, 1}), gauss_tower(), Rat(2)},
        {poly::from_ints(K3, {3, 0, -3, 1}), L3, Rat(3)},
        {poly::from_ints(K3, {12, 0, -3, 1}), L3, Rat(3)},
        {poly::make(Ft, {t, t, Ft->one()}), AS, Rat(3)},
    };
    for (const auto& inst : instances) {
        MaxValResult a = max_image_valuation(inst.f, inst.E, inst.cap);
        MaxValResult b = max_image_valuation_bruteforce(inst.f, inst.E, inst.cap, Exec::serial);
        CHECK(a.above_cap == b.above_cap);
        CHECK(a.value == b.value);
        CHECK(a.witness_digits == b.witness_digits);
    }
}

TEST_CASE("serial and parallel scans agree digit for digit") {
    TowerPtr K3 = FieldTower::make(BaseSpec{Kind::mixed, 3, 1, {}, 16});
    TowerPtr L3 = K3->extend_eisenstein({K3->from_int(3), K3->from_int(0), K3->from_int(-3)});
    TPoly f = poly::from_ints(K3, {21, 3, -3, 1});
    MaxValResult s = max_image_valuation_bruteforce(f, L3, Rat(3), Exec::serial);
    MaxValResult p = max_image_valuation_bruteforce(f, L3, Rat(3), Exec::parallel);
    CHECK(s.above_cap == p.above_cap);
    CHECK(s.value == p.value);
    CHECK(s.witness_digits == p.witness_digits);
}

TEST_CASE("monotonicity: enlarging E never decreases the maximum") {
    TowerPtr K = q2_tower();
    TowerPtr L = gauss_tower();
    TowerPtr E = witness_tower();
    TPoly f = defining_poly_over_base(L);
    Rat capv(3);
    MaxValResult rK = max_image_valuation(f, K, capv);
    MaxValResult rE = max_image_valuation(f, E, capv);
    // K embeds in E (E/K is an extension of the base), so max over E >= max over K
    CHECK(rE.value >= rK.value);
    // base change enlarges E as well
    TowerPtr EK2 = unramified_base_change(E, 2);
    MaxValResult rEK = max_image_valuation(f, EK2, capv);
    bool above_or_bigger = rEK.above_cap || rEK.value >= rE.value;
    CHECK(above_or_bigger);
}

TEST_CASE("cap beyond certified precision is refused") {
    TowerPtr L = gauss_tower(8);
    TPoly f = defining_poly_over_base(L);
    CHECK_THROWS_AS(max_image_valuation(f, L, Rat(50)), PrecisionUnderflow);
}
