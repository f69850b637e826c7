#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lf/fontaine.hpp"

using namespace lf;

namespace {

TowerPtr q2_tower(int prec = 16) { return FieldTower::make(BaseSpec{Kind::mixed, 2, 1, {}, prec}); }

TowerPtr gauss_tower(int prec = 16) {
    TowerPtr K = q2_tower(prec);
    return K->extend_eisenstein({K->from_int(2), K->from_int(-2)});
}

TowerPtr witness_tower(int prec = 16) {
    TowerPtr K = q2_tower(prec);
    return K->extend_eisenstein({K->from_int(6), K->from_int(-2)});
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

UnramElt unit_of(const TowerPtr& L, long v) { return L->coeff_ring().from_int(Int(v), L->nmax()); }

} // namespace

TEST_CASE("hom_exists: reduction map, witness level, certified refusal") {
    TowerPtr L = gauss_tower();
    TowerPtr E = witness_tower();
    TowerPtr K = q2_tower();
    // E = L: the identity reduction map exists at every level
    for (long m : {1, 2, 3}) CHECK(hom_exists(L, L, Rat(m)).has_value());
    // witness at m = 2 with achieved exactly 2
    auto hw = hom_exists(L, E, Rat(2));
    REQUIRE(hw.has_value());
    CHECK(!hw->above_precision);
    CHECK(*hw->achieved == Rat(2));
    // no hom into the base at level 2
    CHECK(!hom_exists(L, K, Rat(2)).has_value());
}

TEST_CASE("witness_extension: u = 1 gives L back, u = 3 escapes, norms return") {
    TowerPtr L = gauss_tower();
    TPoly f = defining_poly_over_base(L);
    // u = 1: the unperturbed polynomial, i.e. L itself
    TowerPtr E1 = witness_extension(L, unit_of(L, 1), 2);
    CHECK(poly::has_root(f, E1));
    // u = 3: the (P_2) counterexample x^2 - 2x + 6
    TowerPtr E3 = witness_extension(L, unit_of(L, 3), 2);
    CHECK(hom_exists(L, E3, Rat(2)).has_value());
    CHECK(!poly::has_root(f, E3));
    // u = 5 = N(1 + pi): a norm, so E contains (equals) L
    TowerPtr E5 = witness_extension(L, unit_of(L, 5), 2);
    CHECK(poly::has_root(f, E5));
    // a unit not at the required level is rejected
    CHECK_THROWS_AS(witness_extension(L, unit_of(L, 2), 2), UnitNotAtRequiredLevel);
}

TEST_CASE("unramified rescue") {
    TowerPtr L = gauss_tower();
    TPoly f = defining_poly_over_base(L);
    // E containing L rescues trivially
    RescueResult r1 = find_unramified_rescue(L, L, 2);
    CHECK(r1.found);
    CHECK(r1.degree == 1);
    // the witness needs exactly the unramified quadratic
    TowerPtr E = witness_tower();
    RescueResult r2 = find_unramified_rescue(L, E, 2);
    CHECK(r2.found);
    CHECK(r2.degree == 2);
    CHECK(poly::has_root(f, r2.EK));
    // Artin-Schreier instance over F_2((t)): rescue by constants F_4
    TowerPtr AS = artin_schreier_tower();
    const auto& Rt = AS->coeff_ring();
    UnramElt u = Rt.add(Rt.one(), Rt.base_uniformizer(), AS->nmax()); // 1 + t
    TowerPtr EAS = witness_extension(AS, u, 2);
    TPoly fAS = defining_poly_over_base(AS);
    CHECK(hom_exists(AS, EAS, Rat(2)).has_value());
    CHECK(!poly::has_root(fAS, EAS));
    RescueResult r3 = find_unramified_rescue(AS, EAS, 2);
    CHECK(r3.found);
    CHECK(r3.degree == 2);
}

TEST_CASE("witness ratio: u' level and norm (the section-5 bookkeeping)") {
    TowerPtr L = gauss_tower();
    UnramElt u = unit_of(L, 3);
    TowerPtr E = witness_extension(L, u, 2);
    RescueResult rescue = find_unramified_rescue(L, E, 2);
    REQUIRE(rescue.found);
    RatioCheckResult rc = witness_ratio_check(L, E, 2, u, rescue);
    CHECK(rc.level_ok); // v_L(u' - 1) >= psi(m-1) = 1
    CHECK(rc.norm_ok);  // N(u') = u
}

TEST_CASE("psi identity") {
    TowerPtr L = gauss_tower();
    // beta = alpha: both sides infinite
    PsiIdentityResult r0 = psi_identity_check(L, L, L->uniformizer());
    CHECK(r0.ok);
    CHECK(r0.infinite);
    // beta = pi_E inside the rescued compositum: psi~(2) = 1 = v_K(pi_E - pi_L)
    UnramElt u = unit_of(L, 3);
    TowerPtr E = witness_extension(L, u, 2);
    RescueResult rescue = find_unramified_rescue(L, E, 2);
    REQUIRE(rescue.found);
    Element piE = rescue.EK->embed_from(E->uniformizer());
    PsiIdentityResult r1 = psi_identity_check(L, rescue.EK, piE);
    CHECK(r1.ok);
    CHECK(!r1.infinite);
    CHECK(r1.lhs == Rat(1));
    // seeded random integral beta in L
    std::mt19937_64 rng(12345);
    const auto& FQ = L->residue_field();
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
        std::vector<FqElt> digits;
        for (int k = 0; k < 8; ++k) digits.push_back(FQ->from_index(rng() % FQ->q()));
        Element beta = L->from_digits(0, digits);
        PsiIdentityResult r = psi_identity_check(L, L, beta);
        CHECK(r.ok);
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("module structure (freeness, killing ideal, torsion)") {
    TowerPtr L = gauss_tower();
    // E = L with beta = pi: free of rank 1
    auto hwL = hom_exists(L, L, Rat(2));
    REQUIRE(hwL.has_value());
    ModuleCheckResult mc1 = module_structure_check(L, L, 2, hwL->beta);
    CHECK(mc1.ok);
    CHECK(mc1.rank == 1);
    // the witness instance: n = 2, m = 2, rank [E:K]/[L:K] = 1
    TowerPtr E = witness_tower();
    auto hw = hom_exists(L, E, Rat(2));
    REQUIRE(hw.has_value());
    ModuleCheckResult mc2 = module_structure_check(L, E, 2, hw->beta);
    CHECK(mc2.ok);
    CHECK(mc2.rank == 1);
    CHECK(mc2.torsion_ok); // T[pi_L] = pi_L^{nm-1} T with nm-1 = 3
}

TEST_CASE("cokernel-witness correspondence") {
    CHECK(witness_cokernel_correspondence(gauss_tower(), 2));
    CHECK(witness_cokernel_correspondence(cyclotomic_cubic(), 2));
    CHECK(witness_cokernel_correspondence(artin_schreier_tower(), 2));
}

TEST_CASE("reduction equivalence") {
    // single-jump L/K: M = K and the two sides coincide literally
    TowerPtr L = gauss_tower();
    RamData rd = ram_data(L);
    SubfieldData sd = single_jump_subfield(rd);
    for (TowerPtr E : {q2_tower(), gauss_tower(), witness_tower()})
        CHECK(reduction_equivalence_check(rd, sd, E));
    // two-jump quartic: witness family and a too-small candidate
    TowerPtr K = q2_tower(20);
    TowerPtr L4 = K->extend_eisenstein(
        {K->from_int(2), K->from_int(0), K->from_int(-4), K->from_int(0)});
    RamData rd4 = ram_data(L4);
    SubfieldData sd4 = single_jump_subfield(rd4);
    TowerPtr E_wit = K->extend_eisenstein(
        {K->from_int(18), K->from_int(0), K->from_int(-4), K->from_int(0)});
    CHECK(reduction_equivalence_check(rd4, sd4, E_wit));
    CHECK(reduction_equivalence_check(rd4, sd4, gauss_tower(20)));
    CHECK(reduction_equivalence_check(rd4, sd4, q2_tower(20)));
}

TEST_CASE("corpus generation and deduplication") {
    BaseSpec bs{Kind::mixed, 2, 1, {}, 14};
    CorpusSpec cs;
    cs.max_degree = 2;
    auto corpus = generate_corpus(bs, 2, cs);
    // degree 1 (trivial) + the ramified quadratics of Q_2 reachable with
    // coefficient digits below level 3: discriminant classes -2, 2, 10, -1,
    // -5 (out of the six ramified quadratics; sqrt(-10) needs deeper digits)
    long deg2 = 0;
    for (const auto& ent : corpus)
        if (ent.degree == 2) ++deg2;
    CHECK(deg2 == 5);
    // no duplicates: mutual has_root distinguishes all pairs
    for (size_t i = 1; i < corpus.size(); ++i)
        for (size_t j = i + 1; j < corpus.size(); ++j) {
            if (corpus[i].degree != corpus[j].degree) continue;
            TPoly fi = defining_poly_over_base(corpus[i].E);
            CHECK(!poly::has_root(fi, corpus[j].E));
        }
}

TEST_CASE("pm experiment: theorem-confirmed failure at m = u") {
    TowerPtr L = gauss_tower();
    CorpusSpec cs;
    cs.max_degree = 2;
    PmReport rep = pm_experiment(L, Rat(2), cs);
    CHECK(rep.verdict == "theorem-confirmed-failure");
    CHECK(rep.witness_hom);
    CHECK(!rep.witness_contains);
    CHECK(rep.witness_rescue_degree.has_value());
    CHECK(*rep.witness_rescue_degree == 2);
    CHECK(rep.bracket_above_ok);
    CHECK(rep.bracket_below_ok);
    CHECK(rep.errors.empty());
}

TEST_CASE("pm experiment: consistent above the break") {
    TowerPtr L = gauss_tower();
    CorpusSpec cs;
    cs.max_degree = 2;
    PmReport rep = pm_experiment(L, Rat(3), cs);
    CHECK(rep.verdict == "consistent-with-(P_m)");
    CHECK(rep.bracket_above_ok);
}

TEST_CASE("pm experiment: tame witness at m = 1") {
    TowerPtr K = FieldTower::make(BaseSpec{Kind::mixed, 3, 1, {}, 14});
    TowerPtr L = K->extend_eisenstein({K->from_int(-3), K->from_int(0)});
    CorpusSpec cs;
    cs.max_degree = 2;
    PmReport rep = pm_experiment(L, Rat(1), cs);
    CHECK(rep.verdict == "refuted");
    CHECK(rep.witness_hom);
    CHECK(!rep.witness_contains);
}
