#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lf/unram.hpp"

using namespace lf;

namespace {

UnramRing mixed_ring(long p, int deg, int n) {
    auto F = FqField::make(p, FqField::default_modulus(p, deg));
    return UnramRing::make(Kind::mixed, p, F, n);
}

UnramRing equal_ring(long p, int deg, int n) {
    auto F = FqField::make(p, FqField::default_modulus(p, deg));
    return UnramRing::make(Kind::equal, p, F, n);
}

} // namespace

TEST_CASE("mixed ring over Q_2 agrees with integer arithmetic mod 2^n") {
    const int n = 20;
    UnramRing R = mixed_ring(2, 1, n);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        long a = static_cast<long>(rng() % 100000) - 50000;
        long b = static_cast<long>(rng() % 100000) - 50000;
        UnramElt ea = R.from_int(Int(a), n), eb = R.from_int(Int(b), n);
        Int mod = 1;
        for (int i = 0; i < n; ++i) mod *= 2;
        auto norm = [&](const Int& v) -> Int { return ((v % mod) + mod) % mod; };
        CHECK(R.add(ea, eb, n).zc[0] == norm(Int(a) + Int(b)));
        CHECK(R.mul(ea, eb, n).zc[0] == norm(Int(a) * Int(b)));
        CHECK(R.sub(ea, eb, n).zc[0] == norm(Int(a) - Int(b)));
    }
}

TEST_CASE("valuation and exact division") {
    const int n = 12;
    UnramRing R = mixed_ring(3, 1, n);
    UnramElt x = R.from_int(Int(27 * 5), n);
    CHECK(R.val(x, n) == 3);
    UnramElt y = R.div_base(x, 3, n);
    CHECK(y.zc[0] == 5);
    CHECK(R.val(R.zero(), n) == n);
}

TEST_CASE("unit inverse, mixed and equal characteristic") {
    const int n = 16;
    for (UnramRing R : {mixed_ring(2, 2, n), equal_ring(2, 2, n)}) {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 40; ++t) {
            // random unit: nonzero residue plus noise
            UnramElt u = R.from_fq_lift(R.F()->from_index(1 + rng() % (R.F()->q() - 1)));
            UnramElt noise = R.teich(R.F()->from_index(rng() % R.F()->q()), n);
            if (R.kind() == Kind::mixed)
                noise = R.mul_int(noise, Int(2), n);
            else {
                UnramElt tsh;
                tsh.tc = {R.F()->zero(), R.F()->one()};
                noise = R.mul(noise, tsh, n);
            }
            u = R.add(u, noise, n);
            UnramElt v = R.inv(u, n);
            CHECK(R.eq(R.mul(u, v, n), R.one(), n));
        }
    }
}

TEST_CASE("teichmuller representatives are multiplicative and reduce correctly") {
    const int n = 10;
    UnramRing R = mixed_ring(3, 2, n); // W(F_9)/3^10
    const auto& F = R.F();
    for (unsigned long i = 0; i < F->q(); ++i) {
        for (unsigned long j = 0; j < F->q(); ++j) {
            FqElt a = F->from_index(i), b = F->from_index(j);
            UnramElt ta = R.teich(a, n), tb = R.teich(b, n);
            CHECK(R.residue(ta) == a);
            CHECK(R.eq(R.mul(ta, tb, n), R.teich(F->mul(a, b), n), n));
        }
    }
    // teich(d)^q = teich(d)
    for (unsigned long i = 0; i < F->q(); ++i) {
        UnramElt t = R.teich(F->from_index(i), n);
        CHECK(R.eq(R.pow(t, F->q(), n), t, n));
    }
}

TEST_CASE("base digit round trip") {
    const int n = 9;
    for (UnramRing R : {mixed_ring(2, 3, n), equal_ring(3, 2, n)}) {
        std::mt19937_64 rng(17);
        for (int t = 0; t < 30; ++t) {
            std::vector<FqElt> digits;
            for (int k = 0; k < n; ++k) digits.push_back(R.F()->from_index(rng() % R.F()->q()));
            UnramElt x = R.from_base_digits(digits, n);
            CHECK(R.base_digits(x, n) == digits);
        }
    }
}

TEST_CASE("ring embedding via Hensel-lifted root") {
    const int n = 12;
    UnramRing Rsmall = mixed_ring(2, 1, n);
    UnramRing Rbig = mixed_ring(2, 2, n);
    FqEmbed fe = FqEmbed::find(Rsmall.F(), Rbig.F());
    RingEmbed emb = RingEmbed::make(Rsmall, Rbig, fe);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; ++t) {
        UnramElt a = Rsmall.from_int(Int(static_cast<long>(rng() % 4096)), n);
        UnramElt b = Rsmall.from_int(Int(static_cast<long>(rng() % 4096)), n);
        CHECK(Rbig.eq(emb.apply(Rsmall.mul(a, b, n), n),
                      Rbig.mul(emb.apply(a, n), emb.apply(b, n), n), n));
        CHECK(Rbig.eq(emb.apply(Rsmall.add(a, b, n), n),
                      Rbig.add(emb.apply(a, n), emb.apply(b, n), n), n));
    }
    // valuations are preserved
    UnramElt x = Rsmall.from_int(Int(40), n);
    CHECK(Rbig.val(emb.apply(x, n), n) == Rsmall.val(x, n));
}
