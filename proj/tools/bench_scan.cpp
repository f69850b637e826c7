// Compares the serial reference and the OpenMP variant of the brute-force
// valuation scan on a fixed instance and reports timings.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "lf/fontaine.hpp"
#include "lf/maxval.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace lf;

namespace {

double run_ms(const TPoly& f, const TowerPtr& E, const Rat& cap, Exec ex, MaxValResult& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = max_image_valuation_bruteforce(f, E, cap, ex);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main() {
    // L = Q_3(zeta_9 + zeta_9^-1 + 1): x^3 - 3x^2 + 3; E = a degree-3 witness
    BaseSpec bs;
    bs.kind = Kind::mixed;
    bs.p = 3;
    bs.precision = 14;
    TowerPtr K = FieldTower::make(bs);
    TowerPtr L = K->extend_eisenstein(
        {K->from_int(3), K->from_int(0), K->from_int(-3)});
    TowerPtr E = K->extend_eisenstein(
        {K->from_int(12), K->from_int(0), K->from_int(-3)});
    TPoly f = defining_poly_over_base(L);
    Rat cap(4);

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif

    MaxValResult rs, rp;
    // warm once (teichmuller caches etc.)
    run_ms(f, E, cap, Exec::serial, rs);

    double ts = 0, tp = 0;
    const int reps = 3;
    for (int i = 0; i < reps; ++i) ts += run_ms(f, E, cap, Exec::serial, rs);
    for (int i = 0; i < reps; ++i) tp += run_ms(f, E, cap, Exec::parallel, rp);
    ts /= reps;
    tp /= reps;

    bool agree = rs.above_cap == rp.above_cap && rs.value == rp.value &&
                 rs.witness_digits == rp.witness_digits;
    std::printf("search space: 3^%ld = %.0f points\n", rs.capT,
                std::pow(3.0, static_cast<double>(rs.capT)));
    std::printf("serial:   %8.2f ms\n", ts);
    std::printf("parallel: %8.2f ms\n", tp);
    std::printf("speedup:  %8.2fx\n", ts / tp);
    std::printf("results agree: %s\n", agree ? "yes" : "NO");
    std::printf("max v_K(f(beta)) %s %s\n", rs.above_cap ? ">=" : "=",
                rat_str(rs.value).c_str());
    return agree ? 0 : 1;
}
