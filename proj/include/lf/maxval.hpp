#ifndef LF_MAXVAL_HPP
#define LF_MAXVAL_HPP

#include <cstdint>
#include <vector>

#include "lf/poly.hpp"

namespace lf {

enum class Exec { serial, parallel };

// Outcome of maximizing v_K(f(beta)) over integral beta in E, capped.
//   above_cap: some beta achieves v_K >= cap; witness_digits holds one.
//   otherwise: value is the exact maximum (< cap) and the witness attains it
//   and is minimal in digit order among the maximizers.
struct MaxValResult {
    bool above_cap = false;
    Rat value = 0;
    std::vector<FqElt> witness_digits; // beta digits at v_T positions 0..capT-1
    long capT = 0;                     // search depth in v_T units
};

Element materialize_witness(const TowerPtr& E, const MaxValResult& r);

// Exact branch-and-bound over uniformizer-adic digits of beta.
MaxValResult max_image_valuation(const TPoly& f, const TowerPtr& E, const Rat& cap);

// Independent oracle: enumerate every beta mod a_{E/K}^cap. The search space
// q^capT must stay <= 2^26. The parallel variant partitions the index space
// into fixed chunks merged in order, so results are identical for any thread
// count.
MaxValResult max_image_valuation_bruteforce(const TPoly& f, const TowerPtr& E, const Rat& cap,
                                            Exec ex = Exec::serial);

// Fixed-size digit grid used by the enumeration kernels.
struct DigitGrid {
    FqFieldPtr F;
    int len = 0;
    uint64_t total = 1;

    DigitGrid(FqFieldPtr field, int length);
    std::vector<FqElt> decode(uint64_t idx) const;
};

} // namespace lf

#endif
