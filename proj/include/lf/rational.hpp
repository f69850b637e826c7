#ifndef LF_RATIONAL_HPP
#define LF_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

#include "lf/errors.hpp"

namespace lf {

// Exact rational numbers. GMP's mpq_class already keeps values in canonical
// form (reduced, positive denominator); we only add the handful of helpers
// the rest of the library needs: floor/ceil to mpz, integrality tests, and
// the "a/b" string form used throughout configs and reports.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// mpq_class(num, den) does not canonicalize; every ratio in the library is
// built through this helper so that exact comparisons behave.
template <typename N, typename D>
inline Rat ratq(const N& num, const D& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int floor_int(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Int ceil_int(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline long to_long(const Int& z) {
    if (!z.fits_slong_p()) throw InvalidArgument("integer does not fit in a machine word");
    return z.get_si();
}

// Serialized form: always "num/den", including "x/1", so reports never
// contain bare integers that could be mistaken for floats downstream.
inline std::string rat_str(const Rat& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rat parse_rat(const std::string& s) {
    Rat q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw ConfigError("bad rational literal '" + s + "'");
    if (q.get_den() == 0) throw ConfigError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

} // namespace lf

#endif
