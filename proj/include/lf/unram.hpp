#ifndef LF_UNRAM_HPP
#define LF_UNRAM_HPP

#include <string>
#include <vector>

#include "lf/fq.hpp"
#include "lf/rational.hpp"

namespace lf {

enum class Kind { mixed, equal };

// Element of a truncated unramified coefficient ring.
//   mixed: zc holds coefficients of y^j in (Z/p^nmax)[y]/(H), j < s.
//   equal: tc holds t-adic digits in F_Q[t]/(t^nmax), low first (may be
//          shorter than nmax; missing digits are zero).
// Elements carry no precision of their own; the owning tower Element tracks
// how many base digits are meaningful and passes that to every ring op.
struct UnramElt {
    std::vector<Int> zc;
    std::vector<FqElt> tc;
};

// O_K0 / pi_0^n for the unramified part K0 of a tower: W-style quotient
// (Z/p^n)[y]/(H) in mixed characteristic, F_Q[t]/(t^n) in equal
// characteristic. H is the monic lift of the residue modulus with
// coefficients in {0..p-1}; unramified extensions are unique, so this fixes
// the ring up to canonical isomorphism.
class UnramRing {
public:
    static UnramRing make(Kind kind, long p, FqFieldPtr F, int nmax);

    Kind kind() const { return kind_; }
    long p() const { return p_; }
    const FqFieldPtr& F() const { return F_; }
    int nmax() const { return nmax_; }
    int s() const { return s_; }
    const Int& base_pow(int k) const { return pn_[k]; } // p^k (mixed only)

    UnramElt zero() const;
    UnramElt one() const;
    UnramElt base_uniformizer() const; // p in mixed characteristic, t in equal
    UnramElt from_int(const Int& v, int n) const;
    UnramElt from_fq_lift(const FqElt& d) const;
    UnramElt teich(const FqElt& d, int n) const;

    UnramElt add(const UnramElt& a, const UnramElt& b, int n) const;
    UnramElt sub(const UnramElt& a, const UnramElt& b, int n) const;
    UnramElt neg(const UnramElt& a, int n) const;
    UnramElt mul(const UnramElt& a, const UnramElt& b, int n) const;
    UnramElt mul_int(const UnramElt& a, const Int& v, int n) const;
    UnramElt pow(const UnramElt& a, unsigned long e, int n) const;

    // base-uniformizer valuation, capped at n (n means "zero at this
    // precision")
    int val(const UnramElt& a, int n) const;
    bool is_zero(const UnramElt& a, int n) const { return val(a, n) >= n; }
    bool eq(const UnramElt& a, const UnramElt& b, int n) const;

    // exact division by p^k / t^k; the quotient is only meaningful mod
    // base^(n-k), which the caller accounts for
    UnramElt div_base(const UnramElt& a, int k, int n) const;
    UnramElt inv(const UnramElt& a, int n) const; // units only

    FqElt residue(const UnramElt& a) const;
    std::vector<FqElt> base_digits(const UnramElt& a, int n) const;
    UnramElt from_base_digits(const std::vector<FqElt>& d, int n) const;

    UnramElt reduce(const UnramElt& a, int n) const; // canonical rep mod base^n
    std::string to_string(const UnramElt& a, int n) const;

private:
    Kind kind_;
    long p_ = 0;
    FqFieldPtr F_;
    int nmax_ = 0;
    int s_ = 1;
    std::vector<Int> pn_;               // p^0..p^nmax
    std::vector<Int> H_;                // monic modulus lift (mixed)
    std::vector<std::vector<Int>> red_; // y^(s+k) mod H for k < s-1 (mixed)
};

// Ring homomorphism between unramified coefficient rings over the same base
// uniformizer, lifting a residue-field embedding. In mixed characteristic
// the source generator's image is Hensel-lifted once at construction.
struct RingEmbed {
    const UnramRing* src = nullptr;
    const UnramRing* dst = nullptr;
    FqEmbed res_embed;
    std::vector<UnramElt> gen_pows; // mixed: powers of the lifted root

    static RingEmbed make(const UnramRing& src, const UnramRing& dst, const FqEmbed& fe);
    UnramElt apply(const UnramElt& a, int n) const;
};

} // namespace lf

#endif
