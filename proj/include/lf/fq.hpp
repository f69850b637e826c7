#ifndef LF_FQ_HPP
#define LF_FQ_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lf/errors.hpp"

namespace lf {

class FqField;
using FqFieldPtr = std::shared_ptr<const FqField>;

// Element of a finite field F_{p^s}: coefficient vector of length s over the
// prime field, low degree first. Elements do not carry a field pointer; all
// arithmetic goes through the owning FqField.
struct FqElt {
    std::vector<uint32_t> c;

    bool operator==(const FqElt& o) const { return c == o.c; }
};

// F_{p^s} presented as F_p[x]/(h) for a monic irreducible h of degree s.
// Residue fields of towers are always flattened to this single-level form;
// user-facing two-step presentations are translated on construction.
class FqField : public std::enable_shared_from_this<FqField> {
public:
    static FqFieldPtr make(long p, std::vector<uint32_t> modulus);
    static FqFieldPtr prime_field(long p);

    // Deterministic irreducible of degree n over F_p: the table entry for
    // F_4, F_8, F_9, F_27 when applicable, otherwise the first monic
    // irreducible in index order.
    static std::vector<uint32_t> default_modulus(long p, int n);

    long p() const { return p_; }
    int degree() const { return s_; }
    unsigned long q() const { return q_; } // p^s
    const std::vector<uint32_t>& modulus() const { return mod_; }

    FqElt zero() const;
    FqElt one() const;
    FqElt from_int(long v) const;          // image of an integer
    FqElt gen() const;                     // class of x

    // index <-> element: index = sum c_i p^i, the canonical enumeration
    // order used by every deterministic search in the library.
    unsigned long to_index(const FqElt& a) const;
    FqElt from_index(unsigned long idx) const;

    bool is_zero(const FqElt& a) const;
    FqElt add(const FqElt& a, const FqElt& b) const;
    FqElt sub(const FqElt& a, const FqElt& b) const;
    FqElt neg(const FqElt& a) const;
    FqElt mul(const FqElt& a, const FqElt& b) const;
    FqElt inv(const FqElt& a) const;
    FqElt pow(const FqElt& a, unsigned long n) const;
    FqElt frobenius(const FqElt& a, unsigned long qbase) const; // a^qbase

    std::string to_string(const FqElt& a) const;

    // Polynomials over this field, dense low->high.
    using Poly = std::vector<FqElt>;
    Poly poly_trim(Poly f) const;
    Poly poly_mul(const Poly& f, const Poly& g) const;
    Poly poly_mod(Poly f, const Poly& m) const;
    Poly poly_gcd(Poly f, Poly g) const;
    Poly poly_xq_pow(unsigned long e, const Poly& m) const; // x^(p^e) mod m
    FqElt poly_eval(const Poly& f, const FqElt& x) const;
    bool poly_irreducible(const Poly& f) const;

    // All roots of f in this field, in index order.
    std::vector<FqElt> poly_roots(const Poly& f) const;

private:
    FqField(long p, std::vector<uint32_t> modulus);

    long p_;
    int s_;
    unsigned long q_;
    std::vector<uint32_t> mod_;
};

// Field homomorphism F_{p^a} -> F_{p^b} (a | b), determined by the image of
// the source generator: the root of the source modulus in the target with
// the smallest index. Deterministic by construction.
struct FqEmbed {
    FqFieldPtr src, dst;
    std::vector<FqElt> gen_pows; // images of x^0..x^{a-1}

    static FqEmbed identity(const FqFieldPtr& f);
    static FqEmbed find(const FqFieldPtr& src, const FqFieldPtr& dst);
    FqElt apply(const FqElt& a) const;
};

// Encoding of residue-field elements as integers for configs and reports.
// The tower residue field F_{q^f} is presented to users as F_q[w]/(g1) with
// F_q = F_p[a]/(g0); an element sum_{i<f} (sum_{j<r} c_ij a^j) w^i encodes
// as the integer sum c_ij p^(j + r i). Internally everything is flattened,
// so the codec carries the images of a and w in the flat field.
class ResidueCodec {
public:
    ResidueCodec(FqFieldPtr flat, int r, int f, FqElt a_img, FqElt w_img);

    FqElt decode(unsigned long code) const;
    unsigned long encode(const FqElt& x) const;
    unsigned long size() const { return flat_->q(); }
    const FqFieldPtr& field() const { return flat_; }

private:
    FqFieldPtr flat_;
    int r_, f_;
    std::vector<FqElt> basis_; // a^j w^i images, index j + r*i
};

} // namespace lf

#endif
