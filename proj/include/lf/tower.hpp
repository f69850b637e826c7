#ifndef LF_TOWER_HPP
#define LF_TOWER_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lf/fq.hpp"
#include "lf/rational.hpp"
#include "lf/unram.hpp"

namespace lf {

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

// Complete discrete valuation field in normal form: base (Q_q or F_q((t)))
// followed by one unramified step and one Eisenstein step.
struct BaseSpec {
    Kind kind = Kind::mixed;
    long p = 2;
    int r = 1;                    // residue degree of the base over F_p
    std::vector<uint32_t> respoly; // monic over F_p, degree r; empty -> default
    int precision = 16;           // working precision in base digits
};

// Field element: pi^z * sum_{i<e} c_i pi^i with c_i in the unramified
// coefficient ring, each c_i meaningful mod base^np, and abs precision ap
// in v_T units (digits at positions >= ap are unknown).
struct Element {
    TowerPtr T;
    int z = 0;
    int np = 0;
    long ap = 0;
    std::vector<UnramElt> c;
};

// Class of an element in O_E / a_{E/K}^m: the canonical digit string below
// v_K = m. Fixed length, leading zeros kept.
struct TruncatedClass {
    Rat m;
    std::vector<FqElt> digits; // v_T positions 0 .. ceil(m*e)-1
    bool operator==(const TruncatedClass& o) const { return digits == o.digits && m == o.m; }
};

class FieldTower : public std::enable_shared_from_this<FieldTower> {
public:
    // Identity tower over the base.
    static TowerPtr make(const BaseSpec& base);
    // Unramified step of degree fstep; respoly is monic of degree fstep over
    // F_q (entries are elements of the base residue field); empty -> default.
    TowerPtr extend_unramified(int fstep, const std::vector<FqElt>& respoly = {}) const;
    // Eisenstein step; coeffs are the non-leading coefficients a_0..a_{e-1}
    // as elements of *this (which must have e == 1).
    TowerPtr extend_eisenstein(const std::vector<Element>& coeffs) const;

    const BaseSpec& base() const { return base_; }
    Kind kind() const { return base_.kind; }
    long p() const { return base_.p; }
    int e() const { return e_; }
    int f() const { return f_; }                      // unramified step degree
    int abs_f() const { return base_.r * f_; }        // residue degree over F_p
    int degree_over_base() const { return e_ * f_; }
    int nmax() const { return nmax_; }
    const FqFieldPtr& residue_field() const { return FQ_; }
    const FqFieldPtr& base_residue_field() const { return Fqbase_; }
    const ResidueCodec& codec() const { return *codec_; }
    const UnramRing& coeff_ring() const { return R_; }
    const UnramRing& base_ring() const { return Rb_; }
    const std::vector<UnramElt>& eis_coeffs() const { return eis_; } // a_0..a_{e-1}
    bool same_base(const FieldTower& o) const;

    // ---- element constructors ----
    Element zero() const;
    Element one() const;
    Element from_int(const Int& v) const;
    Element uniformizer() const;
    Element from_unram(const UnramElt& u, int pipow = 0) const;
    Element from_digits(int start, const std::vector<FqElt>& digits) const;
    Element with_precision(const Element& x, long ap) const;
    // declare the stored representative exact (absolute precision = full
    // representation capacity); used by self-correcting iterations that
    // re-certify accuracy afterwards
    Element as_exact_representative(const Element& x) const;

    // ---- arithmetic ----
    Element add(const Element& x, const Element& y) const;
    Element sub(const Element& x, const Element& y) const;
    Element neg(const Element& x) const;
    Element mul(const Element& x, const Element& y) const;
    Element inv(const Element& x) const;
    Element div(const Element& x, const Element& y) const;
    Element pow(const Element& x, long n) const;
    Element shift_pi(const Element& x, int k) const; // x * pi^k, exact

    // ---- valuations ----
    // valuation in v_T units from the representation; nullopt if the
    // representation is zero at its precision
    std::optional<long> val_rep(const Element& x) const;
    long valuation_vt(const Element& x) const; // throws IndistinguishableFromZero
    Rat valuation(const Element& x) const;     // base-normalized (v_K)
    Rat valuation_in(const Element& x, const FieldTower& other) const;
    bool is_zero_at_precision(const Element& x) const;
    long known_precision(const Element& x) const; // min(ap, rep limit)

    // ---- digits / residue ----
    // canonical Teichmuller digit expansion at v_T positions [lo, hi)
    std::vector<FqElt> pi_digits(const Element& x, long lo, long hi) const;
    // largest hi the block extractor can certainly deliver for this element
    long extractable_digit_bound(const Element& x, long lo) const;
    FqElt residue(const Element& x) const; // digit at 0; NegativeValuation if v<0
    FqElt frobenius_residue(const FqElt& d) const; // q-power map on F_Q
    TruncatedClass reduce_mod(const Element& x, const Rat& m) const;
    std::string to_string(const Element& x) const;

    bool eq_at(const Element& x, const Element& y, long vt_prec) const;

    // map an element of a smaller tower into this one; legal moves are
    // base -> tower and unramified enlargement of the same Eisenstein step
    Element embed_from(const Element& x) const;

    // fold the shift into the coefficient vector (z = 0); throws
    // NegativeValuation on non-integral input; returns the vector and its
    // coefficient precision
    std::pair<std::vector<UnramElt>, int> integral_coeffs(const Element& x) const;
    const std::vector<FqElt>& unram_respoly() const { return unram_respoly_; }
    TowerPtr unramified_subfield_tower() const;

    std::string describe() const;

private:
    FieldTower() = default;
    void init_unram(const BaseSpec& b, int fstep, const std::vector<FqElt>& respoly);
    void init_eisenstein(const FieldTower& ur, const std::vector<Element>& coeffs);
    std::vector<UnramElt> mul_coeffs(const std::vector<UnramElt>& a,
                                     const std::vector<UnramElt>& b, int n) const;
    std::vector<UnramElt> pi_shift_coeffs(const std::vector<UnramElt>& a, int k, int n) const;
    // divide a coefficient vector of valuation >= w by pi^w; returns the new
    // coefficient precision
    std::pair<std::vector<UnramElt>, int> pi_div_coeffs(std::vector<UnramElt> a, long w,
                                                        int n) const;
    Element normalize_shift(const Element& x) const;
    Element normalized(int z, std::vector<UnramElt> c, int np, long ap) const;
    const UnramElt& teich_cached(const FqElt& d) const;

    BaseSpec base_;
    int f_ = 1;
    int e_ = 1;
    int nmax_ = 1;
    std::vector<FqElt> unram_respoly_;
    FqFieldPtr Fqbase_, FQ_;
    FqEmbed res_embed_;       // F_q -> F_Q
    std::shared_ptr<ResidueCodec> codec_;
    UnramRing R_, Rb_;
    RingEmbed base_embed_;    // Rb -> R
    std::vector<UnramElt> eis_;                 // a_0..a_{e-1}, exact at nmax
    std::vector<std::vector<UnramElt>> pired_;  // pi^(e+k) as coeff vectors
    std::vector<UnramElt> mu_, muinv_;          // pi^e = p*mu; muinv at nmax-1
    int nmu_ = 0;                               // precision of mu/muinv
    std::vector<UnramElt> teich_; // per residue index, at nmax
};

// Convenience wrappers matching the operation names used across modules.
Element operator+(const Element& x, const Element& y);
Element operator-(const Element& x, const Element& y);
Element operator-(const Element& x);
Element operator*(const Element& x, const Element& y);

// Build a tower in one call (identity tower when both optional parts are
// absent). respoly entries are residue digits of the base residue field;
// eis coefficients are elements of the unramified subfield.
TowerPtr make_tower(const BaseSpec& base, int unram_degree = 1,
                    const std::vector<FqElt>& unram_respoly = {},
                    const std::vector<Element>& eis = {});

// Same Eisenstein step read over the unramified extension of relative
// degree d: the tower for L' = L K' over the enlarged coefficient field.
TowerPtr unramified_base_change(const TowerPtr& T, int d);

} // namespace lf

#endif
