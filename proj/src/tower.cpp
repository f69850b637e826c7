#include "lf/tower.hpp"

#include <algorithm>
#include <sstream>

#include "lf/errors.hpp"

namespace lf {

namespace {
constexpr long kApInf = 1L << 40; // practical "exact" cap before rep limits apply
}

bool FieldTower::same_base(const FieldTower& o) const {
    return base_.kind == o.base_.kind && base_.p == o.base_.p && base_.r == o.base_.r;
}

void FieldTower::init_unram(const BaseSpec& b, int fstep, const std::vector<FqElt>& respoly) {
    base_ = b;
    f_ = fstep;
    e_ = 1;
    nmax_ = b.precision;
    if (nmax_ < 2) throw PrecisionTooSmall("working precision must be at least 2 base digits");

    std::vector<uint32_t> basemod = b.respoly;
    if (basemod.empty()) basemod = FqField::default_modulus(b.p, b.r);
    if (static_cast<int>(basemod.size()) != b.r + 1)
        throw InvalidArgument("base residue polynomial degree mismatch");
    Fqbase_ = FqField::make(b.p, basemod);

    unram_respoly_ = respoly;
    if (f_ == 1) {
        FQ_ = Fqbase_;
        res_embed_ = FqEmbed::identity(FQ_);
    } else {
        // validate the user's step polynomial over F_q, then flatten
        std::vector<FqElt> rp = respoly;
        if (rp.empty()) {
            // derive a default: flatten first, then use the minimal
            // polynomial machinery implicitly by root search below; for the
            // defining polynomial we need one explicitly, so search for the
            // first irreducible monic over F_q in index order.
            unsigned long total = 1;
            for (int i = 0; i < f_; ++i) total *= Fqbase_->q();
            for (unsigned long idx = 0;; ++idx) {
                if (idx >= total) throw NotIrreducible("no irreducible step polynomial found");
                std::vector<FqElt> cand;
                unsigned long v = idx;
                for (int i = 0; i < f_; ++i) {
                    cand.push_back(Fqbase_->from_index(v % Fqbase_->q()));
                    v /= Fqbase_->q();
                }
                cand.push_back(Fqbase_->one());
                if (Fqbase_->poly_irreducible(cand)) {
                    rp = cand;
                    break;
                }
            }
            unram_respoly_ = rp;
        }
        if (static_cast<int>(rp.size()) != f_ + 1)
            throw InvalidArgument("unramified step polynomial degree mismatch");
        if (!Fqbase_->poly_irreducible(rp))
            throw NotIrreducible("unramified step polynomial is reducible");
        FQ_ = FqField::make(b.p, FqField::default_modulus(b.p, b.r * f_));
        res_embed_ = FqEmbed::find(Fqbase_, FQ_);
    }

    Rb_ = UnramRing::make(b.kind, b.p, Fqbase_, nmax_);
    R_ = UnramRing::make(b.kind, b.p, FQ_, nmax_);
    base_embed_ = RingEmbed::make(Rb_, R_, res_embed_);

    // generator image of the step polynomial inside FQ, for the user codec:
    // smallest-index root of the embedded step polynomial
    FqElt w = FQ_->zero();
    if (f_ > 1) {
        FqField::Poly rp_in_FQ;
        for (const auto& cc : unram_respoly_) rp_in_FQ.push_back(res_embed_.apply(cc));
        auto roots = FQ_->poly_roots(rp_in_FQ);
        if (roots.empty()) throw NotIrreducible("step polynomial has no root in flat field");
        w = roots.front();
    }
    FqElt a_img = base_.r > 1 ? res_embed_.apply(Fqbase_->gen()) : FQ_->zero();
    codec_ = std::make_shared<ResidueCodec>(FQ_, base_.r, f_, a_img, w);

    // trivial Eisenstein data: pi = base uniformizer, mu = 1
    eis_.clear();
    pired_.clear();
    mu_ = {R_.one()};
    muinv_ = {R_.one()};
    nmu_ = nmax_;

    teich_.resize(FQ_->q());
    for (unsigned long i = 0; i < FQ_->q(); ++i)
        teich_[i] = R_.teich(FQ_->from_index(i), nmax_);
}

TowerPtr FieldTower::make(const BaseSpec& base) {
    auto t = std::shared_ptr<FieldTower>(new FieldTower());
    t->init_unram(base, 1, {});
    return t;
}

TowerPtr FieldTower::extend_unramified(int fstep, const std::vector<FqElt>& respoly) const {
    if (e_ != 1 || f_ != 1)
        throw InvalidArgument("unramified step must be added to the identity tower");
    if (fstep < 1) throw InvalidArgument("unramified degree must be >= 1");
    if (fstep == 1) return shared_from_this();
    auto t = std::shared_ptr<FieldTower>(new FieldTower());
    t->init_unram(base_, fstep, respoly);
    return t;
}

void FieldTower::init_eisenstein(const FieldTower& ur, const std::vector<Element>& coeffs) {
    base_ = ur.base_;
    f_ = ur.f_;
    nmax_ = ur.nmax_;
    unram_respoly_ = ur.unram_respoly_;
    Fqbase_ = ur.Fqbase_;
    FQ_ = ur.FQ_;
    res_embed_ = ur.res_embed_;
    codec_ = ur.codec_;
    R_ = ur.R_;
    Rb_ = ur.Rb_;
    base_embed_ = RingEmbed::make(Rb_, R_, res_embed_);
    teich_ = ur.teich_;

    e_ = static_cast<int>(coeffs.size());
    if (e_ < 1) throw InvalidArgument("Eisenstein step needs at least one coefficient");

    // fold each coefficient into a plain ring element and test the
    // Eisenstein conditions
    eis_.clear();
    for (const auto& x : coeffs) {
        if (x.T.get() != &ur) throw InvalidArgument("Eisenstein coefficients must live in the unramified subfield");
        auto v = ur.val_rep(x);
        long vx = v ? *v : ur.known_precision(x);
        if (vx < 0) throw NotEisenstein("coefficient with negative valuation");
        UnramElt u = x.c[0];
        if (x.z != 0) {
            if (x.z < 0) throw NotEisenstein("coefficient with negative valuation");
            if (base_.kind == Kind::mixed) {
                Int pk = 1;
                for (int i = 0; i < x.z; ++i) pk *= base_.p;
                u = R_.mul_int(u, pk, nmax_);
            } else {
                UnramElt t = R_.zero();
                t.tc.assign(static_cast<size_t>(x.z), FQ_->zero());
                t.tc.push_back(FQ_->one());
                u = R_.mul(u, t, nmax_);
            }
        }
        eis_.push_back(R_.reduce(u, nmax_));
    }
    for (size_t i = 1; i < eis_.size(); ++i)
        if (R_.val(eis_[i], nmax_) < 1)
            throw NotEisenstein("non-leading coefficient is a unit");
    if (R_.val(eis_[0], nmax_) != 1)
        throw NotEisenstein("constant term does not have valuation exactly 1");

    // pi^(e+k) reduction rows
    pired_.clear();
    std::vector<UnramElt> row(e_, R_.zero());
    for (int i = 0; i < e_; ++i) row[i] = R_.neg(eis_[i], nmax_);
    pired_.push_back(row);
    for (int k = 1; k < e_ - 1; ++k) {
        std::vector<UnramElt> nxt(e_, R_.zero());
        UnramElt lead = row[e_ - 1];
        for (int i = e_ - 1; i > 0; --i) nxt[i] = row[i - 1];
        nxt[0] = R_.zero();
        for (int i = 0; i < e_; ++i)
            nxt[i] = R_.add(nxt[i], R_.mul(lead, pired_[0][i], nmax_), nmax_);
        pired_.push_back(nxt);
        row = nxt;
    }

    // pi^e = p * mu with mu = -(a_0/p + ... + a_{e-1}/p pi^{e-1})
    nmu_ = nmax_ - 1;
    mu_.assign(e_, R_.zero());
    for (int i = 0; i < e_; ++i)
        mu_[i] = R_.neg(R_.div_base(eis_[i], 1, nmax_), nmu_);
    // invert the unit mu in the tower ring (local Newton)
    {
        FqElt r0 = R_.residue(mu_[0]);
        std::vector<UnramElt> x(e_, R_.zero());
        x[0] = R_.from_fq_lift(FQ_->inv(r0));
        int target = e_ * nmu_;
        int steps = 1;
        while ((1 << steps) < target + 1) ++steps;
        for (int it = 0; it <= steps; ++it) {
            auto prod = mul_coeffs(mu_, x, nmu_);
            prod[0] = R_.sub(R_.one(), prod[0], nmu_);
            for (int i = 1; i < e_; ++i) prod[i] = R_.neg(prod[i], nmu_);
            auto corr = mul_coeffs(x, prod, nmu_);
            for (int i = 0; i < e_; ++i) x[i] = R_.add(x[i], corr[i], nmu_);
        }
        muinv_ = x;
    }
}

TowerPtr FieldTower::extend_eisenstein(const std::vector<Element>& coeffs) const {
    if (e_ != 1) throw InvalidArgument("tower already has an Eisenstein step");
    auto t = std::shared_ptr<FieldTower>(new FieldTower());
    t->init_eisenstein(*this, coeffs);
    return t;
}

TowerPtr make_tower(const BaseSpec& base, int unram_degree,
                    const std::vector<FqElt>& unram_respoly, const std::vector<Element>& eis) {
    TowerPtr t = FieldTower::make(base);
    if (unram_degree > 1) t = t->extend_unramified(unram_degree, unram_respoly);
    if (!eis.empty()) {
        // coefficients may have been built against the pre-unramified tower
        // only when unram_degree == 1; the CLI builds them against t.
        t = t->extend_eisenstein(eis);
    }
    return t;
}

// ---------------- coefficient-vector helpers ----------------

std::vector<UnramElt> FieldTower::mul_coeffs(const std::vector<UnramElt>& a,
                                             const std::vector<UnramElt>& b, int n) const {
    std::vector<UnramElt> prod(2 * e_ - 1, R_.zero());
    for (int i = 0; i < e_; ++i) {
        if (R_.is_zero(a[i], n)) continue;
        for (int j = 0; j < e_; ++j)
            prod[i + j] = R_.add(prod[i + j], R_.mul(a[i], b[j], n), n);
    }
    for (int k = 2 * e_ - 2; k >= e_; --k) {
        if (R_.is_zero(prod[k], n)) continue;
        const auto& row = pired_[k - e_];
        for (int i = 0; i < e_; ++i)
            prod[i] = R_.add(prod[i], R_.mul(prod[k], row[i], n), n);
    }
    prod.resize(e_);
    return prod;
}

std::vector<UnramElt> FieldTower::pi_shift_coeffs(const std::vector<UnramElt>& a, int k,
                                                  int n) const {
    std::vector<UnramElt> cur = a;
    for (int step = 0; step < k; ++step) {
        std::vector<UnramElt> nxt(e_, R_.zero());
        UnramElt lead = cur[e_ - 1];
        for (int i = e_ - 1; i > 0; --i) nxt[i] = cur[i - 1];
        if (!R_.is_zero(lead, n) && e_ >= 1) {
            if (pired_.empty()) {
                // e == 1: pi acts as multiplication by the base uniformizer
                UnramElt pim = eis_.empty() ? R_.base_uniformizer() : R_.neg(eis_[0], n);
                nxt[0] = R_.mul(lead, pim, n);
            } else {
                for (int i = 0; i < e_; ++i)
                    nxt[i] = R_.add(nxt[i], R_.mul(lead, pired_[0][i], n), n);
            }
        }
        cur = nxt;
    }
    return cur;
}

std::pair<std::vector<UnramElt>, int> FieldTower::pi_div_coeffs(std::vector<UnramElt> a, long w,
                                                                int n) const {
    if (w == 0) return {a, n};
    const long aq = w / e_, b = w % e_;
    long pdivs = aq + (b ? 1 : 0);
    if (b) a = pi_shift_coeffs(a, static_cast<int>(e_ - b), n);
    std::vector<UnramElt> q(e_, R_.zero());
    int nq = static_cast<int>(std::min<long>(n - pdivs, nmu_));
    if (nq <= 0) throw PrecisionUnderflow("pi-division exhausts working precision");
    for (int i = 0; i < e_; ++i) q[i] = R_.div_base(a[i], static_cast<int>(pdivs), n);
    // multiply by muinv^pdivs
    for (long k = 0; k < pdivs; ++k) q = mul_coeffs(q, muinv_, nq);
    return {q, nq};
}

Element FieldTower::normalized(int z, std::vector<UnramElt> c, int np, long ap) const {
    Element x;
    x.T = shared_from_this();
    x.z = z;
    x.np = std::min(np, nmax_);
    for (auto& u : c) u = R_.reduce(u, x.np);
    x.c = std::move(c);
    x.ap = std::min(ap, static_cast<long>(z) + static_cast<long>(e_) * x.np);
    return x;
}

// ---------------- element constructors ----------------

Element FieldTower::zero() const {
    return normalized(0, std::vector<UnramElt>(e_, R_.zero()), nmax_, kApInf);
}

Element FieldTower::one() const {
    std::vector<UnramElt> c(e_, R_.zero());
    c[0] = R_.one();
    return normalized(0, std::move(c), nmax_, kApInf);
}

Element FieldTower::from_int(const Int& v) const {
    std::vector<UnramElt> c(e_, R_.zero());
    c[0] = R_.from_int(v, nmax_);
    return normalized(0, std::move(c), nmax_, kApInf);
}

Element FieldTower::uniformizer() const {
    if (e_ == 1) {
        std::vector<UnramElt> c = {eis_.empty() ? R_.base_uniformizer()
                                                : R_.neg(eis_[0], nmax_)};
        return normalized(0, std::move(c), nmax_, kApInf);
    }
    std::vector<UnramElt> c(e_, R_.zero());
    c[1] = R_.one();
    return normalized(0, std::move(c), nmax_, kApInf);
}

Element FieldTower::from_unram(const UnramElt& u, int pipow) const {
    std::vector<UnramElt> c(e_, R_.zero());
    c[0] = R_.reduce(u, nmax_);
    return normalized(pipow, std::move(c), nmax_, kApInf);
}

Element FieldTower::with_precision(const Element& x, long ap) const {
    Element y = x;
    y.ap = std::min(y.ap, ap);
    return y;
}

Element FieldTower::as_exact_representative(const Element& x) const {
    Element y = x;
    y.ap = static_cast<long>(y.z) + static_cast<long>(e_) * y.np;
    return y;
}

// ---------------- valuations ----------------

std::optional<long> FieldTower::val_rep(const Element& x) const {
    long best = -1;
    for (int i = 0; i < e_; ++i) {
        int vr = R_.val(x.c[i], x.np);
        if (vr >= x.np) continue;
        long v = static_cast<long>(e_) * vr + i;
        if (best < 0 || v < best) best = v;
    }
    if (best < 0) return std::nullopt;
    return x.z + best;
}

long FieldTower::known_precision(const Element& x) const {
    return std::min(x.ap, static_cast<long>(x.z) + static_cast<long>(e_) * x.np);
}

long FieldTower::valuation_vt(const Element& x) const {
    auto v = val_rep(x);
    if (!v || *v >= x.ap)
        throw IndistinguishableFromZero("element is zero at absolute precision " +
                                        std::to_string(known_precision(x)));
    return *v;
}

Rat FieldTower::valuation(const Element& x) const {
    return ratq(valuation_vt(x), e_);
}

Rat FieldTower::valuation_in(const Element& x, const FieldTower& other) const {
    if (!same_base(other)) throw InvalidArgument("valuation renormalization across different bases");
    return ratq(valuation_vt(x) * other.e_, e_);
}

bool FieldTower::is_zero_at_precision(const Element& x) const {
    auto v = val_rep(x);
    return !v || *v >= x.ap;
}

// ---------------- arithmetic ----------------

Element FieldTower::normalize_shift(const Element& x) const {
    // fold base-uniformizer content of the coefficients into the shift so
    // that aligning additions do not truncate the other operand; since
    // base = pi^e mu^{-1}, the coefficients pick up a power of mu^{-1}
    int k = x.np;
    for (int i = 0; i < e_; ++i) k = std::min(k, R_.val(x.c[i], x.np));
    if (k <= 0 || k >= x.np) return x;
    Element y = x;
    y.z = x.z + e_ * k;
    y.np = std::min(x.np - k, nmu_);
    for (int i = 0; i < e_; ++i) y.c[i] = R_.div_base(x.c[i], k, x.np);
    for (int j = 0; j < k; ++j) y.c = mul_coeffs(y.c, muinv_, y.np);
    return y;
}

Element FieldTower::add(const Element& x_in, const Element& y_in) const {
    if (x_in.T.get() != this || y_in.T.get() != this)
        throw InvalidArgument("operands belong to a different tower");
    Element x = normalize_shift(x_in);
    Element y = normalize_shift(y_in);
    int z = std::min(x.z, y.z);
    // representation capacity of the sum: the weaker operand decides; the
    // shifted coefficient vectors are computed at the derived precision so
    // that shifting up never truncates the other side
    long capx = static_cast<long>(x.z) + static_cast<long>(e_) * x.np;
    long capy = static_cast<long>(y.z) + static_cast<long>(e_) * y.np;
    long capr = std::min(capx, capy);
    int n = static_cast<int>(std::min<long>((capr - z) / e_, nmax_));
    if (n <= 0) {
        // no representable digits survive; return a zero at the precision cap
        Element zr = zero();
        zr.ap = std::min({x.ap, y.ap, capr});
        return zr;
    }
    int dx = x.z - z, dy = y.z - z;
    auto cx = dx ? pi_shift_coeffs(x.c, dx, n) : x.c;
    auto cy = dy ? pi_shift_coeffs(y.c, dy, n) : y.c;
    std::vector<UnramElt> c(e_, R_.zero());
    for (int i = 0; i < e_; ++i) c[i] = R_.add(cx[i], cy[i], n);
    return normalized(z, std::move(c), n, std::min(x.ap, y.ap));
}

Element FieldTower::sub(const Element& x, const Element& y) const { return add(x, neg(y)); }

Element FieldTower::neg(const Element& x) const {
    std::vector<UnramElt> c(e_, R_.zero());
    for (int i = 0; i < e_; ++i) c[i] = R_.neg(x.c[i], x.np);
    return normalized(x.z, std::move(c), x.np, x.ap);
}

Element FieldTower::mul(const Element& x_in, const Element& y_in) const {
    if (x_in.T.get() != this || y_in.T.get() != this)
        throw InvalidArgument("operands belong to a different tower");
    Element x = normalize_shift(x_in);
    Element y = normalize_shift(y_in);
    int n = std::min(x.np, y.np);
    auto c = mul_coeffs(x.c, y.c, n);
    auto vx = val_rep(x), vy = val_rep(y);
    long vx_low = vx ? *vx : x.ap;
    long vy_low = vy ? *vy : y.ap;
    long ap = std::min(x.ap + vy_low, y.ap + vx_low);
    return normalized(x.z + y.z, std::move(c), n, ap);
}

Element FieldTower::shift_pi(const Element& x, int k) const {
    Element y = x;
    y.z += k;
    y.ap += k;
    return y;
}

Element FieldTower::inv(const Element& x) const {
    std::optional<long> vo = val_rep(x);
    if (!vo || *vo >= x.ap)
        throw DivisionByIndistinguishableZero("inverse of an element indistinguishable from zero");
    long v = *vo;
    long w = v - x.z; // valuation of the coefficient part
    auto [u, nu] = pi_div_coeffs(x.c, w, x.np);
    // Newton inversion of the unit u
    FqElt r0 = R_.residue(u[0]);
    if (FQ_->is_zero(r0)) throw PrecisionUnderflow("unit extraction failed"); // defensive
    std::vector<UnramElt> xx(e_, R_.zero());
    xx[0] = R_.from_fq_lift(FQ_->inv(r0));
    int target = e_ * nu;
    int steps = 1;
    while ((1 << steps) < target + 1) ++steps;
    for (int it = 0; it <= steps; ++it) {
        auto prod = mul_coeffs(u, xx, nu);
        prod[0] = R_.sub(R_.one(), prod[0], nu);
        for (int i = 1; i < e_; ++i) prod[i] = R_.neg(prod[i], nu);
        auto corr = mul_coeffs(xx, prod, nu);
        for (int i = 0; i < e_; ++i) xx[i] = R_.add(xx[i], corr[i], nu);
    }
    long ap = x.ap - 2 * v;
    return normalized(static_cast<int>(-v), std::move(xx), nu, ap);
}

Element FieldTower::div(const Element& x, const Element& y) const { return mul(x, inv(y)); }

Element FieldTower::pow(const Element& x, long n) const {
    if (n < 0) return inv(pow(x, -n));
    Element r = one(), b = x;
    long m = n;
    while (m) {
        if (m & 1) r = mul(r, b);
        b = mul(b, b);
        m >>= 1;
    }
    return r;
}

// ---------------- digits ----------------

const UnramElt& FieldTower::teich_cached(const FqElt& d) const { return teich_[FQ_->to_index(d)]; }

long FieldTower::extractable_digit_bound(const Element& x_in, long lo) const {
    Element x = normalize_shift(x_in);
    long n = x.np;
    if (x.z < lo) {
        long w = lo - x.z;
        n -= w / e_ + (w % e_ ? 1 : 0);
    }
    return lo + static_cast<long>(e_) * (n - 2);
}

std::vector<FqElt> FieldTower::pi_digits(const Element& x_in, long lo, long hi) const {
    if (hi <= lo) return {};
    if (hi > known_precision(x_in))
        throw PrecisionUnderflow("digit window beyond absolute precision");
    Element x = normalize_shift(x_in);
    auto vo = val_rep(x);
    long v = vo ? *vo : known_precision(x);
    if (v < lo) throw NegativeValuation("element has digits below the requested window");

    std::vector<FqElt> out(static_cast<size_t>(hi - lo), FQ_->zero());
    if (!vo) return out;

    // normalize to an integral coefficient vector starting at position lo
    std::vector<UnramElt> cur = x.c;
    int n = x.np;
    if (x.z > lo) {
        cur = pi_shift_coeffs(cur, static_cast<int>(x.z - lo), n);
    } else if (x.z < lo) {
        auto [q, nq] = pi_div_coeffs(cur, lo - x.z, n);
        cur = q;
        n = nq;
    }
    // block extraction: digits d_i = residue(cur[i]); then cur <- (cur - B)/p * muinv
    long count = hi - lo;
    for (long pos = 0; pos < count;) {
        for (int i = 0; i < e_ && pos < count; ++i, ++pos) {
            FqElt d = R_.residue(cur[i]);
            out[static_cast<size_t>(pos)] = d;
            if (!FQ_->is_zero(d)) cur[i] = R_.sub(cur[i], teich_cached(d), n);
        }
        if (pos >= count) break;
        if (n <= 1) throw PrecisionUnderflow("digit extraction exhausts precision");
        for (int i = 0; i < e_; ++i) cur[i] = R_.div_base(cur[i], 1, n);
        n -= 1;
        n = std::min(n, nmu_);
        if (e_ > 1 || !eis_.empty()) cur = mul_coeffs(cur, muinv_, n);
    }
    return out;
}

Element FieldTower::from_digits(int start, const std::vector<FqElt>& digits) const {
    // acc = sum teich(d_k) pi^k built by pi^e-blocks: acc <- acc*(p mu) + block
    std::vector<UnramElt> acc(e_, R_.zero());
    long nblocks = (static_cast<long>(digits.size()) + e_ - 1) / e_;
    std::vector<UnramElt> pimu(e_, R_.zero()); // pi^e as a coefficient vector
    for (int i = 0; i < e_; ++i)
        pimu[i] = eis_.empty() && e_ == 1 ? (i == 0 ? R_.base_uniformizer() : R_.zero())
                                          : R_.neg(eis_[i], nmax_);
    for (long b = nblocks - 1; b >= 0; --b) {
        acc = mul_coeffs(acc, pimu, nmax_);
        for (int i = 0; i < e_; ++i) {
            size_t k = static_cast<size_t>(b) * e_ + i;
            if (k < digits.size() && !FQ_->is_zero(digits[k]))
                acc[i] = R_.add(acc[i], teich_cached(digits[k]), nmax_);
        }
    }
    return normalized(start, std::move(acc), nmax_, kApInf);
}

FqElt FieldTower::residue(const Element& x) const {
    auto vo = val_rep(x);
    if (vo && *vo < 0) throw NegativeValuation("residue of a non-integral element");
    if (!vo || *vo > 0) return FQ_->zero();
    return pi_digits(x, 0, 1)[0];
}

FqElt FieldTower::frobenius_residue(const FqElt& d) const {
    return FQ_->frobenius(d, static_cast<unsigned long>(Fqbase_->q()));
}

TruncatedClass FieldTower::reduce_mod(const Element& x, const Rat& m) const {
    if (m <= 0) throw InvalidArgument("reduction level must be positive");
    auto vo = val_rep(x);
    if (vo && *vo < 0) throw NegativeValuation("reduce_mod of a non-integral element");
    Rat hi_r = m * e_;
    long hi = to_long(ceil_int(hi_r));
    TruncatedClass cls;
    cls.m = m;
    if (hi > known_precision(x))
        throw PrecisionUnderflow("reduction level beyond absolute precision");
    cls.digits = pi_digits(x, 0, hi);
    return cls;
}

bool FieldTower::eq_at(const Element& x, const Element& y, long vt_prec) const {
    Element d = sub(x, y);
    auto vo = val_rep(d);
    if (vo && *vo < vt_prec) return false;
    if (known_precision(d) < vt_prec)
        throw PrecisionUnderflow("comparison beyond shared precision");
    return true;
}

std::string FieldTower::to_string(const Element& x) const {
    auto vo = val_rep(x);
    std::ostringstream os;
    if (!vo) {
        os << "O(pi^" << known_precision(x) << ")";
        return os.str();
    }
    long v = *vo;
    long hi = known_precision(x);
    auto d = pi_digits(x, v, hi);
    os << "pi^" << v << "*[";
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) os << ",";
        os << codec_->encode(d[i]);
    }
    os << "] + O(pi^" << hi << ")";
    return os.str();
}

Element FieldTower::embed_from(const Element& x) const {
    const FieldTower& S = *x.T;
    if (&S == this) return x;
    if (!same_base(S)) throw InvalidArgument("embedding across different bases");
    if (S.e_ == 1) {
        // base or unramified subfield into this tower
        if (f_ % S.f_ != 0) throw InvalidArgument("no unramified embedding");
        RingEmbed emb = (S.f_ == 1) ? base_embed_
                                    : RingEmbed::make(S.R_, R_, FqEmbed::find(S.FQ_, FQ_));
        UnramElt u = emb.apply(x.c[0], std::min(x.np, nmax_));
        // x = p^z * u; p = pi^e * mu^{-1}
        std::vector<UnramElt> c(e_, R_.zero());
        c[0] = u;
        int n = std::min(x.np, nmax_);
        long zshift = static_cast<long>(x.z) * e_;
        if (x.z != 0) {
            std::vector<UnramElt> fac = x.z > 0 ? muinv_ : mu_;
            int cnt = std::abs(x.z);
            int nn = std::min(n, nmu_);
            std::vector<UnramElt> cc(e_, R_.zero());
            cc[0] = u;
            for (int k = 0; k < cnt; ++k) cc = mul_coeffs(cc, fac, nn);
            long ap = (x.ap - x.z) * e_ + zshift; // relative precision scales by e
            return normalized(static_cast<int>(zshift), std::move(cc), nn, ap);
        }
        long ap = (x.ap - x.z) * e_ + zshift;
        return normalized(static_cast<int>(zshift), std::move(c), n, ap);
    }
    // same Eisenstein step over an enlarged unramified part: coefficientwise
    if (S.e_ != e_ || f_ % S.f_ != 0)
        throw InvalidArgument("no canonical embedding between these towers");
    RingEmbed emb = RingEmbed::make(S.R_, R_, FqEmbed::find(S.FQ_, FQ_));
    for (int i = 0; i < e_; ++i)
        if (!R_.eq(emb.apply(S.eis_[i], std::min(S.nmax_, nmax_)), eis_[i],
                   std::min(S.nmax_, nmax_)))
            throw InvalidArgument("towers do not share an Eisenstein step");
    std::vector<UnramElt> c(e_, R_.zero());
    int n = std::min(x.np, nmax_);
    for (int i = 0; i < e_; ++i) c[i] = emb.apply(x.c[i], n);
    return normalized(x.z, std::move(c), n, x.ap);
}

std::pair<std::vector<UnramElt>, int> FieldTower::integral_coeffs(const Element& x) const {
    if (x.z == 0) return {x.c, x.np};
    if (x.z > 0) return {pi_shift_coeffs(x.c, x.z, x.np), x.np};
    auto vo = val_rep(x);
    if (vo && *vo < 0) throw NegativeValuation("element is not integral");
    return pi_div_coeffs(x.c, -static_cast<long>(x.z), x.np);
}

TowerPtr FieldTower::unramified_subfield_tower() const {
    TowerPtr b = FieldTower::make(base_);
    if (f_ == 1) return b;
    return b->extend_unramified(f_, unram_respoly_);
}

std::string FieldTower::describe() const {
    std::ostringstream os;
    os << (base_.kind == Kind::mixed ? "Q" : "F") << base_.p;
    if (base_.r > 1) os << "^" << base_.r;
    if (base_.kind == Kind::equal) os << "((t))";
    if (f_ > 1) os << " ur" << f_;
    if (e_ > 1) os << " eis" << e_;
    return os.str();
}

TowerPtr unramified_base_change(const TowerPtr& T, int d) {
    if (d < 1) throw InvalidArgument("base change degree must be >= 1");
    if (d == 1) return T;
    TowerPtr base = FieldTower::make(T->base());
    TowerPtr ur = base->extend_unramified(T->f() * d);
    if (T->e() == 1) return ur;
    // read the same Eisenstein coefficients over the enlarged coefficient ring
    RingEmbed emb = RingEmbed::make(T->coeff_ring(), ur->coeff_ring(),
                                    FqEmbed::find(T->residue_field(), ur->residue_field()));
    std::vector<Element> coeffs;
    coeffs.reserve(T->e());
    for (const auto& a : T->eis_coeffs())
        coeffs.push_back(ur->from_unram(emb.apply(a, ur->nmax()), 0));
    return ur->extend_eisenstein(coeffs);
}

Element operator+(const Element& x, const Element& y) { return x.T->add(x, y); }
Element operator-(const Element& x, const Element& y) { return x.T->sub(x, y); }
Element operator-(const Element& x) { return x.T->neg(x); }
Element operator*(const Element& x, const Element& y) { return x.T->mul(x, y); }

} // namespace lf
