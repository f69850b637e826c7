#include "lf/fq.hpp"

#include <algorithm>

#include "lf/rational.hpp"

namespace lf {

namespace {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

unsigned long upow(long b, int e) {
    unsigned long r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<unsigned long>(b);
    return r;
}

} // namespace

FqField::FqField(long p, std::vector<uint32_t> modulus) : p_(p), mod_(std::move(modulus)) {
    s_ = static_cast<int>(mod_.size()) - 1;
    q_ = upow(p_, s_);
}

FqFieldPtr FqField::make(long p, std::vector<uint32_t> modulus) {
    if (!is_prime(p)) throw InvalidArgument("characteristic must be prime");
    if (modulus.size() < 2 || modulus.back() != 1)
        throw InvalidArgument("modulus must be monic of degree >= 1");
    for (auto& c : modulus) c %= static_cast<uint32_t>(p);
    modulus.back() = 1;
    FqFieldPtr f(new FqField(p, modulus));
    if (f->degree() > 1) {
        Poly m;
        for (uint32_t c : modulus) m.push_back(FqField::prime_field(p)->from_int(c));
        if (!FqField::prime_field(p)->poly_irreducible(m))
            throw NotIrreducible("defining polynomial is reducible over the prime field");
    }
    return f;
}

FqFieldPtr FqField::prime_field(long p) {
    if (!is_prime(p)) throw InvalidArgument("characteristic must be prime");
    // x - 0: degree-1 modulus, elements are plain residues.
    return FqFieldPtr(new FqField(p, {0, 1}));
}

FqElt FqField::zero() const { return FqElt{std::vector<uint32_t>(s_, 0)}; }

FqElt FqField::one() const {
    FqElt a = zero();
    a.c[0] = 1;
    return a;
}

FqElt FqField::from_int(long v) const {
    long m = ((v % p_) + p_) % p_;
    FqElt a = zero();
    a.c[0] = static_cast<uint32_t>(m);
    return a;
}

FqElt FqField::gen() const {
    FqElt a = zero();
    if (s_ == 1) {
        // generator of F_p is just 0 = class of x; callers should not rely
        // on it for prime fields, but keep it well-defined.
        return a;
    }
    a.c[1] = 1;
    return a;
}

unsigned long FqField::to_index(const FqElt& a) const {
    unsigned long idx = 0, mult = 1;
    for (int i = 0; i < s_; ++i) {
        idx += a.c[i] * mult;
        mult *= static_cast<unsigned long>(p_);
    }
    return idx;
}

FqElt FqField::from_index(unsigned long idx) const {
    FqElt a = zero();
    for (int i = 0; i < s_; ++i) {
        a.c[i] = static_cast<uint32_t>(idx % p_);
        idx /= p_;
    }
    return a;
}

bool FqField::is_zero(const FqElt& a) const {
    return std::all_of(a.c.begin(), a.c.end(), [](uint32_t v) { return v == 0; });
}

FqElt FqField::add(const FqElt& a, const FqElt& b) const {
    FqElt r = zero();
    for (int i = 0; i < s_; ++i) r.c[i] = (a.c[i] + b.c[i]) % p_;
    return r;
}

FqElt FqField::sub(const FqElt& a, const FqElt& b) const {
    FqElt r = zero();
    for (int i = 0; i < s_; ++i) r.c[i] = (a.c[i] + p_ - b.c[i]) % p_;
    return r;
}

FqElt FqField::neg(const FqElt& a) const { return sub(zero(), a); }

FqElt FqField::mul(const FqElt& a, const FqElt& b) const {
    std::vector<uint64_t> prod(2 * s_ - 1, 0);
    for (int i = 0; i < s_; ++i) {
        if (!a.c[i]) continue;
        for (int j = 0; j < s_; ++j) prod[i + j] += static_cast<uint64_t>(a.c[i]) * b.c[j];
    }
    // reduce by the monic modulus
    for (int k = 2 * s_ - 2; k >= s_; --k) {
        uint64_t lead = prod[k] % p_;
        if (!lead) continue;
        for (int i = 0; i < s_; ++i)
            prod[k - s_ + i] += static_cast<uint64_t>(lead) * (p_ - mod_[i]);
        prod[k] = 0;
    }
    FqElt r = zero();
    for (int i = 0; i < s_; ++i) r.c[i] = static_cast<uint32_t>(prod[i] % p_);
    return r;
}

FqElt FqField::pow(const FqElt& a, unsigned long n) const {
    FqElt r = one(), b = a;
    while (n) {
        if (n & 1) r = mul(r, b);
        b = mul(b, b);
        n >>= 1;
    }
    return r;
}

FqElt FqField::inv(const FqElt& a) const {
    if (is_zero(a)) throw InvalidArgument("inverse of zero in residue field");
    return pow(a, q_ - 2);
}

FqElt FqField::frobenius(const FqElt& a, unsigned long qbase) const { return pow(a, qbase); }

std::string FqField::to_string(const FqElt& a) const { return std::to_string(to_index(a)); }

FqField::Poly FqField::poly_trim(Poly f) const {
    while (!f.empty() && is_zero(f.back())) f.pop_back();
    return f;
}

FqField::Poly FqField::poly_mul(const Poly& f, const Poly& g) const {
    if (f.empty() || g.empty()) return {};
    Poly r(f.size() + g.size() - 1, zero());
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) r[i + j] = add(r[i + j], mul(f[i], g[j]));
    return poly_trim(r);
}

FqField::Poly FqField::poly_mod(Poly f, const Poly& m) const {
    f = poly_trim(f);
    const size_t dm = m.size() - 1;
    FqElt lead_inv = inv(m.back());
    while (f.size() > dm) {
        FqElt t = mul(f.back(), lead_inv);
        size_t off = f.size() - 1 - dm;
        for (size_t i = 0; i < m.size(); ++i) f[off + i] = sub(f[off + i], mul(t, m[i]));
        f = poly_trim(f);
    }
    return f;
}

FqField::Poly FqField::poly_gcd(Poly f, Poly g) const {
    f = poly_trim(f);
    g = poly_trim(g);
    while (!g.empty()) {
        Poly r = poly_mod(f, g);
        f = g;
        g = r;
    }
    if (!f.empty()) {
        FqElt li = inv(f.back());
        for (auto& c : f) c = mul(c, li);
    }
    return f;
}

FqField::Poly FqField::poly_xq_pow(unsigned long e, const Poly& m) const {
    // x^(p^e) mod m by repeated p-th powering
    Poly x = poly_mod({zero(), one()}, m);
    Poly r = x;
    for (unsigned long k = 0; k < e; ++k) {
        // r = r^p mod m, square-and-multiply on exponent p
        Poly acc = {one()};
        Poly base = r;
        unsigned long n = static_cast<unsigned long>(p_);
        while (n) {
            if (n & 1) acc = poly_mod(poly_mul(acc, base), m);
            base = poly_mod(poly_mul(base, base), m);
            n >>= 1;
        }
        r = acc;
    }
    return r;
}

FqElt FqField::poly_eval(const Poly& f, const FqElt& x) const {
    FqElt r = zero();
    for (auto it = f.rbegin(); it != f.rend(); ++it) r = add(mul(r, x), *it);
    return r;
}

bool FqField::poly_irreducible(const Poly& f_in) const {
    Poly f = poly_trim(f_in);
    if (f.size() < 2) return false;
    const int n = static_cast<int>(f.size()) - 1;
    if (n == 1) return true;
    // f irreducible over F_q (q = p^s) iff x^(q^n) = x mod f and for every
    // prime divisor l of n, gcd(x^(q^(n/l)) - x, f) = 1.
    Poly x = poly_mod({zero(), one()}, f);
    auto xq_pow_steps = [&](int steps) { return poly_xq_pow(static_cast<unsigned long>(s_) * steps, f); };
    auto minus_x = [&](Poly g) {
        g.resize(std::max<size_t>(g.size(), 2), zero());
        g[1] = sub(g[1], one());
        return poly_trim(g);
    };
    if (!minus_x(xq_pow_steps(n)).empty()) return false;
    std::vector<int> prime_divs;
    int m = n;
    for (int l = 2; l <= m; ++l)
        if (m % l == 0) {
            prime_divs.push_back(l);
            while (m % l == 0) m /= l;
        }
    for (int l : prime_divs) {
        Poly d = minus_x(xq_pow_steps(n / l));
        if (poly_gcd(f, d).size() != 1) return false;
    }
    return true;
}

std::vector<FqElt> FqField::poly_roots(const Poly& f) const {
    std::vector<FqElt> roots;
    for (unsigned long i = 0; i < q_; ++i) {
        FqElt x = from_index(i);
        if (is_zero(poly_eval(f, x))) roots.push_back(x);
    }
    return roots;
}

std::vector<uint32_t> FqField::default_modulus(long p, int n) {
    if (n == 1) return {0, 1};
    // shipped table: F_4, F_8, F_9, F_27 (Conway polynomials)
    if (p == 2 && n == 2) return {1, 1, 1};       // x^2 + x + 1
    if (p == 2 && n == 3) return {1, 1, 0, 1};    // x^3 + x + 1
    if (p == 3 && n == 2) return {2, 2, 1};       // x^2 + 2x + 2
    if (p == 3 && n == 3) return {1, 2, 0, 1};    // x^3 + 2x + 1
    // otherwise: first monic irreducible in index order
    FqFieldPtr fp = prime_field(p);
    unsigned long count = upow(p, n);
    for (unsigned long idx = 0; idx < count; ++idx) {
        std::vector<uint32_t> mod(n + 1, 0);
        unsigned long v = idx;
        for (int i = 0; i < n; ++i) {
            mod[i] = static_cast<uint32_t>(v % p);
            v /= p;
        }
        mod[n] = 1;
        Poly f;
        for (uint32_t c : mod) f.push_back(fp->from_int(c));
        if (fp->poly_irreducible(f)) return mod;
    }
    throw InvalidArgument("no irreducible polynomial found"); // unreachable
}

FqEmbed FqEmbed::identity(const FqFieldPtr& f) {
    FqEmbed e;
    e.src = f;
    e.dst = f;
    e.gen_pows.resize(f->degree());
    FqElt g = f->gen(), acc = f->one();
    for (int i = 0; i < f->degree(); ++i) {
        e.gen_pows[i] = acc;
        acc = f->mul(acc, g);
    }
    return e;
}

FqEmbed FqEmbed::find(const FqFieldPtr& src, const FqFieldPtr& dst) {
    if (src->p() != dst->p()) throw InvalidArgument("embedding across characteristics");
    if (dst->degree() % src->degree() != 0)
        throw InvalidArgument("no embedding: degree does not divide");
    if (src.get() == dst.get()) return identity(src);
    // smallest-index root of the source modulus in dst
    FqField::Poly m;
    for (uint32_t c : src->modulus()) m.push_back(dst->from_int(static_cast<long>(c)));
    FqElt img;
    bool found = false;
    for (unsigned long i = 0; i < dst->q(); ++i) {
        FqElt x = dst->from_index(i);
        if (dst->is_zero(dst->poly_eval(m, x))) {
            img = x;
            found = true;
            break;
        }
    }
    if (!found) throw InvalidArgument("modulus has no root in target field");
    FqEmbed e;
    e.src = src;
    e.dst = dst;
    e.gen_pows.resize(src->degree());
    FqElt acc = dst->one();
    for (int i = 0; i < src->degree(); ++i) {
        e.gen_pows[i] = acc;
        acc = dst->mul(acc, img);
    }
    return e;
}

FqElt FqEmbed::apply(const FqElt& a) const {
    FqElt r = dst->zero();
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i]) continue;
        FqElt t = gen_pows[i];
        FqElt scaled = dst->zero();
        for (uint32_t k = 0; k < a.c[i]; ++k) scaled = dst->add(scaled, t);
        r = dst->add(r, scaled);
    }
    return r;
}

ResidueCodec::ResidueCodec(FqFieldPtr flat, int r, int f, FqElt a_img, FqElt w_img)
    : flat_(std::move(flat)), r_(r), f_(f) {
    basis_.resize(static_cast<size_t>(r_) * f_);
    FqElt wp = flat_->one();
    for (int i = 0; i < f_; ++i) {
        FqElt ap = flat_->one();
        for (int j = 0; j < r_; ++j) {
            basis_[static_cast<size_t>(j) + static_cast<size_t>(r_) * i] = flat_->mul(ap, wp);
            ap = flat_->mul(ap, a_img);
        }
        wp = flat_->mul(wp, w_img);
    }
}

FqElt ResidueCodec::decode(unsigned long code) const {
    if (code >= flat_->q()) throw ConfigError("residue digit code out of range");
    FqElt r = flat_->zero();
    long p = flat_->p();
    for (const auto& b : basis_) {
        uint32_t d = static_cast<uint32_t>(code % p);
        code /= p;
        if (d) {
            FqElt t = flat_->zero();
            for (uint32_t k = 0; k < d; ++k) t = flat_->add(t, b);
            r = flat_->add(r, t);
        }
    }
    return r;
}

unsigned long ResidueCodec::encode(const FqElt& x) const {
    // invert the linear map by brute force over the basis span; fields are
    // tiny (q <= ~1000) so a full scan is fine and keeps this index-stable.
    for (unsigned long code = 0; code < flat_->q(); ++code)
        if (decode(code) == x) return code;
    throw InvalidArgument("element not in codec span"); // unreachable: basis spans
}

} // namespace lf
