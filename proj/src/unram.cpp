#include "lf/unram.hpp"

#include <algorithm>

#include "lf/errors.hpp"

namespace lf {

UnramRing UnramRing::make(Kind kind, long p, FqFieldPtr F, int nmax) {
    if (nmax < 1) throw PrecisionTooSmall("ring precision must be >= 1");
    UnramRing r;
    r.kind_ = kind;
    r.p_ = p;
    r.F_ = std::move(F);
    r.nmax_ = nmax;
    r.s_ = (kind == Kind::mixed) ? r.F_->degree() : 1;
    if (kind == Kind::mixed) {
        r.pn_.resize(nmax + 1);
        r.pn_[0] = 1;
        for (int k = 1; k <= nmax; ++k) r.pn_[k] = r.pn_[k - 1] * p;
        r.H_.assign(r.F_->modulus().begin(), r.F_->modulus().end());
        // y^(s+k) mod H, computed once
        const int s = r.s_;
        if (s > 1) {
            std::vector<Int> cur(s, 0); // y^s mod H = -sum H_i y^i
            for (int i = 0; i < s; ++i) cur[i] = -r.H_[i];
            r.red_.push_back(cur);
            for (int k = 1; k < s - 1; ++k) {
                std::vector<Int> nxt(s, 0);
                // multiply cur by y
                Int lead = cur[s - 1];
                for (int i = s - 1; i > 0; --i) nxt[i] = cur[i - 1];
                nxt[0] = 0;
                for (int i = 0; i < s; ++i) nxt[i] -= lead * r.H_[i];
                r.red_.push_back(nxt);
                cur = nxt;
            }
        }
    }
    return r;
}

UnramElt UnramRing::zero() const {
    UnramElt e;
    if (kind_ == Kind::mixed) e.zc.assign(s_, Int(0));
    return e;
}

UnramElt UnramRing::base_uniformizer() const {
    UnramElt e = zero();
    if (kind_ == Kind::mixed) {
        e.zc[0] = p_;
    } else {
        e.tc = {F_->zero(), F_->one()};
    }
    return e;
}

UnramElt UnramRing::one() const {
    UnramElt e = zero();
    if (kind_ == Kind::mixed)
        e.zc[0] = 1;
    else
        e.tc.push_back(F_->one());
    return e;
}

UnramElt UnramRing::reduce(const UnramElt& a, int n) const {
    n = std::min(n, nmax_);
    UnramElt e = a;
    if (kind_ == Kind::mixed) {
        e.zc.resize(s_, Int(0));
        for (auto& z : e.zc) {
            mpz_fdiv_r(z.get_mpz_t(), z.get_mpz_t(), pn_[n].get_mpz_t());
        }
    } else {
        if (static_cast<int>(e.tc.size()) > n) e.tc.resize(n);
        while (!e.tc.empty() && F_->is_zero(e.tc.back())) e.tc.pop_back();
    }
    return e;
}

UnramElt UnramRing::from_int(const Int& v, int n) const {
    UnramElt e = zero();
    if (kind_ == Kind::mixed) {
        e.zc[0] = v;
    } else {
        // integers map through the prime field
        long r = static_cast<long>(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p_)));
        e.tc.push_back(F_->from_int(r));
    }
    return reduce(e, n);
}

UnramElt UnramRing::from_fq_lift(const FqElt& d) const {
    UnramElt e = zero();
    if (kind_ == Kind::mixed) {
        for (int i = 0; i < s_; ++i) e.zc[i] = d.c[i];
    } else {
        if (!F_->is_zero(d)) e.tc.push_back(d);
    }
    return e;
}

UnramElt UnramRing::teich(const FqElt& d, int n) const {
    UnramElt z = from_fq_lift(d);
    if (kind_ == Kind::equal) return z;
    // z -> z^Q fixes the residue and gains at least one digit per step
    for (int i = 0; i < n; ++i) z = pow(z, F_->q(), n);
    return z;
}

UnramElt UnramRing::add(const UnramElt& a, const UnramElt& b, int n) const {
    UnramElt e = zero();
    if (kind_ == Kind::mixed) {
        for (int i = 0; i < s_; ++i) e.zc[i] = a.zc[i] + b.zc[i];
    } else {
        e.tc.resize(std::max(a.tc.size(), b.tc.size()), F_->zero());
        for (size_t i = 0; i < e.tc.size(); ++i) {
            FqElt x = i < a.tc.size() ? a.tc[i] : F_->zero();
            FqElt y = i < b.tc.size() ? b.tc[i] : F_->zero();
            e.tc[i] = F_->add(x, y);
        }
    }
    return reduce(e, n);
}

UnramElt UnramRing::sub(const UnramElt& a, const UnramElt& b, int n) const {
    return add(a, neg(b, n), n);
}

UnramElt UnramRing::neg(const UnramElt& a, int n) const {
    UnramElt e = zero();
    if (kind_ == Kind::mixed) {
        for (int i = 0; i < s_; ++i) e.zc[i] = -a.zc[i];
    } else {
        e.tc.resize(a.tc.size(), F_->zero());
        for (size_t i = 0; i < a.tc.size(); ++i) e.tc[i] = F_->neg(a.tc[i]);
    }
    return reduce(e, n);
}

UnramElt UnramRing::mul(const UnramElt& a, const UnramElt& b, int n) const {
    UnramElt e = zero();
    if (kind_ == Kind::mixed) {
        std::vector<Int> prod(2 * s_ - 1, Int(0));
        for (int i = 0; i < s_; ++i) {
            if (a.zc[i] == 0) continue;
            for (int j = 0; j < s_; ++j) prod[i + j] += a.zc[i] * b.zc[j];
        }
        for (int k = 2 * s_ - 2; k >= s_; --k) {
            if (prod[k] == 0) continue;
            const auto& row = red_[k - s_];
            for (int i = 0; i < s_; ++i) prod[i] += prod[k] * row[i];
        }
        for (int i = 0; i < s_; ++i) e.zc[i] = prod[i];
    } else {
        n = std::min(n, nmax_);
        size_t len = std::min<size_t>(a.tc.size() + b.tc.size(), static_cast<size_t>(n));
        e.tc.assign(len, F_->zero());
        for (size_t i = 0; i < a.tc.size() && i < len; ++i) {
            if (F_->is_zero(a.tc[i])) continue;
            for (size_t j = 0; j < b.tc.size() && i + j < len; ++j)
                e.tc[i + j] = F_->add(e.tc[i + j], F_->mul(a.tc[i], b.tc[j]));
        }
    }
    return reduce(e, n);
}

UnramElt UnramRing::mul_int(const UnramElt& a, const Int& v, int n) const {
    return mul(a, from_int(v, n), n);
}

UnramElt UnramRing::pow(const UnramElt& a, unsigned long e, int n) const {
    UnramElt r = one(), b = a;
    while (e) {
        if (e & 1) r = mul(r, b, n);
        b = mul(b, b, n);
        e >>= 1;
    }
    return r;
}

int UnramRing::val(const UnramElt& a, int n) const {
    n = std::min(n, nmax_);
    if (kind_ == Kind::mixed) {
        int best = n;
        for (const auto& zraw : a.zc) {
            Int z;
            mpz_fdiv_r(z.get_mpz_t(), zraw.get_mpz_t(), pn_[n].get_mpz_t());
            if (z == 0) continue;
            int v = 0;
            while (v < best && mpz_divisible_ui_p(z.get_mpz_t(), static_cast<unsigned long>(p_))) {
                z /= p_;
                ++v;
            }
            best = std::min(best, v);
            if (best == 0) return 0;
        }
        return best;
    }
    for (size_t i = 0; i < a.tc.size() && static_cast<int>(i) < n; ++i)
        if (!F_->is_zero(a.tc[i])) return static_cast<int>(i);
    return n;
}

bool UnramRing::eq(const UnramElt& a, const UnramElt& b, int n) const {
    return is_zero(sub(a, b, n), n);
}

UnramElt UnramRing::div_base(const UnramElt& a, int k, int n) const {
    if (k == 0) return reduce(a, n);
    n = std::min(n, nmax_);
    UnramElt e = zero();
    if (kind_ == Kind::mixed) {
        for (int i = 0; i < s_; ++i) {
            Int z;
            mpz_fdiv_r(z.get_mpz_t(), a.zc[i].get_mpz_t(), pn_[n].get_mpz_t());
            if (!mpz_divisible_p(z.get_mpz_t(), pn_[k].get_mpz_t()))
                throw InvalidArgument("inexact base-uniformizer division");
            e.zc[i] = z / pn_[k];
        }
    } else {
        for (size_t i = 0; i < a.tc.size() && static_cast<int>(i) < n; ++i) {
            if (static_cast<int>(i) < k) {
                if (!F_->is_zero(a.tc[i]))
                    throw InvalidArgument("inexact base-uniformizer division");
            } else {
                e.tc.push_back(a.tc[i]);
            }
        }
    }
    return reduce(e, std::max(0, n - k));
}

UnramElt UnramRing::inv(const UnramElt& a, int n) const {
    FqElt r = residue(a);
    if (F_->is_zero(r)) throw DivisionByIndistinguishableZero("inverse of a non-unit in O_K0");
    UnramElt x = from_fq_lift(F_->inv(r));
    // Newton: error 1 - a*x squares each step
    int steps = 1;
    while ((1 << steps) < n + 1) ++steps;
    for (int i = 0; i <= steps; ++i) {
        UnramElt err = sub(one(), mul(a, x, n), n);
        x = add(x, mul(x, err, n), n);
    }
    return x;
}

FqElt UnramRing::residue(const UnramElt& a) const {
    if (kind_ == Kind::mixed) {
        FqElt d = F_->zero();
        for (int i = 0; i < s_; ++i)
            d.c[i] = static_cast<uint32_t>(
                mpz_fdiv_ui(a.zc[i].get_mpz_t(), static_cast<unsigned long>(p_)));
        return d;
    }
    return a.tc.empty() ? F_->zero() : a.tc[0];
}

std::vector<FqElt> UnramRing::base_digits(const UnramElt& a, int n) const {
    n = std::min(n, nmax_);
    std::vector<FqElt> out;
    out.reserve(n);
    if (kind_ == Kind::equal) {
        for (int i = 0; i < n; ++i)
            out.push_back(static_cast<size_t>(i) < a.tc.size() ? a.tc[i] : F_->zero());
        return out;
    }
    UnramElt cur = reduce(a, n);
    for (int i = 0; i < n; ++i) {
        FqElt d = residue(cur);
        out.push_back(d);
        cur = div_base(sub(cur, teich(d, n - i), n - i), 1, n - i);
    }
    return out;
}

UnramElt UnramRing::from_base_digits(const std::vector<FqElt>& d, int n) const {
    UnramElt acc = zero();
    if (kind_ == Kind::equal) {
        acc.tc.assign(d.begin(), d.end());
        return reduce(acc, n);
    }
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) {
        acc = mul_int(acc, Int(p_), n);
        acc = add(acc, teich(d[i], n), n);
    }
    return acc;
}

std::string UnramRing::to_string(const UnramElt& a, int n) const {
    auto digits = base_digits(a, n);
    std::string out = "[";
    for (size_t i = 0; i < digits.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(F_->to_index(digits[i]));
    }
    return out + "]";
}

RingEmbed RingEmbed::make(const UnramRing& src, const UnramRing& dst, const FqEmbed& fe) {
    RingEmbed e;
    e.src = &src;
    e.dst = &dst;
    e.res_embed = fe;
    if (src.kind() == Kind::mixed) {
        // Hensel-lift the embedded residue root of the source modulus
        const int n = dst.nmax();
        std::vector<Int> H(src.F()->modulus().begin(), src.F()->modulus().end());
        UnramElt z = dst.from_fq_lift(fe.apply(src.F()->gen()));
        auto evalH = [&](const UnramElt& x, const std::vector<Int>& cs) {
            UnramElt r = dst.zero();
            for (auto it = cs.rbegin(); it != cs.rend(); ++it)
                r = dst.add(dst.mul(r, x, n), dst.from_int(*it, n), n);
            return r;
        };
        std::vector<Int> Hd;
        for (size_t i = 1; i < H.size(); ++i) Hd.push_back(H[i] * static_cast<long>(i));
        int steps = 1;
        while ((1 << steps) < n + 1) ++steps;
        for (int i = 0; i <= steps; ++i) {
            UnramElt num = evalH(z, H);
            UnramElt den = evalH(z, Hd);
            z = dst.sub(z, dst.mul(num, dst.inv(den, n), n), n);
        }
        e.gen_pows.resize(src.s());
        UnramElt acc = dst.one();
        for (int i = 0; i < src.s(); ++i) {
            e.gen_pows[i] = acc;
            acc = dst.mul(acc, z, n);
        }
    }
    return e;
}

UnramElt RingEmbed::apply(const UnramElt& a, int n) const {
    if (src->kind() == Kind::equal) {
        UnramElt e = dst->zero();
        for (const auto& d : a.tc) e.tc.push_back(res_embed.apply(d));
        return dst->reduce(e, n);
    }
    UnramElt r = dst->zero();
    for (int i = 0; i < src->s(); ++i)
        r = dst->add(r, dst->mul_int(gen_pows[i], a.zc[i], n), n);
    return r;
}

} // namespace lf
