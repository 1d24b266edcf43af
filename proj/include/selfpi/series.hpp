#pragma once
// series.hpp - binary-splitting evaluation of sin and cos on reduced
// arguments, doubling-formula reconstruction, and an independent arctan
// path used as a cross-check oracle.
//
// Series with rational terms are summed exactly as integer triples
// (P, Q, T): over a term range, P and Q are the products of the per-term
// ratio numerators and denominators, and T/Q is the range's contribution
// to the sum. Ranges combine by
//     merge((P1,Q1,T1), (P2,Q2,T2)) = (P1*P2, Q1*Q2, T1*Q2 + P1*T2),
// so the single high-precision division T/Q is deferred to the very end.
//
// A w-bit argument x is split into bit bursts x = y_0 + y_1 + ..., where
// burst i carries the bits of x between weights 2^-e_{i-1} and 2^-e_i and
// the cut exponents e_i double. Each burst has a short numerator, so its
// series splits cheaply, and sin/cos of the bursts recombine with the
// angle-addition rotation (s,c)·(s_i,c_i) = (s c_i + c s_i, c c_i - s s_i).

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "selfpi/errors.hpp"
#include "selfpi/fixed_real.hpp"

namespace selfpi {

// Argument x = num * 2^-log2_den. Series entry points require |x| < 1/2.
struct RationalArg {
    mpz_class num;
    std::int64_t log2_den = 0;
};

struct SplitTriple {
    mpz_class p, q, t;  // q != 0 always
};

inline SplitTriple merge(const SplitTriple& a, const SplitTriple& b) {
    return SplitTriple{a.p * b.p, a.q * b.q, a.t * b.q + a.p * b.t};
}

namespace detail {

// Term ratios c_k / c_{k-1} = p(k)/q(k) for the sin (odd) and cos (even)
// Taylor series of y = m * 2^-e, with c_0 = 1:
//   sin: q(k) = (2k)(2k+1) * 2^(2e),   cos: q(k) = (2k-1)(2k) * 2^(2e),
//   p(k) = -m^2 in both.
struct SinCosSeries {
    mpz_class neg_num_sq;
    std::int64_t den_shift;  // 2e
    bool odd;

    SplitTriple leaf(std::int64_t k) const {
        if (k == 0) return SplitTriple{1, 1, 1};
        std::int64_t f = odd ? (2 * k) * (2 * k + 1) : (2 * k - 1) * (2 * k);
        return SplitTriple{neg_num_sq, shl(mpz_class(f), den_shift), neg_num_sq};
    }
};

// Midpoint recursion over [lo, hi); leaves are single terms. The result is
// exactly independent of the split points (integer arithmetic throughout).
template <typename Series>
SplitTriple split_range(const Series& s, std::int64_t lo, std::int64_t hi) {
    if (hi - lo == 1) return s.leaf(lo);
    std::int64_t mid = lo + (hi - lo) / 2;
    return merge(split_range(s, lo, mid), split_range(s, mid, hi));
}

// Minimal N >= 1 such that |y|^(2N+d) / (2N+d)! < 2^-target, d = 1 for the
// sin series and 0 for cos. The scan walks log2 of the term magnitude; each
// step moves it by many bits, so double precision decides it reliably.
inline std::int64_t taylor_term_count(double log2_y, std::int64_t target, bool odd) {
    if (!std::isfinite(log2_y)) return 1;  // zero argument
    double tgt = -static_cast<double>(target);
    std::int64_t n = 0;
    double lg_fact = 0.0;  // log2((2n+d)!)
    std::int64_t top = odd ? 1 : 0;
    for (;;) {
        double lg_term = static_cast<double>(2 * n + (odd ? 1 : 0)) * log2_y - lg_fact;
        if (lg_term < tgt) break;
        ++n;
        lg_fact += std::log2(static_cast<double>(top + 1)) + std::log2(static_cast<double>(top + 2));
        top += 2;
        if (n > (1 << 28)) throw InternalError("taylor_term_count: no convergence");
    }
    return std::max<std::int64_t>(n, 1);
}

inline double log2_ratio(const mpz_class& num, std::int64_t log2_den) {
    if (num == 0) return -std::numeric_limits<double>::infinity();
    signed long e = 0;
    double d = mpz_get_d_2exp(&e, num.get_mpz_t());
    return std::log2(std::fabs(d)) + static_cast<double>(e) - static_cast<double>(log2_den);
}

// sin and cos of one burst y = m * 2^-e (m > 0, y < 1/2), each within
// 2 ulp at scale w.
inline std::pair<mpz_class, mpz_class> sincos_burst(const mpz_class& m, std::int64_t e,
                                                    std::int64_t w) {
    double lg = log2_ratio(m, e);
    mpz_class neg_sq = -(m * m);
    SinCosSeries sin_series{neg_sq, 2 * e, true};
    SinCosSeries cos_series{neg_sq, 2 * e, false};
    std::int64_t ns = taylor_term_count(lg, w + 2, true);
    std::int64_t nc = taylor_term_count(lg, w + 2, false);
    SplitTriple ts = split_range(sin_series, 0, ns);
    SplitTriple tc = split_range(cos_series, 0, nc);
    // sin y = y * Ts/Qs = m * Ts / (Qs * 2^e); cos y = Tc/Qc.
    mpz_class sin_m = tdiv(shl(m * ts.t, w), shl(ts.q, e));
    mpz_class cos_m = tdiv(shl(tc.t, w), tc.q);
    return {std::move(sin_m), std::move(cos_m)};
}

}  // namespace detail

// Number of sin-series terms needed to push the truncation tail below one
// ulp of the working width: smallest N with |x|^(2N+1)/(2N+1)! < 2^-(bits+guard).
// Non-decreasing in p.bits.
inline std::int64_t term_count(const RationalArg& x, const Precision& p) {
    return detail::taylor_term_count(detail::log2_ratio(x.num, x.log2_den), p.working(), true);
}

// (sin x, cos x) for |x| < 1/2, each within 2^-p.bits of the true value
// (internally within a few ulp of the working width).
inline std::pair<FixedReal, FixedReal> sincos_reduced(const RationalArg& x, const Precision& p) {
    std::int64_t w = p.working();
    if (x.num != 0 && detail::bit_length(x.num) >= x.log2_den) {
        throw ArgumentOutOfRange("sincos_reduced: |x| must be < 1/2");
    }
    bool neg = x.num < 0;
    mpz_class n = abs(x.num);
    std::int64_t d = x.log2_den;
    // Bits beyond w+4 move sin and cos by less than 2^-(w+4): drop them.
    if (d > w + 4) {
        n = detail::shr_trunc(n, d - (w + 4));
        d = w + 4;
    }
    FixedReal s(mpz_class(0), w);
    FixedReal c(detail::shl(1, w), w);
    if (n != 0) {
        Precision pw(w, 0);
        bool first = true;
        std::int64_t e = 16;
        mpz_class remaining = n;
        while (true) {
            if (e > d) e = d;
            std::int64_t shift = d - e;
            mpz_class m = remaining >> static_cast<mp_bitcnt_t>(shift);
            remaining -= detail::shl(m, shift);
            if (m != 0) {
                auto [sy_m, cy_m] = detail::sincos_burst(m, e, w);
                FixedReal sy(std::move(sy_m), w), cy(std::move(cy_m), w);
                if (first) {
                    s = sy;
                    c = cy;
                    first = false;
                } else {
                    FixedReal s2 = add(mul(s, cy, pw), mul(c, sy, pw)).rescaled(w);
                    FixedReal c2 = sub(mul(c, cy, pw), mul(s, sy, pw)).rescaled(w);
                    s = s2;
                    c = c2;
                }
            }
            if (e == d) break;
            e *= 2;
        }
    }
    if (neg) s = s.negated();
    return {std::move(s), std::move(c)};
}

// sin and cos of x via sincos_reduced(x / 2^halvings) and `halvings`
// applications of sin 2t = 2 sin t cos t, cos 2t = 1 - 2 sin^2 t.
// Requires |x| < 2^(halvings - 1). The argument is snapped to a rational
// with log2_den = bits + guard; the snapping error is charged to the input.
inline std::pair<FixedReal, FixedReal> sincos_with_reduction(const FixedReal& x, int halvings,
                                                             const Precision& p) {
    std::int64_t w = p.working();
    if (detail::bit_length(x.mantissa()) >= x.scale() + halvings) {
        throw ArgumentOutOfRange("sincos_with_reduction: argument too large for the reduction");
    }
    RationalArg y{x.mantissa(), x.scale() + halvings};
    if (y.log2_den > w) {
        y.num = detail::shr_trunc(y.num, y.log2_den - w);
        y.log2_den = w;
    }
    auto [s, c] = sincos_reduced(y, Precision(w, 0));
    Precision pw(w, 0);
    FixedReal one = FixedReal(1).rescaled(w);
    for (int j = 0; j < halvings; ++j) {
        FixedReal sc = mul(s, c, pw);
        FixedReal ss = mul(s, s, pw);
        s = FixedReal(detail::shl(sc.mantissa(), 1), w);
        c = sub(one, FixedReal(detail::shl(ss.mantissa(), 1), w)).rescaled(w);
    }
    return {std::move(s), std::move(c)};
}

// sin x for |x| < 4: sincos on x/8, then three doublings.
inline FixedReal sin_full(const FixedReal& x, const Precision& p) {
    return sincos_with_reduction(x, 3, p).first;
}

inline std::pair<FixedReal, FixedReal> sincos_full(const FixedReal& x, const Precision& p) {
    return sincos_with_reduction(x, 3, p);
}

// arctan(1/u) for integer u >= 2, by binary splitting of the alternating
// series sum (-1)^k / ((2k+1) u^(2k+1)). Within 2^-p.bits.
inline FixedReal arctan_inv(unsigned long u, const Precision& p) {
    if (u < 2) throw ArgumentOutOfRange("arctan_inv: u must be >= 2");
    std::int64_t w = p.working();
    struct ArctanSeries {
        mpz_class u_sq;
        SplitTriple leaf(std::int64_t k) const {
            if (k == 0) return SplitTriple{1, 1, 1};
            mpz_class pk(-(2 * k - 1));
            return SplitTriple{pk, (2 * k + 1) * u_sq, pk};
        }
    };
    // First omitted term u^-(2N+1)/(2N+1) below 2^-(w+2).
    double lg_u = std::log2(static_cast<double>(u));
    std::int64_t n = 1;
    while (static_cast<double>(2 * n + 1) * lg_u + std::log2(static_cast<double>(2 * n + 1)) <=
           static_cast<double>(w + 2)) {
        ++n;
    }
    ArctanSeries series{mpz_class(u) * u};
    SplitTriple t = detail::split_range(series, 0, n);
    // arctan(1/u) = (1/u) * T/Q
    mpz_class m = detail::tdiv(detail::shl(t.t, w), t.q * u);
    return FixedReal(std::move(m), w);
}

// pi via the Machin combination 16 arctan(1/5) - 4 arctan(1/239), within
// 2^-p.bits. Independent of the sin/cos path, so the two can cross-check
// each other.
inline FixedReal pi_oracle(const Precision& p) {
    std::int64_t w = p.working() + 8;
    Precision pw(w, 0);
    FixedReal a5 = arctan_inv(5, pw);
    FixedReal a239 = arctan_inv(239, pw);
    FixedReal pi = sub(FixedReal(detail::shl(a5.mantissa(), 4), w),
                       FixedReal(detail::shl(a239.mantissa(), 2), w));
    return pi.rescaled(p.working());
}

}  // namespace selfpi
