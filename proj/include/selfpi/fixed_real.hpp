#pragma once
// fixed_real.hpp - arbitrary-precision fixed-point reals over GMP integers.
//
// A FixedReal is a pair (mantissa, scale) with value = mantissa * 2^-scale
// and scale >= 0. A zero mantissa is exact zero at any scale. Every inexact
// operation in this library truncates toward zero, and error accounting
// charges one ulp (2^-scale of the result) per such operation. Decimal
// appears only at the I/O boundary; internally everything is binary.
//
// Values are immutable after construction and safe to share across threads.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include "selfpi/errors.hpp"

namespace selfpi {

// Target absolute error 2^-bits; guard bits absorb internal rounding so the
// mathematical error term dominates. Working width = bits + guard.
struct Precision {
    std::int64_t bits;
    std::int64_t guard;

    explicit Precision(std::int64_t bits_, std::int64_t guard_ = kDefaultGuard)
        : bits(bits_), guard(guard_) {
        if (bits < 1) throw ArgumentOutOfRange("Precision: bits must be >= 1");
        if (guard < 0) throw ArgumentOutOfRange("Precision: guard must be >= 0");
    }

    std::int64_t working() const { return bits + guard; }

    static constexpr std::int64_t kDefaultGuard = 64;
};

namespace detail {

inline std::int64_t bit_length(const mpz_class& m) {
    if (m == 0) return 0;
    return static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2));
}

// Shift right truncating toward zero. (mpz_class::operator>> floors, which
// rounds negatives the wrong way for our purposes.)
inline mpz_class shr_trunc(const mpz_class& m, std::int64_t k) {
    mpz_class r;
    mpz_tdiv_q_2exp(r.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return r;
}

inline mpz_class shl(const mpz_class& m, std::int64_t k) {
    mpz_class r;
    mpz_mul_2exp(r.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return r;
}

inline mpz_class tdiv(const mpz_class& num, const mpz_class& den) {
    mpz_class r;
    mpz_tdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return r;
}

// Ceiling division for positive operands; used for rigorous upper bounds.
inline mpz_class cdiv(const mpz_class& num, const mpz_class& den) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return r;
}

inline mpz_class cshr(const mpz_class& m, std::int64_t k) {
    mpz_class r;
    mpz_cdiv_q_2exp(r.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return r;
}

inline mpz_class pow_ui(unsigned long base, unsigned long exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

inline mpz_class pow10(std::int64_t d) { return pow_ui(10, static_cast<unsigned long>(d)); }

// Exact number of bits of 10^d, i.e. ceil(d * log2(10)) for d >= 1.
inline std::int64_t pow10_bits(std::int64_t d) {
    if (d <= 0) return 1;
    mpz_class p = pow10(d);
    return static_cast<std::int64_t>(mpz_sizeinbase(p.get_mpz_t(), 2));
}

}  // namespace detail

class FixedReal {
public:
    FixedReal() : mantissa_(0), scale_(0) {}

    FixedReal(long v) : mantissa_(v), scale_(0) {}  // NOLINT(google-explicit-constructor)

    FixedReal(mpz_class mantissa, std::int64_t scale)
        : mantissa_(std::move(mantissa)), scale_(scale) {
        if (scale_ < 0) throw ArgumentOutOfRange("FixedReal: scale must be >= 0");
    }

    static FixedReal pow2(std::int64_t e) {
        if (e >= 0) return FixedReal(detail::shl(1, e), 0);
        return FixedReal(1, -e);
    }

    const mpz_class& mantissa() const { return mantissa_; }
    std::int64_t scale() const { return scale_; }

    bool is_zero() const { return mantissa_ == 0; }
    bool is_negative() const { return mantissa_ < 0; }
    int sign() const { return mpz_sgn(mantissa_.get_mpz_t()); }

    // Value at a different scale, truncating toward zero (never away).
    FixedReal rescaled(std::int64_t new_scale) const {
        if (new_scale == scale_) return *this;
        if (new_scale > scale_) return FixedReal(detail::shl(mantissa_, new_scale - scale_), new_scale);
        return FixedReal(detail::shr_trunc(mantissa_, scale_ - new_scale), new_scale);
    }

    // Strip trailing zero bits from the mantissa: same value, minimal scale.
    FixedReal normalized() const {
        if (mantissa_ == 0) return FixedReal();
        auto tz = static_cast<std::int64_t>(mpz_scan1(mantissa_.get_mpz_t(), 0));
        std::int64_t drop = std::min(tz, scale_);
        return FixedReal(detail::shr_trunc(mantissa_, drop), scale_ - drop);
    }

    FixedReal negated() const { return FixedReal(-mantissa_, scale_); }
    FixedReal abs_value() const { return FixedReal(abs(mantissa_), scale_); }

    // Approximate log2 |value|; -infinity for zero. Good to ~1e-10, which is
    // plenty for scheduling and reporting (never used for correctness).
    double log2_abs() const {
        if (mantissa_ == 0) return -std::numeric_limits<double>::infinity();
        signed long exp2 = 0;
        double d = mpz_get_d_2exp(&exp2, mantissa_.get_mpz_t());
        return std::log2(std::fabs(d)) + static_cast<double>(exp2) - static_cast<double>(scale_);
    }

private:
    mpz_class mantissa_;
    std::int64_t scale_;
};

// Exact comparison of values (scale-independent).
inline int cmp(const FixedReal& x, const FixedReal& y) {
    std::int64_t s = std::max(x.scale(), y.scale());
    mpz_class a = detail::shl(x.mantissa(), s - x.scale());
    mpz_class b = detail::shl(y.mantissa(), s - y.scale());
    return ::cmp(a, b);
}

inline bool operator==(const FixedReal& x, const FixedReal& y) { return cmp(x, y) == 0; }
inline bool operator!=(const FixedReal& x, const FixedReal& y) { return cmp(x, y) != 0; }
inline bool operator<(const FixedReal& x, const FixedReal& y) { return cmp(x, y) < 0; }
inline bool operator<=(const FixedReal& x, const FixedReal& y) { return cmp(x, y) <= 0; }
inline bool operator>(const FixedReal& x, const FixedReal& y) { return cmp(x, y) > 0; }
inline bool operator>=(const FixedReal& x, const FixedReal& y) { return cmp(x, y) >= 0; }

// Representation equality: same mantissa and same scale.
inline bool identical(const FixedReal& x, const FixedReal& y) {
    return x.scale() == y.scale() && x.mantissa() == y.mantissa();
}

// Exact sum at scale max(x.scale, y.scale).
inline FixedReal add(const FixedReal& x, const FixedReal& y) {
    std::int64_t s = std::max(x.scale(), y.scale());
    mpz_class a = detail::shl(x.mantissa(), s - x.scale());
    mpz_class b = detail::shl(y.mantissa(), s - y.scale());
    return FixedReal(a + b, s);
}

inline FixedReal sub(const FixedReal& x, const FixedReal& y) { return add(x, y.negated()); }

// Product truncated toward zero at scale p.bits + p.guard; the error is at
// most one ulp of the result.
inline FixedReal mul(const FixedReal& x, const FixedReal& y, const Precision& p) {
    std::int64_t w = p.working();
    mpz_class m = x.mantissa() * y.mantissa();
    std::int64_t s = x.scale() + y.scale();
    if (s >= w) return FixedReal(detail::shr_trunc(m, s - w), w);
    return FixedReal(detail::shl(m, w - s), w);
}

// Quotient truncated toward zero at scale p.bits + p.guard.
inline FixedReal div(const FixedReal& x, const FixedReal& y, const Precision& p) {
    if (y.is_zero()) throw DivisionByZero();
    std::int64_t w = p.working();
    // x/y = (mx / my) * 2^(sy - sx); bring the numerator up so the quotient
    // lands exactly at scale w.
    std::int64_t e = w + y.scale() - x.scale();
    mpz_class num = x.mantissa();
    mpz_class den = y.mantissa();
    if (e >= 0) num = detail::shl(num, e);
    else den = detail::shl(den, -e);
    return FixedReal(detail::tdiv(num, den), w);
}

// Keep only `bits` fractional bits, truncating toward zero.
inline FixedReal truncate(const FixedReal& x, std::int64_t bits) {
    if (bits < 1) throw ArgumentOutOfRange("truncate: bits must be >= 1");
    return x.rescaled(bits);
}

// Decimal rendering of floor(|x| * 10^digits) with sign and decimal point;
// truncation toward zero, so printed digits never overstate the value.
inline std::string to_decimal(const FixedReal& x, std::int64_t digits) {
    if (digits < 1) throw ArgumentOutOfRange("to_decimal: digits must be >= 1");
    mpz_class m = abs(x.mantissa());
    std::int64_t s = x.scale();
    // |x| * 10^d = |m| * 5^d * 2^(d - s)
    mpz_class t = m * detail::pow_ui(5, static_cast<unsigned long>(digits));
    if (digits >= s) t = detail::shl(t, digits - s);
    else t = detail::shr_trunc(t, s - digits);
    std::string ds = t.get_str();
    auto d = static_cast<std::size_t>(digits);
    if (ds.size() <= d) ds.insert(0, d + 1 - ds.size(), '0');
    std::string out;
    if (x.is_negative() && t != 0) out += '-';
    out.append(ds, 0, ds.size() - d);
    out += '.';
    out.append(ds, ds.size() - d, d);
    return out;
}

namespace detail {

struct ParsedDecimal {
    bool negative = false;
    mpz_class units;           // integer-part * 10^frac_digits + fraction
    std::int64_t frac_digits = 0;
};

// Accepts [+-]? digits [ '.' digits ]; leading spaces and trailing
// whitespace (including a final newline, as digit files carry) are ignored.
inline ParsedDecimal parse_decimal(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == '\n' || s[e - 1] == '\r' || s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    if (b == e) throw ParseError("empty decimal numeral");

    ParsedDecimal out;
    if (s[b] == '+' || s[b] == '-') {
        out.negative = (s[b] == '-');
        ++b;
    }
    std::string digits;
    bool seen_point = false, seen_digit = false;
    for (std::size_t i = b; i < e; ++i) {
        char c = s[i];
        if (c == '.') {
            if (seen_point) throw ParseError("multiple decimal points");
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits += c;
            seen_digit = true;
            if (seen_point) ++out.frac_digits;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "' in decimal numeral");
        }
    }
    if (!seen_digit) throw ParseError("decimal numeral has no digits");
    out.units = mpz_class(digits, 10);
    return out;
}

}  // namespace detail

// Parse a signed decimal numeral; |result - value| <= 2^-(bits+guard), with
// the representation truncated toward zero. Exact when the value is a
// binary fraction that fits the working scale.
inline FixedReal from_decimal(std::string_view s, const Precision& p) {
    detail::ParsedDecimal d = detail::parse_decimal(s);
    std::int64_t w = p.working();
    mpz_class num = detail::shl(d.units, w);
    mpz_class m = detail::tdiv(num, detail::pow10(d.frac_digits));
    if (d.negative) m = -m;
    return FixedReal(std::move(m), w);
}

// Exact count of fractional decimal digits needed so that 10^-d <= 2^-bits,
// used when converting a bit target to a printable digit count.
inline std::int64_t bits_to_decimals(std::int64_t bits) {
    auto d = static_cast<std::int64_t>(static_cast<double>(bits) * 0.30102999566398119521);
    while (detail::pow10_bits(d) <= bits) ++d;
    while (d > 1 && detail::pow10_bits(d - 1) > bits) --d;
    return std::max<std::int64_t>(d, 1);
}

// ceil(digits * log2(10)) computed exactly; the conversion used for digit
// targets is this plus 4 slack bits.
inline std::int64_t decimals_to_bits(std::int64_t digits) {
    return detail::pow10_bits(digits);
}

}  // namespace selfpi
