#pragma once
// verifier.hpp - decision procedure for claimed digits of pi.
//
// A claimed value with n decimal places is split into alpha_H (the first m
// decimals, 3m >= n) and a discarded low part. One self-correcting step
// alpha' = alpha_H + sin(alpha_H) then carries error below 10^-3m / 6, so
// alpha' determines every claimed digit with margin. Digits are certified
// by rendering alpha' - E and alpha' + E and keeping the prefix on which
// the two agree: anything the claim gets wrong inside that prefix is a
// definite rejection, and digits past it are answered "inconclusive"
// rather than guessed (this only happens when floor(10^n pi) sits within
// E of a carry boundary).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "selfpi/errors.hpp"
#include "selfpi/fixed_real.hpp"
#include "selfpi/series.hpp"

namespace selfpi {

enum class Verdict { accept, reject, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::accept: return "accept";
        case Verdict::reject: return "reject";
        default: return "inconclusive";
    }
}

struct VerifyReport {
    std::int64_t n_digits = 0;  // claimed fractional digits
    std::int64_t m = 0;         // split point: decimals kept in alpha_H
    FixedReal alpha_h;
    FixedReal recomputed;       // alpha_H + sin(alpha_H)
    std::int64_t verified_prefix = 0;           // fractional digits confirmed
    std::optional<std::int64_t> first_mismatch;  // 1-based fractional position
    Verdict verdict = Verdict::inconclusive;
};

namespace detail {

struct DigitClaim {
    std::string int_part;
    std::string frac;
    bool negative = false;
};

inline DigitClaim parse_digit_claim(std::string_view s) {
    ParsedDecimal p = parse_decimal(s);  // validates characters
    DigitClaim c;
    c.negative = p.negative;
    std::string units = p.units.get_str();
    auto fd = static_cast<std::size_t>(p.frac_digits);
    if (units.size() <= fd) units.insert(0, fd + 1 - units.size(), '0');
    c.int_part = units.substr(0, units.size() - fd);
    c.frac = units.substr(units.size() - fd);
    return c;
}

}  // namespace detail

// The sin step used by the verifier; kept local so verifier.hpp does not
// pull in the ladder machinery.
inline FixedReal correct_step_for_verify(const FixedReal& alpha, const Precision& p) {
    return add(alpha, sin_full(alpha, p)).rescaled(p.working());
}

// Check a claimed digit string for pi. m defaults to floor(n/3) + 2, the
// cheapest split with slack; any m with 3m >= n and m <= n is accepted.
inline VerifyReport verify_digits(std::string_view digit_string,
                                  std::optional<std::int64_t> m_opt = std::nullopt) {
    detail::DigitClaim claim = detail::parse_digit_claim(digit_string);
    auto n = static_cast<std::int64_t>(claim.frac.size());
    if (n < 2) throw ParseError("verify_digits: need at least 2 fractional digits");
    if (claim.negative || claim.int_part != "3") {
        // pi starts with 3; anything else is wrong at the integer part.
        VerifyReport r;
        r.n_digits = n;
        r.m = m_opt.value_or(n / 3 + 2);
        r.verdict = Verdict::reject;
        r.first_mismatch = 0;
        return r;
    }

    std::int64_t m = m_opt.value_or(n / 3 + 2);
    if (m > n || 3 * m < n) throw SplitOutOfRange("verify_digits: need n/3 <= m <= n");

    // Working precision: at least ceil(3.33 * (3m + 2)) bits, with guard.
    std::int64_t bits = std::max((333 * (3 * m + 2) + 99) / 100, decimals_to_bits(n) + 8);
    Precision p(bits);
    std::int64_t w = p.working();

    // alpha_H = 3.<first m decimals>, exact value M_H / 10^m.
    mpz_class units_h(("3" + claim.frac.substr(0, static_cast<std::size_t>(m))), 10);
    FixedReal alpha_h(detail::tdiv(detail::shl(units_h, w), detail::pow10(m)), w);
    FixedReal recomputed = correct_step_for_verify(alpha_h, p);

    // |pi - alpha'| < (10^-m + 2^-w)^3/6 + sine/truncation error, provided
    // the claimed prefix is right; if it is not, the first wrong digit is
    // found long before this bound matters.
    FixedReal err = add(FixedReal(detail::cdiv(detail::shl(1, w), detail::pow10(3 * m) * 5), w),
                        FixedReal::pow2(-(w - 20)));

    std::string lo = to_decimal(sub(recomputed, err), n);
    std::string hi = to_decimal(add(recomputed, err), n);

    VerifyReport r;
    r.n_digits = n;
    r.m = m;
    r.alpha_h = alpha_h;
    r.recomputed = recomputed;

    // Fractional digits start right after "3." in both rendered strings.
    auto frac_of = [](const std::string& s) {
        auto dot = s.find('.');
        return s.substr(dot + 1);
    };
    std::string lo_frac = frac_of(lo), hi_frac = frac_of(hi);
    std::int64_t cert = 0;
    if (lo.substr(0, lo.find('.')) == hi.substr(0, hi.find('.'))) {
        while (cert < n && lo_frac[static_cast<std::size_t>(cert)] ==
                               hi_frac[static_cast<std::size_t>(cert)]) {
            ++cert;
        }
    }

    std::int64_t mismatch = -1;
    for (std::int64_t i = 0; i < n; ++i) {
        if (claim.frac[static_cast<std::size_t>(i)] != lo_frac[static_cast<std::size_t>(i)]) {
            mismatch = i + 1;
            break;
        }
    }

    if (mismatch > 0 && mismatch <= cert) {
        r.verdict = Verdict::reject;
        r.first_mismatch = mismatch;
        r.verified_prefix = mismatch - 1;
    } else if (cert >= n) {
        r.verdict = Verdict::accept;
        r.verified_prefix = n;
    } else {
        r.verdict = Verdict::inconclusive;
        r.verified_prefix = cert;
    }
    return r;
}

// ---- cross agreement ------------------------------------------------------

struct AgreementReport {
    bool identical = false;
    std::size_t common_chars = 0;               // leading characters in common
    std::int64_t common_fraction_digits = 0;
    std::optional<std::int64_t> mismatch_fraction_pos;  // 1-based
    std::string context_a, context_b;           // text around the divergence
};

// Longest common prefix of two digit files (contents, not paths), with the
// tails around the first disagreement.
inline AgreementReport cross_agree(std::string_view text_a, std::string_view text_b) {
    detail::DigitClaim a = detail::parse_digit_claim(text_a);
    detail::DigitClaim b = detail::parse_digit_claim(text_b);

    auto canon = [](const detail::DigitClaim& c) {
        return (c.negative ? std::string("-") : std::string()) + c.int_part + "." + c.frac;
    };
    std::string ca = canon(a), cb = canon(b);

    AgreementReport r;
    std::size_t lim = std::min(ca.size(), cb.size());
    std::size_t i = 0;
    while (i < lim && ca[i] == cb[i]) ++i;
    r.common_chars = i;
    r.identical = (i == ca.size() && i == cb.size());

    std::size_t int_len = (a.negative ? 1 : 0) + a.int_part.size() + 1;  // through '.'
    if (i > int_len) {
        r.common_fraction_digits = static_cast<std::int64_t>(std::min(i - int_len,
                                                                      std::min(a.frac.size(), b.frac.size())));
    }
    if (!r.identical && i < lim) {
        r.mismatch_fraction_pos = (i >= int_len) ? static_cast<std::int64_t>(i - int_len + 1) : 0;
        auto ctx = [i](const std::string& s) {
            std::size_t b0 = i >= 8 ? i - 8 : 0;
            return s.substr(b0, std::min<std::size_t>(17, s.size() - b0));
        };
        r.context_a = ctx(ca);
        r.context_b = ctx(cb);
    }
    return r;
}

}  // namespace selfpi
