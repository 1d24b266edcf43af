#pragma once
// corrector.hpp - the self-correcting step alpha' = alpha + sin(alpha) and
// the precision ladder built on it, with truncation policy, checkpointing,
// and trace emission.
//
// One step cubes the error: |pi - alpha| < eps < 1 implies
// |pi - alpha'| < eps^3/6, and alpha < pi implies alpha < alpha' < pi.
// The ladder therefore triples its working precision per iteration and the
// error bookkeeping follows the rigorous recurrence
//     eps_{k+1} = eps_k^3 / 6 + 2^-(w_k - 16),
// where w_k is the step's working width and the 2^-(w_k-16) term covers
// sine evaluation, snapping, and result truncation (all well inside that
// budget; see series.hpp). Bound arithmetic always rounds up.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "selfpi/errors.hpp"
#include "selfpi/fixed_real.hpp"
#include "selfpi/series.hpp"

namespace selfpi {

enum class TruncationPolicy {
    full,   // keep every working bit between iterations
    third,  // feed each step roughly a third of its target precision
};

inline const char* to_string(TruncationPolicy p) {
    return p == TruncationPolicy::full ? "full" : "third";
}

struct LadderStep {
    std::int64_t k = 0;
    Precision p = Precision(1, 0);  // bits = step target, working = bits + guard
    FixedReal alpha_in;          // input after policy truncation
    FixedReal alpha_out;
    FixedReal eps_bound;         // rigorous upper bound on pi - alpha_out
    double wall_ms = 0.0;
    std::string alpha_decimal;   // exact decimal form when the step truncated
                                 // to a decimal grid (decimal schedule only)
    std::int64_t dec_digits = 0;
};

struct LadderResult {
    FixedReal alpha;
    std::vector<LadderStep> steps;
    std::string decimal;  // final digit string when run on a decimal target
};

namespace detail {

// ---- upper-bound arithmetic on small positive FixedReals ----------------
// Bounds carry at most ~64 mantissa bits; every operation rounds up, so a
// bound stays a bound no matter how the ladder composes them.

inline FixedReal bound_compact_up(const FixedReal& b, std::int64_t keep = 64) {
    std::int64_t extra = bit_length(b.mantissa()) - keep;
    if (extra <= 0) return b;
    std::int64_t ns = b.scale() - extra;
    if (ns < 0) return FixedReal(cshr(b.mantissa(), b.scale()), 0);
    return FixedReal(cshr(b.mantissa(), extra), ns);
}

inline FixedReal bound_cube_div6_up(const FixedReal& b) {
    mpz_class m3 = b.mantissa() * b.mantissa() * b.mantissa();
    return bound_compact_up(FixedReal(cdiv(m3, 6), 3 * b.scale()));
}

inline FixedReal bound_add_up(const FixedReal& a, const FixedReal& b) {
    return bound_compact_up(add(a, b));
}

// b * 1025/1024, rounded up; folds sub-leading series terms into a bound.
inline FixedReal bound_inflate_up(const FixedReal& b) {
    return bound_compact_up(FixedReal(cdiv(b.mantissa() * 1025, 1024), b.scale()));
}

// Largest t with |x| <= 2^-t (x != 0), i.e. floor(-log2 |x|) adjusted so
// the inequality is exact.
inline std::int64_t floor_neg_log2(const FixedReal& x) {
    if (x.is_zero()) throw InternalError("floor_neg_log2 of zero");
    std::int64_t t = x.scale() - bit_length(x.mantissa());
    // |m| <= 2^(bitlen) always, with equality only at powers of two.
    mpz_class p2 = shl(1, bit_length(x.mantissa()) - 1);
    if (abs(x.mantissa()) == p2) ++t;
    return t;
}

// Largest t with |x| <= 10^-t (x != 0, |x| < 1).
inline std::int64_t floor_neg_log10(const FixedReal& x) {
    if (x.is_zero()) throw InternalError("floor_neg_log10 of zero");
    double est = -x.log2_abs() * 0.30102999566398119521;
    auto t = std::max<std::int64_t>(static_cast<std::int64_t>(est), 0);
    mpz_class am = abs(x.mantissa());
    // |m| * 10^t <= 2^scale  <=>  |x| <= 10^-t
    while (am * pow10(t + 1) <= shl(1, x.scale())) ++t;
    while (t > 0 && am * pow10(t) > shl(1, x.scale())) --t;
    return t;
}

// floor(x * 10^d) for x > 0.
inline mpz_class floor_scaled_pow10(const FixedReal& x, std::int64_t d) {
    mpz_class t = x.mantissa() * pow10(d);
    return shr_trunc(t, x.scale());
}

inline std::string format_decimal_units(const mpz_class& units, std::int64_t frac_digits) {
    std::string ds = units.get_str();
    auto d = static_cast<std::size_t>(frac_digits);
    if (ds.size() <= d) ds.insert(0, d + 1 - ds.size(), '0');
    std::string out;
    out.append(ds, 0, ds.size() - d);
    out += '.';
    out.append(ds, ds.size() - d, d);
    return out;
}

// FixedReal upper bound on 10^-d.
inline FixedReal bound_pow10_neg_up(std::int64_t d) {
    std::int64_t s = pow10_bits(d) + 64;
    return FixedReal(cdiv(shl(1, s), pow10(d)), s);
}

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double, std::milli>(dt).count();
}

inline std::int64_t pow3(std::int64_t k) {
    std::int64_t r = 1;
    while (k-- > 0) r *= 3;
    return r;
}

inline std::int64_t ceil_log3(std::int64_t n) {
    std::int64_t m = 0, p = 1;
    while (p < n) {
        p *= 3;
        ++m;
    }
    return m;
}

}  // namespace detail

// One self-correcting step at the given precision. Requires |pi - alpha| < 1
// (guaranteed along the ladder); the result is truncated toward zero at the
// working width, which preserves the one-sided bracket alpha < alpha' < pi.
inline FixedReal correct_step(const FixedReal& alpha, const Precision& p) {
    FixedReal s = sin_full(alpha, p);
    return add(alpha, s).rescaled(p.working());
}

// Input conditioning for the next ladder rung: under `third`, the next step
// needs only ~bits/3 of its target precision, so the rest is dropped. The
// representation scale is the accuracy proxy; callers (the ladder) maintain
// scale >= accuracy.
inline FixedReal truncate_for_next(const FixedReal& alpha, const Precision& next_p,
                                   TruncationPolicy policy) {
    if (policy == TruncationPolicy::full) return alpha;
    std::int64_t keep = (next_p.bits + 2) / 3 + next_p.guard;
    if (alpha.scale() < (next_p.bits + 2) / 3) {
        throw InsufficientAccuracy("truncate_for_next: input narrower than bits/3");
    }
    if (keep >= alpha.scale()) return alpha;
    return truncate(alpha, keep);
}

// Precision ladder: alpha_0 = 3, m = ceil(log3 n_bits). Under `third`,
// step k runs at min(3^k, n_bits) + guard working bits with its input cut
// to a third of that; under `full`, every step runs at the final width and
// nothing is ever dropped (the AGM-style cost model the truncation remark
// is measured against). Returns alpha with pi - alpha < 2^-n_bits and the
// per-step trace. Exits early if the error bound clears the target sooner.
inline LadderResult run_ladder(std::int64_t n_bits, TruncationPolicy policy = TruncationPolicy::third,
                               std::int64_t guard = Precision::kDefaultGuard) {
    if (n_bits < 1) throw ArgumentOutOfRange("run_ladder: n_bits must be >= 1");
    LadderResult res;
    res.alpha = FixedReal(3);
    // eps_0 = 154/1024 = 0.1504..., a safe over-estimate of pi - 3.
    FixedReal eps(154, 10);
    FixedReal target = FixedReal::pow2(-n_bits);
    if (eps <= target) return res;

    std::int64_t m = detail::ceil_log3(n_bits);
    for (std::int64_t k = 1; k <= m; ++k) {
        auto t0 = std::chrono::steady_clock::now();
        std::int64_t bits = policy == TruncationPolicy::full ? n_bits
                                                             : std::min(detail::pow3(k), n_bits);
        Precision p(bits, guard);
        std::int64_t w = p.working();

        FixedReal in = res.alpha;
        FixedReal eps_in = eps;
        if (policy == TruncationPolicy::third && k > 1) {
            in = truncate_for_next(res.alpha, p, policy);
            eps_in = detail::bound_add_up(eps, FixedReal::pow2(-in.scale()));
        }
        // Subtracting the step's rigorous computation margin keeps the
        // bracket alpha < pi strict at the computed level too.
        FixedReal out = sub(correct_step(in, p), FixedReal::pow2(-(w - 16)));
        eps = detail::bound_add_up(detail::bound_cube_div6_up(eps_in), FixedReal::pow2(-(w - 17)));

        LadderStep step;
        step.k = k;
        step.p = p;
        step.alpha_in = in;
        step.alpha_out = out;
        step.eps_bound = eps;
        step.wall_ms = detail::elapsed_ms(t0);
        res.steps.push_back(std::move(step));
        res.alpha = out;
        if (eps <= target) break;
    }
    if (eps > target) throw InternalError("run_ladder: bound did not reach target");
    return res;
}

// Decimal-scheduled ladder for digit targets. Each step measures its own
// error through the sine it just computed (pi - alpha ~ sin alpha for alpha
// near pi), truncates the new iterate to n_k = floor(-log10 eps_k) decimal
// places, and stops once n_k reaches the requested digits. This is the
// schedule that makes early iterations nearly free: the step that produces
// n correct decimals consumes an input with only ~n/3 of them.
inline LadderResult run_ladder_decimal(std::int64_t digits,
                                       TruncationPolicy policy = TruncationPolicy::third,
                                       std::int64_t guard = Precision::kDefaultGuard) {
    if (digits < 1) throw ArgumentOutOfRange("run_ladder_decimal: digits must be >= 1");
    LadderResult res;
    res.alpha = FixedReal(3);
    std::int64_t final_bits = decimals_to_bits(digits) + 4;
    std::int64_t cur_dec = 0;
    std::int64_t k = 0;
    for (;;) {
        auto t0 = std::chrono::steady_clock::now();
        ++k;
        std::int64_t eff = std::max<std::int64_t>(cur_dec, 1);
        std::int64_t bits = policy == TruncationPolicy::full
                                ? final_bits
                                : std::min(decimals_to_bits(3 * eff + 4), final_bits);
        Precision p(bits, guard);
        std::int64_t w = p.working();

        FixedReal in = res.alpha.scale() > w ? truncate(res.alpha, w) : res.alpha;
        FixedReal s = sin_full(in, p);
        FixedReal raw = sub(add(in, s).rescaled(w), FixedReal::pow2(-(w - 16)));

        // delta = pi - in satisfies sin(delta) = s and delta = s + s^3/6 + ...
        // The 1025/1024 inflation dominates the dropped s^5 tail and the
        // sine evaluation error for every step the ladder can produce.
        FixedReal s_abs = s.abs_value();
        FixedReal delta_up = detail::bound_inflate_up(detail::bound_add_up(
            detail::bound_add_up(s_abs, detail::bound_cube_div6_up(detail::bound_compact_up(s_abs))),
            FixedReal::pow2(-(w - 17))));
        FixedReal eps_up = detail::bound_add_up(detail::bound_cube_div6_up(delta_up),
                                                FixedReal::pow2(-(w - 17)));

        std::int64_t certified = detail::floor_neg_log10(eps_up);
        bool final = certified >= digits;
        std::int64_t n_k = final ? digits : certified;
        if (!final && n_k <= cur_dec) throw InternalError("run_ladder_decimal: schedule stalled");

        LadderStep step;
        step.k = k;
        step.p = p;
        step.alpha_in = in;
        step.dec_digits = n_k;
        if (policy == TruncationPolicy::third || final) {
            mpz_class units = detail::floor_scaled_pow10(raw, n_k);
            step.alpha_decimal = detail::format_decimal_units(units, n_k);
            FixedReal quantized(detail::tdiv(detail::shl(units, w), detail::pow10(n_k)), w);
            step.alpha_out = quantized;
            step.eps_bound = detail::bound_add_up(
                detail::bound_add_up(eps_up, detail::bound_pow10_neg_up(n_k)),
                FixedReal::pow2(-w));
            if (final) res.decimal = step.alpha_decimal;
        } else {
            step.alpha_out = raw;
            step.eps_bound = eps_up;
        }
        step.wall_ms = detail::elapsed_ms(t0);
        res.alpha = step.alpha_out;
        res.steps.push_back(std::move(step));
        cur_dec = n_k;
        if (final) break;
        if (k > 64) throw InternalError("run_ladder_decimal: too many iterations");
    }
    if (res.decimal.empty()) res.decimal = to_decimal(res.alpha, digits);
    return res;
}

// ---- checkpoints ---------------------------------------------------------

struct Checkpoint {
    FixedReal alpha;
    std::int64_t proven_bits = 0;  // guaranteed pi - alpha < 2^-proven_bits
    std::int64_t k = 0;
    std::int64_t format_version = 1;
};

inline Checkpoint make_checkpoint(const LadderResult& r) {
    if (r.steps.empty()) return Checkpoint{r.alpha, 2, 0, 1};
    const LadderStep& last = r.steps.back();
    return Checkpoint{r.alpha, detail::floor_neg_log2(last.eps_bound), last.k, 1};
}

// Versioned ASCII header plus lowercase hex mantissa; round-trips bit-exactly.
inline void write_checkpoint(std::ostream& os, const Checkpoint& cp) {
    os << "selfpi-checkpoint " << cp.format_version << "\n"
       << "k " << cp.k << "\n"
       << "proven_bits " << cp.proven_bits << "\n"
       << "scale " << cp.alpha.scale() << "\n"
       << "mantissa " << cp.alpha.mantissa().get_str(16) << "\n";
}

inline Checkpoint read_checkpoint(std::istream& is) {
    auto fail = [](const std::string& why) -> Checkpoint { throw InvalidCheckpoint(why); };
    std::string magic;
    Checkpoint cp;
    if (!(is >> magic) || magic != "selfpi-checkpoint") return fail("bad magic");
    if (!(is >> cp.format_version) || cp.format_version != 1) return fail("unsupported version");
    std::string key;
    std::int64_t scale = 0;
    std::string mant_hex;
    if (!(is >> key) || key != "k" || !(is >> cp.k) || cp.k < 0) return fail("bad k");
    if (!(is >> key) || key != "proven_bits" || !(is >> cp.proven_bits) || cp.proven_bits < 1)
        return fail("bad proven_bits");
    if (!(is >> key) || key != "scale" || !(is >> scale) || scale < 0) return fail("bad scale");
    if (!(is >> key) || key != "mantissa" || !(is >> mant_hex) || mant_hex.empty())
        return fail("bad mantissa");
    mpz_class m;
    if (mpz_set_str(m.get_mpz_t(), mant_hex.c_str(), 16) != 0) return fail("malformed hex mantissa");
    cp.alpha = FixedReal(std::move(m), scale);
    return cp;
}

// Structural validation plus a coarse consistency check against the Machin
// oracle. Errors below 2^-118 cannot be confirmed this cheaply; certifying
// those is the verifier's job.
inline void validate_checkpoint(const Checkpoint& cp) {
    if (cp.format_version != 1) throw InvalidCheckpoint("unsupported format_version");
    if (cp.proven_bits < 1) throw InvalidCheckpoint("proven_bits must be >= 1");
    if (cp.k < 0) throw InvalidCheckpoint("negative iteration index");
    FixedReal pi = pi_oracle(Precision(128));
    FixedReal d = sub(pi, cp.alpha);
    if (d < FixedReal::pow2(-120).negated()) throw InvalidCheckpoint("alpha exceeds pi");
    FixedReal claim = FixedReal::pow2(-std::min<std::int64_t>(cp.proven_bits, 118));
    if (d > add(claim, FixedReal::pow2(-120))) throw InvalidCheckpoint("alpha misses its proven_bits claim");
}

// Continue a validated checkpoint toward n_bits, tripling the certified
// width per step.
inline LadderResult resume(const Checkpoint& cp, std::int64_t n_bits,
                           TruncationPolicy policy = TruncationPolicy::third,
                           std::int64_t guard = Precision::kDefaultGuard) {
    if (n_bits < 1) throw ArgumentOutOfRange("resume: n_bits must be >= 1");
    validate_checkpoint(cp);
    LadderResult res;
    res.alpha = cp.alpha;
    FixedReal eps = FixedReal::pow2(-cp.proven_bits);
    FixedReal target = FixedReal::pow2(-n_bits);
    std::int64_t k = cp.k;
    while (eps > target) {
        auto t0 = std::chrono::steady_clock::now();
        ++k;
        std::int64_t proven = detail::floor_neg_log2(eps);
        std::int64_t bits = std::min(3 * std::max<std::int64_t>(proven, 1) + 2, n_bits);
        Precision p(bits, guard);
        FixedReal in = res.alpha;
        FixedReal eps_in = eps;
        if (policy == TruncationPolicy::third) {
            std::int64_t keep = std::max<std::int64_t>(proven, (bits + 2) / 3) + guard;
            if (keep < res.alpha.scale()) {
                in = truncate(res.alpha, keep);
                eps_in = detail::bound_add_up(eps, FixedReal::pow2(-keep));
            }
        }
        FixedReal out = sub(correct_step(in, p), FixedReal::pow2(-(p.working() - 16)));
        eps = detail::bound_add_up(detail::bound_cube_div6_up(eps_in),
                                   FixedReal::pow2(-(p.working() - 17)));
        LadderStep step;
        step.k = k;
        step.p = p;
        step.alpha_in = in;
        step.alpha_out = out;
        step.eps_bound = eps;
        step.wall_ms = detail::elapsed_ms(t0);
        res.steps.push_back(std::move(step));
        res.alpha = out;
        if (k > cp.k + 64) throw InternalError("resume: too many iterations");
    }
    return res;
}

// Trace export: k, bits, eps_bound_log2, wall_ms, alpha_prefix(20 decimals).
inline void write_trace_csv(std::ostream& os, const LadderResult& r) {
    os << "k,bits,eps_bound_log2,wall_ms,alpha_prefix\n";
    auto prefix20 = [](const LadderStep& s) {
        if (!s.alpha_decimal.empty()) {
            auto dot = s.alpha_decimal.find('.');
            std::string frac = s.alpha_decimal.substr(dot + 1);
            if (frac.size() < 20) frac.append(20 - frac.size(), '0');
            return s.alpha_decimal.substr(0, dot) + "." + frac.substr(0, 20);
        }
        return to_decimal(s.alpha_out, 20);
    };
    if (r.steps.empty() || r.steps.front().k == 1) {
        os << "0,2," << FixedReal(154, 10).log2_abs() << ",0,3.00000000000000000000\n";
    }
    for (const LadderStep& s : r.steps) {
        os << s.k << ',' << s.p.bits << ',' << s.eps_bound.log2_abs() << ',' << s.wall_ms << ','
           << prefix20(s) << '\n';
    }
}

}  // namespace selfpi
