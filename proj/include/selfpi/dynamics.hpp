#pragma once
// dynamics.hpp - orbits of a_{k+1} = a_k + sin(a_k) and their limits.
//
// For a_0 not a multiple of 2pi the orbit converges to the odd multiple of
// pi nearest in the 2pi-cell of a_0: with n = floor((a_0 + pi)/2pi) and
// b_0 = a_0 - 2n pi, the limit is (2n+1)pi when b_0 > 0 and (2n-1)pi when
// b_0 < 0. Iteration runs on the reduced b_k so every sine argument stays
// inside (-pi, pi]; the 2n pi offset is reattached only for reporting. The
// classification is computed up front from a_0 and then checked against the
// orbit tail; a disagreement is an internal error, never a silent fix.

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "selfpi/errors.hpp"
#include "selfpi/fixed_real.hpp"
#include "selfpi/series.hpp"

namespace selfpi {

struct OrbitRecord {
    std::int64_t k = 0;
    FixedReal a;         // a_k (offset reattached)
    FixedReal step;      // sin a_k
    FixedReal residual;  // |sin a_k|, the convergence gauge
};

struct LimitClass {
    std::int64_t n = 0;             // cell index: limit = (2n +- 1) pi
    std::int64_t odd_multiple = 0;  // signed odd coefficient; 2n if degenerate
    bool degenerate = false;        // a_0 = 0 (mod 2pi): orbit is constant
    bool near_degenerate = false;   // |b_0| too small to distinguish from 0
};

struct OrbitResult {
    std::vector<OrbitRecord> records;
    LimitClass limit;
    FixedReal final_a;
};

// Reduce a to b = a - 2n pi with -pi < b <= pi, n = floor((a + pi)/2pi).
// pi comes from the Machin oracle at p.working() + 8 bits.
inline std::pair<FixedReal, std::int64_t> reduce_mod_2pi(const FixedReal& a, const Precision& p) {
    std::int64_t w = p.working();
    if (a.is_zero()) return {FixedReal(mpz_class(0), w), 0};
    FixedReal pi = pi_oracle(Precision(w + 8, 0));
    FixedReal two_pi(pi.mantissa(), pi.scale() - 1);

    bool neg = a.is_negative();
    FixedReal mag = neg ? a.negated() : a;

    FixedReal q = div(add(mag, pi), two_pi, Precision(w + 8, 0));
    mpz_class n_z;
    mpz_fdiv_q_2exp(n_z.get_mpz_t(), q.mantissa().get_mpz_t(),
                    static_cast<mp_bitcnt_t>(q.scale()));
    if (!n_z.fits_slong_p()) throw ArgumentOutOfRange("reduce_mod_2pi: argument too large");
    auto n = static_cast<std::int64_t>(n_z.get_si());

    FixedReal b = sub(mag, mul(two_pi, FixedReal(n_z, 0), Precision(w + 8, 0))).rescaled(w);
    // Floor on a truncated quotient can land one cell off; fix by value.
    while (b > pi) {
        b = sub(b, two_pi).rescaled(w);
        ++n;
    }
    while (b <= pi.negated()) {
        b = add(b, two_pi).rescaled(w);
        --n;
    }
    if (neg) {
        // Mirror the positive reduction so orbit(-a) = -orbit(a) exactly.
        if (b == pi) return {b, -n - 1};
        return {b.negated(), -n};
    }
    return {b, n};
}

// Iterate until |sin a_k| < 2^-tol_bits or max_iter. Requires
// p.bits >= tol_bits + 2 so the tolerance is meaningful at the working
// precision.
inline OrbitResult iterate_orbit(const FixedReal& a0, const Precision& p,
                                 std::int64_t max_iter = 200, std::int64_t tol_bits = 64) {
    if (max_iter < 1) throw ArgumentOutOfRange("iterate_orbit: max_iter must be >= 1");
    if (p.bits < tol_bits + 2) {
        throw ArgumentOutOfRange("iterate_orbit: precision must exceed tol_bits + 2");
    }
    std::int64_t w = p.working();
    auto [b0, n] = reduce_mod_2pi(a0, p);

    OrbitResult res;
    res.limit.n = n;

    FixedReal tol = FixedReal::pow2(-tol_bits);
    // Reported a_k is the exact running sum a_{k+1} = a_k + sin a_k at the
    // working scale; the reduced b_k drives the iteration.
    FixedReal a_cur = a0.rescaled(w);

    // a_0 = 0 (mod 2pi) up to representable resolution: constant orbit.
    FixedReal b_abs = b0.abs_value();
    if (b_abs < FixedReal::pow2(-(p.bits - 2))) {
        res.limit.degenerate = true;
        res.limit.odd_multiple = 2 * n;
        FixedReal s0 = b0.is_zero() ? FixedReal(mpz_class(0), w) : sin_full(b0, p);
        res.records.push_back({0, a_cur, s0, s0.abs_value()});
        res.final_a = a_cur;
        return res;
    }
    res.limit.near_degenerate = b_abs < FixedReal::pow2(-(p.bits / 2));
    res.limit.odd_multiple = (b0.sign() > 0) ? 2 * n + 1 : 2 * n - 1;

    FixedReal b = b0;
    for (std::int64_t k = 0; k < max_iter; ++k) {
        FixedReal s = sin_full(b, p);
        res.records.push_back({k, a_cur, s, s.abs_value()});
        // |sin| is also small near the repelling even multiples; only
        // |b| > 1 identifies the attracting odd one.
        if (s.abs_value() < tol && b.abs_value() > FixedReal(1)) {
            res.final_a = a_cur;
            // Cross-check the analytic class against the orbit tail.
            std::int64_t target = res.limit.odd_multiple - 2 * n;  // +-1
            FixedReal pi = pi_oracle(Precision(w + 8, 0)).rescaled(w);
            FixedReal gap = sub(b, target > 0 ? pi : pi.negated()).abs_value();
            if (gap > FixedReal::pow2(-(tol_bits - 1))) {
                throw InternalError("iterate_orbit: orbit limit disagrees with classification");
            }
            return res;
        }
        b = add(b, s).rescaled(w);
        a_cur = add(a_cur, s);
    }
    throw NonConvergence("iterate_orbit: residual above tolerance after max_iter steps");
}

// CSV emission: k, a_k (30 decimals), sin_a_k (30 decimals), log2_residual.
inline void write_orbit_csv(std::ostream& os, const OrbitResult& r) {
    os << "k,a,sin_a,log2_residual\n";
    for (const OrbitRecord& rec : r.records) {
        os << rec.k << ',' << to_decimal(rec.a, 30) << ',' << to_decimal(rec.step, 30) << ','
           << rec.residual.log2_abs() << '\n';
    }
}

}  // namespace selfpi
