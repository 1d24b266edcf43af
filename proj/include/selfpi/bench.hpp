#pragma once
// bench.hpp - runtime-scaling measurements for the ladder.
//
// Runs the full ladder over a geometric grid of bit targets under both
// truncation policies and reports wall times plus the fitted log-log slope
// over the top decade. This gathers scaling evidence only; it proves
// nothing about asymptotic complexity and does not try to.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "selfpi/corrector.hpp"

namespace selfpi {

struct BenchRow {
    std::int64_t n_bits = 0;
    TruncationPolicy policy = TruncationPolicy::third;
    double wall_ms = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double slope_third = 0.0;  // d log(time) / d log(bits), top decade
    double slope_full = 0.0;
};

namespace detail {

inline double time_ladder_ms(std::int64_t n_bits, TruncationPolicy policy) {
    // Repeat fast runs so timer noise cannot reorder the grid.
    double best = -1.0;
    double total = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        LadderResult r = run_ladder(n_bits, policy);
        double ms = elapsed_ms(t0);
        if (r.alpha.is_zero()) throw InternalError("bench: ladder returned zero");
        if (best < 0 || ms < best) best = ms;
        total += ms;
        if (total > 250.0 && rep >= 1) break;
    }
    return best;
}

inline double fit_top_decade_slope(const std::vector<BenchRow>& rows, TruncationPolicy policy,
                                   std::int64_t max_bits) {
    // Least squares on (log n, log t) restricted to n >= max_bits / 10.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const BenchRow& r : rows) {
        if (r.policy != policy || r.n_bits * 10 < max_bits || r.wall_ms <= 0) continue;
        double x = std::log(static_cast<double>(r.n_bits));
        double y = std::log(r.wall_ms);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

}  // namespace detail

inline BenchReport run_bench(std::int64_t max_bits, int points) {
    if (max_bits < (1 << 10)) throw ArgumentOutOfRange("run_bench: max_bits must be >= 1024");
    if (points < 2) throw ArgumentOutOfRange("run_bench: need at least 2 points");
    BenchReport rep;
    double lo = 10.0 * std::log(2.0);  // grid starts at 1024 bits
    double hi = std::log(static_cast<double>(max_bits));
    std::vector<std::int64_t> grid;
    for (int i = 0; i < points; ++i) {
        double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        auto n = static_cast<std::int64_t>(std::llround(std::exp(t)));
        if (grid.empty() || n > grid.back()) grid.push_back(n);
    }
    for (TruncationPolicy pol : {TruncationPolicy::third, TruncationPolicy::full}) {
        for (std::int64_t n : grid) {
            rep.rows.push_back({n, pol, detail::time_ladder_ms(n, pol)});
        }
    }
    rep.slope_third = detail::fit_top_decade_slope(rep.rows, TruncationPolicy::third, max_bits);
    rep.slope_full = detail::fit_top_decade_slope(rep.rows, TruncationPolicy::full, max_bits);
    return rep;
}

inline void write_bench_csv(std::ostream& os, const BenchReport& rep) {
    os << "n_bits,policy,wall_ms\n";
    for (const BenchRow& r : rep.rows) {
        os << r.n_bits << ',' << to_string(r.policy) << ',' << r.wall_ms << '\n';
    }
}

}  // namespace selfpi
