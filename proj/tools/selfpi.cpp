// selfpi.cpp - command-line surface: compute, verify, dynamics, bench,
// selftest.
//
// Exit codes: 0 success (verify: accept), 1 failed check / reject,
// 2 I/O failure, 3 internal invariant violation, 4 inconclusive verdict.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "selfpi/selfpi.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitIo = 2;
constexpr int kExitInternal = 3;
constexpr int kExitInconclusive = 4;

struct ComputeConfig {
    std::int64_t digits = 0;
    std::int64_t bits = 0;
    std::string policy = "third";
    std::string out_path;
    std::string checkpoint_path;
    std::string resume_path;
    std::string trace_path;
};

selfpi::TruncationPolicy parse_policy(const std::string& s) {
    if (s == "full") return selfpi::TruncationPolicy::full;
    if (s == "third") return selfpi::TruncationPolicy::third;
    throw CLI::ValidationError("--policy must be 'full' or 'third'");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw selfpi::ParseError("cannot create file: " + path);
    out << text;
    if (!out) throw selfpi::ParseError("write failed: " + path);
}

int cmd_compute(const ComputeConfig& cfg) {
    using namespace selfpi;
    TruncationPolicy policy = parse_policy(cfg.policy);

    LadderResult result;
    std::string digit_string;
    if (!cfg.resume_path.empty()) {
        std::ifstream in(cfg.resume_path, std::ios::binary);
        if (!in) {
            std::cerr << "selfpi: cannot open checkpoint: " << cfg.resume_path << "\n";
            return kExitIo;
        }
        Checkpoint cp = read_checkpoint(in);
        std::int64_t target_bits = cfg.digits > 0 ? decimals_to_bits(cfg.digits) + 4 : cfg.bits;
        result = resume(cp, target_bits, policy);
        std::int64_t d = cfg.digits > 0 ? cfg.digits : bits_to_decimals(std::max<std::int64_t>(cfg.bits - 6, 4));
        digit_string = to_decimal(result.alpha, d);
    } else if (cfg.digits > 0) {
        result = run_ladder_decimal(cfg.digits, policy);
        digit_string = result.decimal;
    } else {
        result = run_ladder(cfg.bits, policy);
        digit_string = to_decimal(result.alpha, bits_to_decimals(std::max<std::int64_t>(cfg.bits - 6, 4)));
    }

    if (cfg.out_path.empty()) {
        std::cout << digit_string << "\n";
    } else {
        write_digit_file(cfg.out_path, digit_string);
    }
    if (!cfg.checkpoint_path.empty()) {
        std::ostringstream ss;
        write_checkpoint(ss, make_checkpoint(result));
        write_text_file(cfg.checkpoint_path, ss.str());
    }
    if (!cfg.trace_path.empty()) {
        std::ostringstream ss;
        write_trace_csv(ss, result);
        write_text_file(cfg.trace_path, ss.str());
    }
    return kExitOk;
}

int cmd_verify(const std::string& in_path, std::optional<std::int64_t> split,
               const std::string& cross_path, const std::string& csv_path) {
    using namespace selfpi;
    std::string text = read_digit_file(in_path);

    if (!cross_path.empty()) {
        std::string other = read_digit_file(cross_path);
        AgreementReport ar = cross_agree(text, other);
        std::cout << "identical: " << (ar.identical ? "yes" : "no") << "\n"
                  << "common_chars: " << ar.common_chars << "\n"
                  << "common_fraction_digits: " << ar.common_fraction_digits << "\n";
        if (ar.mismatch_fraction_pos) {
            std::cout << "first_disagreement_fraction_pos: " << *ar.mismatch_fraction_pos << "\n"
                      << "context_a: " << ar.context_a << "\n"
                      << "context_b: " << ar.context_b << "\n";
        }
        return ar.identical ? kExitOk : kExitFail;
    }

    VerifyReport r = verify_digits(text, split);
    std::cout << "verdict: " << to_string(r.verdict) << "\n"
              << "n_digits: " << r.n_digits << "\n"
              << "m: " << r.m << "\n"
              << "verified_prefix: " << r.verified_prefix << "\n";
    if (r.first_mismatch) std::cout << "first_mismatch: " << *r.first_mismatch << "\n";
    if (!csv_path.empty()) {
        std::ostringstream ss;
        ss << "verdict,n_digits,m,verified_prefix,first_mismatch\n"
           << to_string(r.verdict) << ',' << r.n_digits << ',' << r.m << ','
           << r.verified_prefix << ',' << (r.first_mismatch ? std::to_string(*r.first_mismatch) : "")
           << "\n";
        write_text_file(csv_path, ss.str());
    }
    if (r.verdict == selfpi::Verdict::accept) return kExitOk;
    if (r.verdict == selfpi::Verdict::reject) return kExitFail;
    return kExitInconclusive;
}

int cmd_dynamics(const std::string& a0_str, std::int64_t tol_bits, std::int64_t max_iter,
                 std::int64_t prec_bits, const std::string& csv_path) {
    using namespace selfpi;
    Precision p(prec_bits);
    FixedReal a0 = from_decimal(a0_str, p);
    OrbitResult r = iterate_orbit(a0, p, max_iter, tol_bits);
    std::cout << "cell_n: " << r.limit.n << "\n"
              << "odd_multiple: " << r.limit.odd_multiple << "\n"
              << "degenerate: " << (r.limit.degenerate ? "yes" : "no") << "\n";
    if (r.limit.near_degenerate) {
        std::cout << "warning: a0 is within working precision of a multiple of 2*pi\n";
    }
    std::cout << "iterations: " << r.records.size() << "\n"
              << "final: " << to_decimal(r.final_a, 30) << "\n";
    if (!csv_path.empty()) {
        std::ostringstream ss;
        write_orbit_csv(ss, r);
        write_text_file(csv_path, ss.str());
    }
    return kExitOk;
}

int cmd_bench(std::int64_t max_bits, int points, const std::string& csv_path) {
    using namespace selfpi;
    BenchReport rep = run_bench(max_bits, points);
    std::ostringstream ss;
    write_bench_csv(ss, rep);
    if (csv_path.empty()) {
        std::cout << ss.str();
    } else {
        write_text_file(csv_path, ss.str());
    }
    std::cout << "slope_third_top_decade: " << rep.slope_third << "\n"
              << "slope_full_top_decade: " << rep.slope_full << "\n";
    return kExitOk;
}

int cmd_selftest() {
    using namespace selfpi;
    int failures = 0;
    auto check = [&failures](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        if (!ok) ++failures;
    };

    Precision p256(256);
    FixedReal pi = pi_oracle(Precision(512));

    // Reference sine values at the classic starting points, 33 decimals each.
    struct Row {
        const char* alpha;
        const char* sin33;
        double eps;
    };
    const Row rows[] = {
        {"3", "0.141120008059867222100744802808110", 4.73e-4},
        {"3.141", "0.000592653555099468066916718249636", 3.47e-11},
        {"3.1415926535", "0.000000000089793238462643383279382", 1.21e-31},
    };
    for (const Row& row : rows) {
        FixedReal a = from_decimal(row.alpha, Precision(256, 128));
        FixedReal s = sin_full(a, p256);
        check(std::string("sin(") + row.alpha + ") to 33 decimals",
              to_decimal(s, 33) == row.sin33);

        // Error bound (pi - alpha)^3 / 6 against the 3-figure reference.
        FixedReal d = sub(pi, a);
        FixedReal e = div(mul(mul(d, d, p256), d, p256), FixedReal(6), p256);
        double ratio = std::exp2(e.log2_abs()) / row.eps;
        check(std::string("eps bound for alpha=") + row.alpha + " within 1%",
              ratio > 0.99 && ratio < 1.01);
    }

    // Decimal schedule and the resulting sequence.
    LadderResult lr = run_ladder_decimal(30);
    bool seq_ok = lr.steps.size() == 3 && lr.steps[0].alpha_decimal == "3.141" &&
                  lr.steps[1].alpha_decimal == "3.1415926535" &&
                  lr.steps[2].alpha_decimal == "3.141592653589793238462643383279";
    check("ladder decimal schedule 3/10/30", seq_ok && lr.steps[0].dec_digits == 3 &&
                                                 lr.steps[1].dec_digits == 10 &&
                                                 lr.steps[2].dec_digits == 30);

    // Ladder against the independent Machin path at 1000 decimals.
    LadderResult big = run_ladder_decimal(1000);
    FixedReal pi_big = pi_oracle(Precision(decimals_to_bits(1000) + 40));
    check("ladder agrees with arctan oracle at 1000 decimals",
          big.decimal == to_decimal(pi_big, 1000));

    check("32-decimal pi reference", to_decimal(pi, 32) == "3.14159265358979323846264338327950");

    std::cout << (failures == 0 ? "selftest: all checks passed\n"
                                : "selftest: FAILURES: " + std::to_string(failures) + "\n");
    return failures == 0 ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pi via the self-correcting iteration x -> x + sin x"};
    app.require_subcommand(1);

    ComputeConfig ccfg;
    CLI::App* compute = app.add_subcommand("compute", "compute pi digits");
    auto* opt_digits = compute->add_option("--digits", ccfg.digits, "target decimal digits");
    auto* opt_bits = compute->add_option("--bits", ccfg.bits, "target bits (error < 2^-bits)");
    compute->add_option("--policy", ccfg.policy, "truncation policy: full|third")
        ->default_val("third");
    compute->add_option("--out", ccfg.out_path, "digit file to write (default: stdout)");
    compute->add_option("--checkpoint", ccfg.checkpoint_path, "write a checkpoint here");
    compute->add_option("--resume", ccfg.resume_path, "resume from this checkpoint");
    compute->add_option("--trace", ccfg.trace_path, "write the per-step CSV trace here");
    opt_digits->excludes(opt_bits);

    std::string v_in, v_cross, v_csv;
    std::int64_t v_split = -1;
    CLI::App* verify = app.add_subcommand("verify", "check a claimed digit file");
    verify->add_option("--in", v_in, "digit file to verify")->required();
    verify->add_option("--split", v_split, "split point m (default floor(n/3)+2)");
    verify->add_option("--cross", v_cross, "second digit file: report agreement instead");
    verify->add_option("--csv", v_csv, "also write the report as CSV");

    std::string d_a0, d_csv;
    std::int64_t d_tol = 64, d_max = 200, d_bits = 192;
    CLI::App* dynamics = app.add_subcommand("dynamics", "iterate x -> x + sin x from a0");
    dynamics->add_option("--a0", d_a0, "starting value (decimal)")->required();
    dynamics->add_option("--tol-bits", d_tol, "stop when |sin a_k| < 2^-tol");
    dynamics->add_option("--max-iter", d_max, "iteration cap");
    dynamics->add_option("--bits", d_bits, "working precision bits");
    dynamics->add_option("--csv", d_csv, "write the orbit as CSV");

    std::int64_t b_max = 1 << 17;
    int b_points = 6;
    std::string b_csv;
    CLI::App* bench = app.add_subcommand("bench", "runtime scaling over a geometric grid");
    bench->add_option("--max-bits", b_max, "largest bit target (>= 1024)");
    bench->add_option("--points", b_points, "grid points");
    bench->add_option("--csv", b_csv, "write measurements as CSV");

    CLI::App* selftest = app.add_subcommand("selftest", "check built-in reference values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) {
            if ((ccfg.digits > 0) == (ccfg.bits > 0)) {
                std::cerr << "selfpi: compute needs exactly one of --digits or --bits\n";
                return kExitIo;
            }
            return cmd_compute(ccfg);
        }
        if (verify->parsed()) {
            std::optional<std::int64_t> split;
            if (v_split >= 0) split = v_split;
            return cmd_verify(v_in, split, v_cross, v_csv);
        }
        if (dynamics->parsed()) return cmd_dynamics(d_a0, d_tol, d_max, d_bits, d_csv);
        if (bench->parsed()) return cmd_bench(b_max, b_points, b_csv);
        if (selftest->parsed()) return cmd_selftest();
    } catch (const selfpi::ParseError& e) {
        std::cerr << "selfpi: " << e.what() << "\n";
        return kExitIo;
    } catch (const selfpi::InvalidCheckpoint& e) {
        std::cerr << "selfpi: invalid checkpoint: " << e.what() << "\n";
        return kExitIo;
    } catch (const selfpi::InternalError& e) {
        std::cerr << "selfpi: internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "selfpi: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitOk;
}
