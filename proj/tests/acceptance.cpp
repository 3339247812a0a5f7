// End-to-end acceptance checks. Each check prints one [PASS]/[FAIL] line with
// its runtime; the binary exits nonzero if any check fails or overruns its
// time budget.

#include <mcturing/corpus.hpp>
#include <mcturing/mcturing.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"

using namespace mcturing;
using namespace mcturing::testing;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Failure {
    std::string detail;
};

void expect(bool cond, const std::string& detail) {
    if (!cond) throw Failure{detail};
}

using Body = std::function<void()>;

bool run_check(int index, const std::string& label, double limit_seconds, const Body& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        body();
    } catch (const Failure& f) {
        out.ok = false;
        out.detail = f.detail;
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.ok && elapsed >= limit_seconds) {
        out.ok = false;
        out.detail = "time limit exceeded";
    }
    std::printf("[%s] %2d. %s (%.1f ms, limit %.0f ms)\n", out.ok ? "PASS" : "FAIL", index,
                label.c_str(), elapsed * 1e3, limit_seconds * 1e3);
    if (!out.ok && !out.detail.empty()) std::printf("       %s\n", out.detail.c_str());
    return out.ok;
}

Trit mux3(const TritWord& x) { return x[2] == Trit::one ? x[1] : x[0]; }

std::function<TritWord(const TritWord&)> table_fn(const std::vector<Trit>& table, std::size_t n) {
    return [table, n](const TritWord& x) {
        (void)n;
        return TritWord{table[word_to_index(x)]};
    };
}

std::function<TritWord(const TritWord&)> machine_fn(const MachineRef& m) {
    return [m](const TritWord& x) {
        SimOutcome out = simulate(m, x, 100000);
        expect(out.halted, "oracle run did not halt");
        return out.output;
    };
}

// every word above x: stable positions fixed, u positions free over {0,1,u}
std::vector<TritWord> words_above(const TritWord& x) {
    std::vector<TritWord> out{x};
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != Trit::u) continue;
        std::vector<TritWord> next;
        for (const TritWord& w : out)
            for (Trit t : {Trit::u, Trit::zero, Trit::one}) {
                TritWord y = w;
                y.set(i, t);
                next.push_back(y);
            }
        out = std::move(next);
    }
    return out;
}

// halts immediately on a leading 0, loops forever otherwise
const char* kHaltOnZero =
    "states: start loop done\n"
    "start: start\n"
    "final: done\n"
    "start, 0 -> done, 0, L\n"
    "start, 1 -> loop, 1, R\n"
    "start, u -> loop, u, R\n"
    "start, _ -> loop, _, R\n"
    "loop, 0 -> loop, 0, R\n"
    "loop, 1 -> loop, 1, R\n"
    "loop, u -> loop, u, R\n"
    "loop, _ -> loop, _, R\n";

void check_gate_tables() {
    struct Row {
        char a, b, y;
    };
    const Row and_rows[] = {{'0', '0', '0'}, {'0', '1', '0'}, {'0', 'u', '0'},
                            {'1', '0', '0'}, {'1', '1', '1'}, {'1', 'u', 'u'},
                            {'u', '0', '0'}, {'u', '1', 'u'}, {'u', 'u', 'u'}};
    const Row or_rows[] = {{'0', '0', '0'}, {'0', '1', '1'}, {'0', 'u', 'u'},
                           {'1', '0', '1'}, {'1', '1', '1'}, {'1', 'u', '1'},
                           {'u', '0', 'u'}, {'u', '1', '1'}, {'u', 'u', 'u'}};
    for (const Row& r : and_rows)
        expect(and_u(trit_from_char(r.a), trit_from_char(r.b)) == trit_from_char(r.y),
               std::string("and_u(") + r.a + "," + r.b + ")");
    for (const Row& r : or_rows)
        expect(or_u(trit_from_char(r.a), trit_from_char(r.b)) == trit_from_char(r.y),
               std::string("or_u(") + r.a + "," + r.b + ")");
    expect(not_u(Trit::zero) == Trit::one, "not_u(0)");
    expect(not_u(Trit::one) == Trit::zero, "not_u(1)");
    expect(not_u(Trit::u) == Trit::u, "not_u(u)");
}

void check_cmux_closure() {
    auto spec = [](const TritWord& x) { return TritWord{mux3(x)}; };
    for (std::size_t idx = 0; idx < 27; ++idx) {
        TritWord x = TernaryTable::word_at(idx, 3);
        Trit got = cmux_bit(x[0], x[1], x[2]);
        Trit want = closure_oracle(spec, x)[0];
        expect(got == want, "cmux(" + x.str() + ") = " + std::string(1, to_char(got)) +
                                ", closure gives " + std::string(1, to_char(want)));
    }
    expect(cmux_bit(Trit::one, Trit::one, Trit::u) == Trit::one, "cmux(1,1,u) must contain");
}

void check_closure_laws() {
    std::mt19937_64 rng(501);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + trial % 3;
        auto table = random_boolean_table(rng, n);
        auto fn = table_fn(table, n);
        for (std::size_t idx = 0; idx < pow3(n); ++idx) {
            TritWord x = TernaryTable::word_at(idx, n);
            TritWord cx = closure_oracle(fn, x);
            if (x.stable())
                expect(cx == fn(x), "closure deviates on stable " + x.str());
            for (const TritWord& y : words_above(x))
                expect(leq_word(cx, closure_oracle(fn, y)),
                       "closure not monotone between " + x.str() + " and " + y.str());
            std::vector<TritWord> res;
            for (const TritWord& w : Resolution(x)) res.push_back(w);
            expect(superpose_all(res) == x, "superposed resolutions of " + x.str());
        }
    }
}

void check_hazard_checks() {
    for (std::size_t levels : {1, 2}) {
        HazardReport r = is_hazard_free(build_cmux_tree(levels));
        expect(r.hazard_free && r.exhaustive,
               "cmux tree levels=" + std::to_string(levels) + " not certified");
    }
    HazardCheckOptions opts;
    opts.samples = 10'000;
    Circuit three = build_cmux_tree(3);
    HazardReport sampled = is_hazard_free(three, opts);
    expect(sampled.hazard_free, "cmux tree levels=3 flagged");
    expect(!sampled.exhaustive && sampled.checked >= 10'000, "levels=3 sweep too small");

    HazardReport mux = is_hazard_free(build_mux_bit());
    expect(!mux.hazard_free, "plain mux certified hazard-free");
    expect(eval_kleene(build_mux_bit(), mux.witness) == mux.actual, "mux witness actual value");
    auto spec = [](const TritWord& x) { return TritWord{mux3(x)}; };
    expect(closure_oracle(spec, mux.witness) == mux.expected, "mux witness expected value");
}

void check_naturalness() {
    TernaryTable d = TernaryTable::from_function(1, [](const TritWord& x) {
        return x[0] == Trit::u ? Trit::one : Trit::zero;
    });
    TernaryTable r = TernaryTable::from_function(1, [](const TritWord& x) {
        return x[0] == Trit::u ? Trit::one : x[0];
    });
    for (const TernaryTable* t : {&d, &r}) {
        NaturalnessReport rep = is_natural(*t);
        expect(rep.verdict == NaturalnessReport::Verdict::NotMonotone, "detector not rejected");
        expect(rep.witness_x.u_count() > 0 && rep.witness_y.stable(),
               "witness pair is not (unstable, stable)");
    }
    std::mt19937_64 rng(502);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + trial % 3;
        auto fn = table_fn(random_boolean_table(rng, n), n);
        TernaryTable t = TernaryTable::from_function(
            n, [&](const TritWord& x) { return closure_oracle(fn, x)[0]; });
        expect(is_natural(t).natural(), "closure table rejected");
    }
}

void check_selection_example() {
    std::mt19937_64 rng(503);
    TritWord s = TritWord::parse("11u0");
    for (int trial = 0; trial < 100; ++trial) {
        TritWord y = random_stable_word(rng, 16);
        SelectionTape tape = SelectionTape::from_word(y);
        Trit got = t_cmux(tape, s).value;
        Trit want = superpose(TritWord{y[12]}, TritWord{y[14]})[0];
        expect(got == want, "selection mismatch on " + y.str());
    }
}

void check_selection_cost() {
    std::mt19937_64 rng(504);
    for (std::size_t levels = 1; levels <= 10; ++levels) {
        SelectionTape tape = SelectionTape::from_word(
            random_word(rng, std::size_t(1) << levels));
        TCmuxResult r = t_cmux(tape, random_word(rng, levels));
        expect(r.cmux_applications == (std::uint64_t(1) << levels) - 1,
               "application count at levels=" + std::to_string(levels));
    }
    for (std::size_t levels = 1; levels <= 6; ++levels) {
        std::vector<std::size_t> reference;
        for (int trial = 0; trial < 100; ++trial) {
            SelectionTape tape = SelectionTape::from_word(
                random_word(rng, std::size_t(1) << levels));
            TCmuxResult r = t_cmux(tape, random_word(rng, levels));
            if (trial == 0)
                reference = r.trajectory;
            else
                expect(r.trajectory == reference,
                       "trajectory varies at levels=" + std::to_string(levels));
        }
    }
}

void check_universal_matches_closure() {
    for (const char* name : {"parity", "and", "majority", "constant"}) {
        MachineRef m = corpus::machine_ref(name);
        auto fn = machine_fn(m);
        for (std::size_t n = 0; n <= 5; ++n) {
            for (std::size_t idx = 0; idx < pow3(n); ++idx) {
                TritWord x = TernaryTable::word_at(idx, n);
                Trit got = mc_universal(m, x, 2000).value;
                Trit want = closure_oracle(fn, x)[0];
                expect(got == want, std::string(name) + " deviates on \"" + x.str() + "\"");
            }
        }
    }
}

void check_blowup() {
    auto family = [](std::size_t) { return corpus::machine_ref("parity"); };
    auto budget = [](std::size_t n) { return std::uint64_t(64 * n + 64); };
    auto records = blowup_bench(family, 6, 13, budget);
    for (std::size_t i = 1; i < records.size(); ++i) {
        double ratio = double(records[i].total_steps) / double(records[i - 1].total_steps);
        expect(ratio >= 1.8 && ratio <= 2.3,
               "ratio " + std::to_string(ratio) + " at n=" +
                   std::to_string(records[i - 1].input_length));
    }
}

void check_bounded_aggregation() {
    auto outcome = [](const MachineRef& m, std::size_t k, std::uint64_t bound) {
        return mc_universal_bounded(m, uniform_word(k, Trit::u), bound).outcome;
    };
    expect(outcome(corpus::machine_ref("looper"), 2, 50) == ExtendedOutcome::no_halt(),
           "all-diverging input must aggregate to the no-halt symbol");
    expect(outcome(corpus::machine_ref("constant"), 2, 50) == ExtendedOutcome::of(Trit::one),
           "uniform 1 outputs must aggregate to 1");
    expect(outcome(MachineRef::from_table(default_reject_machine()), 2, 50) ==
               ExtendedOutcome::of(Trit::zero),
           "uniform 0 outputs must aggregate to 0");
    expect(outcome(corpus::machine_ref("parity"), 2, 50) == ExtendedOutcome::usym(),
           "mixed values must aggregate to the u symbol");
    MachineRef half = MachineRef::from_table(parse_tm(kHaltOnZero));
    expect(outcome(half, 1, 50) == ExtendedOutcome::usym(),
           "value plus divergence must aggregate to the u symbol");
}

void check_reduction_iffs() {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 200; ++trial) {
        MachineRef m = MachineRef::from_table(random_machine(rng, 1 + int(rng() % 4)));
        TritWord x = random_stable_word(rng, rng() % 7);
        std::uint64_t k = 1 + rng() % 64;

        bool bhp = decide_bhp(m, x, k);
        PExpBhpInstance ladder = reduce_bhp_to_pexp(m, x, k);
        expect(is_pexp_bound(ladder.bound), "mapped bound has the wrong shape");
        expect(decide_pexp_bhp(ladder) == bhp, "halting iff broken at k=" + std::to_string(k));

        Detect1Instance probe =
            reduce_pexp_to_detect1(ladder.machine, ladder.input, ladder.bound);
        expect(probe.input.u_count() == 1, "probe input must carry exactly one u");
        expect(decide_detect1(probe) == decide_pexp_bhp(ladder),
               "detection iff broken at k=" + std::to_string(k));
    }

    for (const Formula& f : formulas_up_to(7, 3)) {
        bool want = decide_tautology_bruteforce(f);
        bool got = decide_detect_poly(reduce_tautology_to_detect_poly(f));
        expect(got == want, "formula iff broken on " + f.str());
    }
}

void check_demo() {
    expect(demo_accepts_all(corpus::machine_ref("constant"), 3, 1000) == DemoVerdict::Accept,
           "accept-everything machine must come back Accept");
    expect(demo_accepts_all(corpus::machine_ref("nand"), 3, 1000) == DemoVerdict::Reject,
           "machine rejecting one length-3 input must come back Reject");
}

}  // namespace

int main() {
    bool ok = true;
    ok &= run_check(1, "ternary gate tables match the reference triples", 0.001,
                    check_gate_tables);
    ok &= run_check(2, "cmux bit equals the mux closure on all 27 inputs", 1.0,
                    check_cmux_closure);
    ok &= run_check(3, "closure laws hold for 100 random functions up to arity 3", 5.0,
                    check_closure_laws);
    ok &= run_check(4, "hazard checker certifies cmux trees and flags the plain mux", 30.0,
                    check_hazard_checks);
    ok &= run_check(5, "naturalness rejects both unstable detectors, accepts closures", 5.0,
                    check_naturalness);
    ok &= run_check(6, "selection with s=11u0 superposes cells 12 and 14", 1.0,
                    check_selection_example);
    ok &= run_check(7, "selection cost is 2^l - 1 with an input-independent trajectory", 5.0,
                    check_selection_cost);
    ok &= run_check(8, "universal simulation equals the closure oracle on bundled machines",
                    60.0, check_universal_matches_closure);
    ok &= run_check(9, "universal simulation work doubles per added input bit", 10.0,
                    check_blowup);
    ok &= run_check(10, "bounded aggregation maps every outcome mixture correctly", 5.0,
                    check_bounded_aggregation);
    ok &= run_check(11, "reduction chains preserve membership on seeded and exhaustive suites",
                    120.0, check_reduction_iffs);
    ok &= run_check(12, "bounded acceptance demo separates accept-all from reject-one", 5.0,
                    check_demo);
    std::printf("%s\n", ok ? "acceptance: all checks passed" : "acceptance: FAILURES");
    return ok ? 0 : 1;
}
