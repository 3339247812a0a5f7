#include <mcturing/circuit.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace mcturing;
using mcturing::testing::random_above;
using mcturing::testing::random_stable_word;
using mcturing::testing::random_word;

namespace {

const std::string kMuxNetlist =
    "# 2-to-1 multiplexer, inputs a b s\n"
    "g0 = INPUT 0\n"
    "g1 = INPUT 1\n"
    "g2 = INPUT 2\n"
    "g3 = NOT g2\n"
    "g4 = AND g0 g3\n"
    "g5 = AND g1 g2\n"
    "g6 = OR g4 g5\n"
    "OUTPUTS g6\n";

Trit eval1(const Circuit& c, const std::string& input) {
    return eval_kleene(c, TritWord::parse(input))[0];
}

}  // namespace

TEST_CASE("netlist parsing and evaluation") {
    Circuit mux = Circuit::parse(kMuxNetlist);
    CHECK(mux.n_inputs == 3);
    CHECK(mux.size() == 4);
    CHECK(mux.depth() == 3);
    CHECK(eval1(mux, "011") == Trit::one);
    CHECK(eval1(mux, "010") == Trit::zero);
    CHECK(eval1(mux, "100") == Trit::one);
    CHECK(eval1(mux, "11u") == Trit::u);
}

TEST_CASE("netlist round-trips through serialize") {
    Circuit c = build_cmux_bit();
    Circuit back = Circuit::parse(c.serialize());
    for (std::size_t idx = 0; idx < pow3(3); ++idx) {
        TritWord x = TernaryTable::word_at(idx, 3);
        CHECK(eval_kleene(c, x) == eval_kleene(back, x));
    }
}

TEST_CASE("netlist errors") {
    CHECK_THROWS_AS(Circuit::parse("g0 = INPUT 0\n"), parse_error);  // no OUTPUTS
    CHECK_THROWS_AS(Circuit::parse("g1 = INPUT 0\nOUTPUTS g1\n"), parse_error);
    CHECK_THROWS_AS(Circuit::parse("g0 = NOT g0\nOUTPUTS g0\n"), parse_error);
    CHECK_THROWS_AS(Circuit::parse("g0 = INPUT 0\ng1 = NOT g2\nOUTPUTS g1\n"), parse_error);
    CHECK_THROWS_AS(Circuit::parse("g0 = XOR 0\nOUTPUTS g0\n"), parse_error);
    CHECK_THROWS_AS(Circuit::parse("g0 = CONST u\nOUTPUTS g0\n"), parse_error);
    CHECK_THROWS_AS(Circuit::parse("OUTPUTS g0\n"), parse_error);
}

TEST_CASE("constant gates") {
    Circuit c = Circuit::parse("g0 = CONST 1\ng1 = CONST 0\ng2 = OR g0 g1\nOUTPUTS g2\n");
    CHECK(c.n_inputs == 0);
    CHECK(eval_kleene(c, TritWord{})[0] == Trit::one);
}

TEST_CASE("boolean evaluation requires stable input") {
    Circuit mux = Circuit::parse(kMuxNetlist);
    CHECK_THROWS_AS(eval_boolean(mux, TritWord::parse("0u1")), error);
    std::mt19937_64 rng(3);
    for (int it = 0; it < 50; ++it) {
        TritWord x = random_stable_word(rng, 3);
        CHECK(eval_boolean(mux, x) == eval_kleene(mux, x));
    }
}

TEST_CASE("cmux bit structure") {
    Circuit c = build_cmux_bit();
    CHECK(c.n_inputs == 3);
    CHECK(c.size() == 6);
    CHECK(c.depth() == 3);
}

TEST_CASE("cmux masks an unstable select when both data agree") {
    Circuit cmux = build_cmux_bit();
    Circuit mux = build_mux_bit();
    CHECK(eval1(cmux, "11u") == Trit::one);
    CHECK(eval1(mux, "11u") == Trit::u);
    CHECK(eval1(cmux, "00u") == Trit::zero);
    CHECK(eval1(cmux, "01u") == Trit::u);
    CHECK(eval1(cmux, "10u") == Trit::u);
}

TEST_CASE("cmux bit equals the closure of the mux on every ternary input") {
    Circuit cmux = build_cmux_bit();
    Circuit mux = build_mux_bit();
    auto spec = [&](const TritWord& stable) { return eval_boolean(mux, stable); };
    for (std::size_t idx = 0; idx < pow3(3); ++idx) {
        TritWord x = TernaryTable::word_at(idx, 3);
        CHECK(eval_kleene(cmux, x) == closure_oracle(spec, x));
    }
}

TEST_CASE("selector trees pick the addressed cell on stable inputs") {
    std::mt19937_64 rng(5);
    for (int levels = 1; levels <= 3; ++levels) {
        Circuit cmux = build_cmux_tree(levels);
        Circuit mux = build_mux(levels);
        std::size_t n = std::size_t(1) << levels;
        CHECK(cmux.n_inputs == int(n) + levels);
        for (int it = 0; it < 30; ++it) {
            TritWord x = random_stable_word(rng, n);
            TritWord s = random_stable_word(rng, std::size_t(levels));
            TritWord in = x.concat(s);
            Trit want = x[word_to_index(s)];
            CHECK(eval_kleene(cmux, in)[0] == want);
            CHECK(eval_kleene(mux, in)[0] == want);
        }
    }
}

TEST_CASE("kleene evaluation is monotone in the stability order") {
    std::mt19937_64 rng(7);
    Circuit c = build_cmux_tree(2);
    for (int it = 0; it < 200; ++it) {
        TritWord x = random_word(rng, std::size_t(c.n_inputs));
        TritWord y = random_above(rng, x);
        CHECK(leq_word(eval_kleene(c, x), eval_kleene(c, y)));
    }
}

TEST_CASE("kleene evaluation never exceeds the closure") {
    Circuit mux = build_mux_bit();
    auto spec = [&](const TritWord& stable) { return eval_boolean(mux, stable); };
    for (std::size_t idx = 0; idx < pow3(3); ++idx) {
        TritWord x = TernaryTable::word_at(idx, 3);
        CHECK(leq_word(eval_kleene(mux, x), closure_oracle(spec, x)));
    }
}

TEST_CASE("ternary tables index round-trip") {
    for (std::size_t idx = 0; idx < pow3(3); ++idx)
        CHECK(TernaryTable::index_of(TernaryTable::word_at(idx, 3)) == idx);
}

TEST_CASE("ternary table text round-trip and validation") {
    TernaryTable conj = TernaryTable::from_function(2, [](const TritWord& w) {
        return and_u(w[0], w[1]);
    });
    CHECK(TernaryTable::parse(conj.serialize()) == conj);
    CHECK(conj.at(TritWord::parse("1u")) == Trit::u);
    CHECK_THROWS_AS(TernaryTable::parse("00 0\n01 0\n"), parse_error);  // missing rows
    CHECK_THROWS_AS(TernaryTable::parse("0 0\n1 1\nu u\n0 1\n"), parse_error);
    CHECK_THROWS_AS(TernaryTable::parse(""), parse_error);
}

TEST_CASE("gate tables are natural") {
    auto conj = TernaryTable::from_function(2, [](const TritWord& w) { return and_u(w[0], w[1]); });
    auto disj = TernaryTable::from_function(2, [](const TritWord& w) { return or_u(w[0], w[1]); });
    auto neg = TernaryTable::from_function(1, [](const TritWord& w) { return not_u(w[0]); });
    CHECK(is_natural(conj).natural());
    CHECK(is_natural(disj).natural());
    CHECK(is_natural(neg).natural());
}

TEST_CASE("metastability detection is not natural") {
    // u to 1, both stable values to 0
    TernaryTable d(1);
    d.set(TritWord::parse("0"), Trit::zero);
    d.set(TritWord::parse("1"), Trit::zero);
    d.set(TritWord::parse("u"), Trit::one);
    auto rep = is_natural(d);
    REQUIRE_FALSE(rep.natural());
    CHECK(rep.verdict == NaturalnessReport::Verdict::NotMonotone);
    CHECK(rep.witness_x.str() == "u");
    CHECK(rep.witness_y.str() == "0");
}

TEST_CASE("metastability resolution is not natural") {
    // u to 1, identity on stable values
    TernaryTable r(1);
    r.set(TritWord::parse("0"), Trit::zero);
    r.set(TritWord::parse("1"), Trit::one);
    r.set(TritWord::parse("u"), Trit::one);
    auto rep = is_natural(r);
    REQUIRE_FALSE(rep.natural());
    CHECK(rep.verdict == NaturalnessReport::Verdict::NotMonotone);
    CHECK(rep.witness_x.str() == "u");
    CHECK(rep.witness_y.str() == "0");
}

TEST_CASE("a table mapping a stable input to u is not natural") {
    TernaryTable t(1);
    t.set(TritWord::parse("0"), Trit::u);
    t.set(TritWord::parse("1"), Trit::one);
    t.set(TritWord::parse("u"), Trit::u);
    auto rep = is_natural(t);
    REQUIRE_FALSE(rep.natural());
    CHECK(rep.verdict == NaturalnessReport::Verdict::StableMapsToU);
    CHECK(rep.witness_x.str() == "0");
}

TEST_CASE("closures of random boolean functions are natural") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 20; ++it) {
        std::size_t n = 1 + rng() % 3;
        auto table = mcturing::testing::random_boolean_table(rng, n);
        auto f = [&](const TritWord& w) { return TritWord{table[word_to_index(w)]}; };
        auto closed = TernaryTable::from_function(n, [&](const TritWord& x) {
            return closure_oracle(f, x)[0];
        });
        CHECK(is_natural(closed).natural());
    }
}

TEST_CASE("kleene semantics of a circuit is natural per output line") {
    CHECK(is_natural(tabulate_line(build_cmux_bit(), 0)).natural());
    CHECK(is_natural(tabulate_line(build_mux_bit(), 0)).natural());
}

TEST_CASE("hazard check certifies the cmux bit and flags the mux bit") {
    HazardReport good = is_hazard_free(build_cmux_bit());
    CHECK(good.hazard_free);
    CHECK(good.exhaustive);
    CHECK(good.checked == 27);

    HazardReport bad = is_hazard_free(build_mux_bit());
    REQUIRE_FALSE(bad.hazard_free);
    CHECK(bad.exhaustive);
    Circuit mux = build_mux_bit();
    auto spec = [&](const TritWord& stable) { return eval_boolean(mux, stable); };
    CHECK(eval_kleene(mux, bad.witness) == bad.actual);
    CHECK(closure_oracle(spec, bad.witness) == bad.expected);
    CHECK_FALSE(bad.actual == bad.expected);
}

TEST_CASE("hazard check sampling mode") {
    HazardCheckOptions opts;
    opts.max_oracle_evals = 100;  // force sampling even for 3 inputs
    opts.samples = 500;
    HazardReport rep = is_hazard_free(build_cmux_bit(), opts);
    CHECK(rep.hazard_free);
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.checked == 500);

    opts.mode = HazardCheckOptions::Mode::Exhaustive;
    CHECK_THROWS_AS(is_hazard_free(build_cmux_bit(), opts), capacity_error);
}

TEST_CASE("synthesis realizes the gate tables") {
    auto tables = {
        TernaryTable::from_function(2, [](const TritWord& w) { return and_u(w[0], w[1]); }),
        TernaryTable::from_function(2, [](const TritWord& w) { return or_u(w[0], w[1]); }),
        TernaryTable::from_function(1, [](const TritWord& w) { return not_u(w[0]); }),
    };
    for (const TernaryTable& t : tables) {
        SynthesisResult res = synthesize_closure_circuit(t);
        REQUIRE(res.circuit.has_value());
        CHECK(tabulate_line(*res.circuit, 0) == t);
        CHECK(is_hazard_free(*res.circuit).hazard_free);
    }
}

TEST_CASE("synthesis realizes the closure of xor") {
    auto xor_fn = [](const TritWord& w) {
        return TritWord{w[0] == w[1] ? Trit::zero : Trit::one};
    };
    auto closed = TernaryTable::from_function(2, [&](const TritWord& x) {
        return closure_oracle(xor_fn, x)[0];
    });
    SynthesisResult res = synthesize_closure_circuit(closed);
    REQUIRE(res.circuit.has_value());
    CHECK(tabulate_line(*res.circuit, 0) == closed);
}

TEST_CASE("synthesis reports natural tables below the closure") {
    // natural, but strictly below the closure of its boolean restriction
    TernaryTable g(1);
    g.set(TritWord::parse("0"), Trit::zero);
    g.set(TritWord::parse("1"), Trit::zero);
    g.set(TritWord::parse("u"), Trit::u);
    REQUIRE(is_natural(g).natural());
    SynthesisResult res = synthesize_closure_circuit(g);
    CHECK_FALSE(res.circuit.has_value());
    REQUIRE(res.mismatch.has_value());
    CHECK(res.mismatch->str() == "u");
}
