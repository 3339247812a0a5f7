#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "trit.hpp"

namespace mcturing {

// ---------------------------------------------------------------------------
// Combinational circuits: DAGs of INPUT/CONST/NOT/AND/OR gates
// ---------------------------------------------------------------------------

struct Gate {
    enum class Kind { Input, Const, Not, And, Or };
    Kind kind;
    int a = -1;  // input index for Input, first source otherwise
    int b = -1;  // second source for And/Or
    Trit value = Trit::zero;  // Const only
};

class Circuit {
public:
    int n_inputs = 0;
    std::vector<Gate> gates;
    std::vector<int> outputs;

    std::size_t size() const {
        std::size_t s = 0;
        for (const Gate& g : gates)
            if (g.kind != Gate::Kind::Input && g.kind != Gate::Kind::Const) ++s;
        return s;
    }

    std::size_t depth() const {
        std::vector<std::size_t> d(gates.size(), 0);
        for (std::size_t i = 0; i < gates.size(); ++i) {
            const Gate& g = gates[i];
            switch (g.kind) {
                case Gate::Kind::Input:
                case Gate::Kind::Const: d[i] = 0; break;
                case Gate::Kind::Not: d[i] = d[g.a] + 1; break;
                default: d[i] = std::max(d[g.a], d[g.b]) + 1; break;
            }
        }
        std::size_t m = 0;
        for (int o : outputs) m = std::max(m, d[o]);
        return m;
    }

    void validate() const {
        if (outputs.empty()) throw parse_error("circuit: no outputs");
        for (std::size_t i = 0; i < gates.size(); ++i) {
            const Gate& g = gates[i];
            auto check_src = [&](int s) {
                if (s < 0 || std::size_t(s) >= i)
                    throw parse_error("circuit: gate " + std::to_string(i) +
                                      " references source " + std::to_string(s) +
                                      " (sources must have strictly smaller ids)");
            };
            switch (g.kind) {
                case Gate::Kind::Input:
                    if (g.a < 0 || g.a >= n_inputs)
                        throw parse_error("circuit: input index out of range");
                    break;
                case Gate::Kind::Const:
                    if (!is_stable(g.value)) throw parse_error("circuit: CONST must be 0 or 1");
                    break;
                case Gate::Kind::Not: check_src(g.a); break;
                default:
                    check_src(g.a);
                    check_src(g.b);
                    break;
            }
        }
        for (int o : outputs)
            if (o < 0 || std::size_t(o) >= gates.size())
                throw parse_error("circuit: output references undefined gate");
    }

    static Circuit parse(std::string_view text);
    std::string serialize() const;
};

namespace detail {

inline std::vector<std::string> tokenize_line(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

inline int parse_gate_ref(const std::string& tok, std::size_t defined) {
    if (tok.size() < 2 || tok[0] != 'g')
        throw parse_error("netlist: expected gate reference, got '" + tok + "'");
    int id;
    try {
        id = std::stoi(tok.substr(1));
    } catch (const std::exception&) {
        throw parse_error("netlist: bad gate id '" + tok + "'");
    }
    if (id < 0 || std::size_t(id) >= defined)
        throw parse_error("netlist: reference to undefined gate '" + tok + "'");
    return id;
}

}  // namespace detail

inline Circuit Circuit::parse(std::string_view text) {
    Circuit c;
    std::istringstream in{std::string(text)};
    std::string line;
    bool saw_outputs = false;
    while (std::getline(in, line)) {
        auto toks = detail::tokenize_line(line);
        if (toks.empty()) continue;
        if (toks[0] == "OUTPUTS") {
            if (toks.size() < 2) throw parse_error("netlist: OUTPUTS needs at least one gate");
            for (std::size_t i = 1; i < toks.size(); ++i)
                c.outputs.push_back(detail::parse_gate_ref(toks[i], c.gates.size()));
            saw_outputs = true;
            continue;
        }
        if (saw_outputs) throw parse_error("netlist: gate after OUTPUTS line");
        if (toks.size() < 3 || toks[1] != "=")
            throw parse_error("netlist: malformed line '" + line + "'");
        if (toks[0].size() < 2 || toks[0][0] != 'g')
            throw parse_error("netlist: gate names look like g<id>, got '" + toks[0] + "'");
        int id;
        try {
            id = std::stoi(toks[0].substr(1));
        } catch (const std::exception&) {
            throw parse_error("netlist: bad gate id '" + toks[0] + "'");
        }
        if (std::size_t(id) != c.gates.size())
            throw parse_error("netlist: gate ids must be consecutive from g0; got '" +
                              toks[0] + "' at position " + std::to_string(c.gates.size()));
        Gate g;
        const std::string& op = toks[2];
        if (op == "INPUT") {
            if (toks.size() != 4) throw parse_error("netlist: INPUT takes one index");
            g.kind = Gate::Kind::Input;
            g.a = std::stoi(toks[3]);
            c.n_inputs = std::max(c.n_inputs, g.a + 1);
        } else if (op == "CONST") {
            if (toks.size() != 4) throw parse_error("netlist: CONST takes 0 or 1");
            g.kind = Gate::Kind::Const;
            g.value = trit_from_char(toks[3][0]);
        } else if (op == "NOT") {
            if (toks.size() != 4) throw parse_error("netlist: NOT takes one source");
            g.kind = Gate::Kind::Not;
            g.a = detail::parse_gate_ref(toks[3], c.gates.size());
        } else if (op == "AND" || op == "OR") {
            if (toks.size() != 5) throw parse_error("netlist: " + op + " takes two sources");
            g.kind = op == "AND" ? Gate::Kind::And : Gate::Kind::Or;
            g.a = detail::parse_gate_ref(toks[3], c.gates.size());
            g.b = detail::parse_gate_ref(toks[4], c.gates.size());
        } else {
            throw parse_error("netlist: unknown op '" + op + "'");
        }
        c.gates.push_back(g);
    }
    if (!saw_outputs) throw parse_error("netlist: missing OUTPUTS line");
    c.validate();
    return c;
}

inline std::string Circuit::serialize() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        out << 'g' << i << " = ";
        switch (g.kind) {
            case Gate::Kind::Input: out << "INPUT " << g.a; break;
            case Gate::Kind::Const: out << "CONST " << to_char(g.value); break;
            case Gate::Kind::Not: out << "NOT g" << g.a; break;
            case Gate::Kind::And: out << "AND g" << g.a << " g" << g.b; break;
            case Gate::Kind::Or: out << "OR g" << g.a << " g" << g.b; break;
        }
        out << '\n';
    }
    out << "OUTPUTS";
    for (int o : outputs) out << " g" << o;
    out << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Evaluation: one forward pass, Boolean or Kleene gate semantics
// ---------------------------------------------------------------------------

inline TritWord eval_kleene(const Circuit& c, const TritWord& x) {
    if (x.size() != std::size_t(c.n_inputs))
        throw length_mismatch("eval: expected " + std::to_string(c.n_inputs) +
                              " inputs, got " + std::to_string(x.size()));
    std::vector<Trit> v(c.gates.size());
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        switch (g.kind) {
            case Gate::Kind::Input: v[i] = x[g.a]; break;
            case Gate::Kind::Const: v[i] = g.value; break;
            case Gate::Kind::Not: v[i] = not_u(v[g.a]); break;
            case Gate::Kind::And: v[i] = and_u(v[g.a], v[g.b]); break;
            case Gate::Kind::Or: v[i] = or_u(v[g.a], v[g.b]); break;
        }
    }
    TritWord out;
    for (int o : c.outputs) out.push_back(v[o]);
    return out;
}

inline TritWord eval_boolean(const Circuit& c, const TritWord& x) {
    if (!x.stable()) throw error("eval_boolean: input must be stable");
    return eval_kleene(c, x);  // Kleene gates restrict to Boolean gates on stable values
}

// ---------------------------------------------------------------------------
// Ternary truth tables
// ---------------------------------------------------------------------------

inline std::size_t pow3(std::size_t n) {
    std::size_t p = 1;
    while (n--) p *= 3;
    return p;
}

class TernaryTable {
public:
    explicit TernaryTable(std::size_t arity)
        : arity_(arity), values_(pow3(arity), Trit::u) {}

    std::size_t arity() const { return arity_; }
    std::size_t rows() const { return values_.size(); }

    static std::size_t index_of(const TritWord& w) {
        std::size_t idx = 0;
        for (Trit t : w) idx = idx * 3 + static_cast<std::size_t>(t);
        return idx;
    }

    static TritWord word_at(std::size_t idx, std::size_t arity) {
        std::vector<Trit> v(arity);
        for (std::size_t i = arity; i-- > 0;) {
            v[i] = static_cast<Trit>(idx % 3);
            idx /= 3;
        }
        return TritWord(std::move(v));
    }

    Trit at(const TritWord& w) const {
        if (w.size() != arity_) throw length_mismatch("table lookup: arity mismatch");
        return values_[index_of(w)];
    }
    Trit at_index(std::size_t idx) const { return values_[idx]; }
    void set(const TritWord& w, Trit t) { values_[index_of(w)] = t; }

    template <typename Fn>
    static TernaryTable from_function(std::size_t arity, Fn&& fn) {
        TernaryTable t(arity);
        for (std::size_t i = 0; i < t.rows(); ++i)
            t.values_[i] = fn(word_at(i, arity));
        return t;
    }

    static TernaryTable parse(std::string_view text);
    std::string serialize() const;

    friend bool operator==(const TernaryTable&, const TernaryTable&) = default;

private:
    std::size_t arity_;
    std::vector<Trit> values_;
};

inline TernaryTable TernaryTable::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<std::size_t> arity;
    std::vector<bool> seen;
    std::optional<TernaryTable> table;
    while (std::getline(in, line)) {
        auto toks = detail::tokenize_line(line);
        if (toks.empty()) continue;
        if (toks[0] == "arity:") {
            if (toks.size() != 2) throw parse_error("table: arity: takes one number");
            arity = std::stoul(toks[1]);
            continue;
        }
        if (toks.size() != 2) throw parse_error("table: rows are '<word> <trit>'");
        TritWord w = TritWord::parse(toks[0]);
        if (!arity) arity = w.size();
        if (w.size() != *arity) throw parse_error("table: row arity mismatch");
        if (!table) {
            table.emplace(*arity);
            seen.assign(table->rows(), false);
        }
        std::size_t idx = TernaryTable::index_of(w);
        if (seen[idx]) throw parse_error("table: duplicate row for " + toks[0]);
        seen[idx] = true;
        if (toks[1].size() != 1) throw parse_error("table: output must be a single trit");
        table->set(w, trit_from_char(toks[1][0]));
    }
    if (!table) throw parse_error("table: empty");
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw parse_error("table: missing row for " +
                              TernaryTable::word_at(i, *arity).str());
    return *table;
}

inline std::string TernaryTable::serialize() const {
    std::ostringstream out;
    out << "arity: " << arity_ << '\n';
    for (std::size_t i = 0; i < rows(); ++i)
        out << word_at(i, arity_).str() << ' ' << to_char(values_[i]) << '\n';
    return out.str();
}

// Table of one output line of a circuit under Kleene evaluation.
inline TernaryTable tabulate_line(const Circuit& c, std::size_t line) {
    return TernaryTable::from_function(c.n_inputs, [&](const TritWord& x) {
        return eval_kleene(c, x)[line];
    });
}

// ---------------------------------------------------------------------------
// Naturalness: Boolean-preserving on stable inputs and monotone in stability
// ---------------------------------------------------------------------------

struct NaturalnessReport {
    enum class Verdict { Natural, StableMapsToU, NotMonotone };
    Verdict verdict = Verdict::Natural;
    TritWord witness_x;
    TritWord witness_y;  // NotMonotone only; witness_x is below witness_y

    bool natural() const { return verdict == Verdict::Natural; }
};

inline NaturalnessReport is_natural(const TernaryTable& t) {
    const std::size_t n = t.arity();
    for (std::uint64_t i = 0; i < (std::uint64_t(1) << n); ++i) {
        TritWord x = index_to_word(i, n);
        if (!is_stable(t.at(x)))
            return {NaturalnessReport::Verdict::StableMapsToU, x, {}};
    }
    for (std::size_t idx = 0; idx < t.rows(); ++idx) {
        TritWord x = TernaryTable::word_at(idx, n);
        std::vector<std::size_t> upos;
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] == Trit::u) upos.push_back(i);
        std::size_t variants = pow3(upos.size());
        for (std::size_t m = 0; m < variants; ++m) {
            TritWord y = x;
            std::size_t rest = m;
            for (std::size_t k : upos) {
                y.set(k, static_cast<Trit>(rest % 3));
                rest /= 3;
            }
            if (!leq_stab(t.at(x), t.at(y)))
                return {NaturalnessReport::Verdict::NotMonotone, x, y};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Hazard-freedom: Kleene evaluation against the closure of the circuit's
// Boolean function
// ---------------------------------------------------------------------------

struct HazardCheckOptions {
    std::uint64_t max_oracle_evals = 10'000'000;  // exhaustive when 3^n * 2^n fits
    std::uint64_t samples = 10'000;
    std::uint64_t seed = 1;
    std::size_t capacity = default_u_capacity;
    enum class Mode { Auto, Exhaustive, Sampled };
    Mode mode = Mode::Auto;
};

struct HazardReport {
    bool hazard_free = true;
    bool exhaustive = false;
    std::uint64_t checked = 0;
    TritWord witness;   // input where the circuit deviates from the closure
    TritWord expected;  // closure value at the witness
    TritWord actual;    // Kleene evaluation at the witness
};

inline HazardReport is_hazard_free(const Circuit& c, const HazardCheckOptions& opts = {}) {
    const std::size_t n = c.n_inputs;
    auto spec = [&](const TritWord& stable_x) { return eval_boolean(c, stable_x); };
    auto check_one = [&](const TritWord& x) -> std::optional<HazardReport> {
        TritWord actual = eval_kleene(c, x);
        TritWord expected = closure_oracle(spec, x, opts.capacity);
        if (actual == expected) return std::nullopt;
        HazardReport r;
        r.hazard_free = false;
        r.witness = x;
        r.expected = expected;
        r.actual = actual;
        return r;
    };

    // Worst-case oracle cost: 2^n per input over all 3^n inputs.
    bool fits = true;
    std::uint64_t cost = 1;
    for (std::size_t i = 0; i < n && fits; ++i) {
        if (cost > opts.max_oracle_evals / 6) fits = false;
        cost *= 6;
    }
    bool exhaustive = opts.mode == HazardCheckOptions::Mode::Exhaustive ||
                      (opts.mode == HazardCheckOptions::Mode::Auto && fits && cost <= opts.max_oracle_evals);
    if (opts.mode == HazardCheckOptions::Mode::Exhaustive && !(fits && cost <= opts.max_oracle_evals))
        throw capacity_error("hazard check: exhaustive sweep exceeds the evaluation budget");

    HazardReport ok;
    ok.exhaustive = exhaustive;
    if (exhaustive) {
        for (std::size_t idx = 0; idx < pow3(n); ++idx) {
            TritWord x = TernaryTable::word_at(idx, n);
            if (auto bad = check_one(x)) {
                bad->exhaustive = true;
                bad->checked = idx + 1;
                return *bad;
            }
        }
        ok.checked = pow3(n);
        return ok;
    }
    std::mt19937_64 rng(opts.seed);
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
        TritWord x;
        for (std::size_t i = 0; i < n; ++i) x.push_back(static_cast<Trit>(rng() % 3));
        if (auto bad = check_one(x)) {
            bad->exhaustive = false;
            bad->checked = s + 1;
            return *bad;
        }
    }
    ok.checked = opts.samples;
    return ok;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

class CircuitBuilder {
public:
    int add_input(int index) {
        last_used_input_ = std::max(last_used_input_, index);
        return add({Gate::Kind::Input, index, -1, Trit::zero});
    }
    int add_const(Trit v) { return add({Gate::Kind::Const, -1, -1, v}); }
    int add_not(int a) { return add({Gate::Kind::Not, a, -1, Trit::zero}); }
    int add_and(int a, int b) { return add({Gate::Kind::And, a, b, Trit::zero}); }
    int add_or(int a, int b) { return add({Gate::Kind::Or, a, b, Trit::zero}); }

    Circuit build(std::vector<int> outputs) {
        Circuit c;
        c.n_inputs = last_used_input_ + 1;
        c.gates = gates_;
        c.outputs = std::move(outputs);
        c.validate();
        return c;
    }

private:
    int add(Gate g) {
        gates_.push_back(g);
        return int(gates_.size()) - 1;
    }
    std::vector<Gate> gates_;
    int last_used_input_ = -1;
};

namespace detail {

// or(and(a, not s), or(and(b, s), and(a, b))): the hazard-free 2-to-1 selector.
inline int emit_cmux(CircuitBuilder& cb, int a, int b, int s) {
    int ns = cb.add_not(s);
    int keep_a = cb.add_and(a, ns);
    int keep_b = cb.add_and(b, s);
    int bridge = cb.add_and(a, b);
    return cb.add_or(keep_a, cb.add_or(keep_b, bridge));
}

inline int emit_mux(CircuitBuilder& cb, int a, int b, int s) {
    int ns = cb.add_not(s);
    return cb.add_or(cb.add_and(a, ns), cb.add_and(b, s));
}

template <typename Emit>
int emit_selector_tree(CircuitBuilder& cb, const std::vector<int>& cells,
                       const std::vector<int>& selects, std::size_t lo, std::size_t len,
                       std::size_t level, Emit&& emit) {
    if (len == 1) return cells[lo];
    std::size_t half = len / 2;
    int lower = emit_selector_tree(cb, cells, selects, lo, half, level + 1, emit);
    int upper = emit_selector_tree(cb, cells, selects, lo + half, half, level + 1, emit);
    return emit(cb, lower, upper, selects[level]);
}

template <typename Emit>
Circuit build_selector(int levels, Emit&& emit) {
    if (levels < 1) throw error("selector tree needs at least one level");
    CircuitBuilder cb;
    std::size_t n = std::size_t(1) << levels;
    std::vector<int> cells, selects;
    for (std::size_t i = 0; i < n; ++i) cells.push_back(cb.add_input(int(i)));
    for (int i = 0; i < levels; ++i) selects.push_back(cb.add_input(int(n) + i));
    int out = emit_selector_tree(cb, cells, selects, 0, n, 0, emit);
    return cb.build({out});
}

}  // namespace detail

// 2-to-1 selectors on inputs (a, b, s) = input indices (0, 1, 2).
inline Circuit build_mux_bit() {
    CircuitBuilder cb;
    int a = cb.add_input(0), b = cb.add_input(1), s = cb.add_input(2);
    return cb.build({detail::emit_mux(cb, a, b, s)});
}

inline Circuit build_cmux_bit() {
    CircuitBuilder cb;
    int a = cb.add_input(0), b = cb.add_input(1), s = cb.add_input(2);
    return cb.build({detail::emit_cmux(cb, a, b, s)});
}

// 2^levels-to-1 trees: data inputs 0..2^l-1, then select inputs, leading select
// bit first; the leading bit chooses the lower half when 0, the upper when 1.
inline Circuit build_mux(int levels) {
    return detail::build_selector(levels, [](CircuitBuilder& cb, int a, int b, int s) {
        return detail::emit_mux(cb, a, b, s);
    });
}

inline Circuit build_cmux_tree(int levels) {
    return detail::build_selector(levels, [](CircuitBuilder& cb, int a, int b, int s) {
        return detail::emit_cmux(cb, a, b, s);
    });
}

// ---------------------------------------------------------------------------
// Synthesis: all-prime-implicant DNF of the Boolean restriction
// ---------------------------------------------------------------------------

struct SynthesisResult {
    std::optional<Circuit> circuit;   // present when the DNF realizes the table
    std::optional<TritWord> mismatch;  // input where the table is not the restriction's closure
};

inline SynthesisResult synthesize_closure_circuit(const TernaryTable& t) {
    const std::size_t n = t.arity();
    auto boolean_value = [&](const TritWord& stable_x) {
        Trit v = t.at(stable_x);
        return is_stable(v) ? v : Trit::zero;
    };

    auto is_implicant = [&](const TritWord& cube) {
        for (const TritWord& r : Resolution(cube))
            if (boolean_value(r) != Trit::one) return false;
        return true;
    };

    std::vector<TritWord> primes;
    for (std::size_t idx = 0; idx < pow3(n); ++idx) {
        TritWord cube = TernaryTable::word_at(idx, n);
        if (!is_implicant(cube)) continue;
        bool prime = true;
        for (std::size_t i = 0; i < n && prime; ++i) {
            if (cube[i] == Trit::u) continue;
            TritWord widened = cube;
            widened.set(i, Trit::u);
            if (is_implicant(widened)) prime = false;
        }
        if (prime) primes.push_back(cube);
    }

    CircuitBuilder cb;
    std::vector<int> in(n), neg(n, -1);
    for (std::size_t i = 0; i < n; ++i) in[i] = cb.add_input(int(i));
    std::vector<int> terms;
    for (const TritWord& cube : primes) {
        int term = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (cube[i] == Trit::u) continue;
            int lit;
            if (cube[i] == Trit::one) {
                lit = in[i];
            } else {
                if (neg[i] < 0) neg[i] = cb.add_not(in[i]);
                lit = neg[i];
            }
            term = term < 0 ? lit : cb.add_and(term, lit);
        }
        if (term < 0) term = cb.add_const(Trit::one);  // the all-u cube: constant truth
        terms.push_back(term);
    }
    int out = -1;
    for (int term : terms) out = out < 0 ? term : cb.add_or(out, term);
    if (out < 0) out = cb.add_const(Trit::zero);
    Circuit c = cb.build({out});
    for (std::size_t idx = 0; idx < pow3(n); ++idx) {
        TritWord x = TernaryTable::word_at(idx, n);
        if (eval_kleene(c, x)[0] != t.at(x)) return {std::nullopt, x};
    }
    return {std::move(c), std::nullopt};
}

}  // namespace mcturing
