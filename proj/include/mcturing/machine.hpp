#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "circuit.hpp"
#include "trit.hpp"

namespace mcturing {

struct partial_transition : parse_error {
    using parse_error::parse_error;
};

// ---------------------------------------------------------------------------
// Boolean-era Turing machines over tape alphabet {0, 1, u, blank}
// ---------------------------------------------------------------------------

enum class Symbol : std::uint8_t { zero = 0, one = 1, u = 2, blank = 3 };
enum class Move : std::int8_t { left = -1, right = 1 };

constexpr char symbol_char(Symbol s) {
    switch (s) {
        case Symbol::zero: return '0';
        case Symbol::one: return '1';
        case Symbol::u: return 'u';
        default: return '_';
    }
}

constexpr Symbol symbol_from_char(char c) {
    switch (c) {
        case '0': return Symbol::zero;
        case '1': return Symbol::one;
        case 'u':
        case 'U': return Symbol::u;
        case '_': return Symbol::blank;
        default: throw parse_error(std::string("invalid tape symbol '") + c + "'");
    }
}

constexpr Symbol symbol_from_trit(Trit t) { return static_cast<Symbol>(t); }

constexpr Trit trit_from_symbol(Symbol s) {
    if (s == Symbol::blank) throw error("blank has no trit value");
    return static_cast<Trit>(s);
}

struct Transition {
    int next = 0;
    Symbol write = Symbol::blank;
    Move move = Move::right;
};

struct BooleanTM {
    std::vector<std::string> state_names;
    int start = 0;
    std::vector<bool> final_states;
    std::optional<int> accept;
    std::optional<int> reject;
    std::vector<std::array<Transition, 4>> delta;

    bool is_final(int q) const { return final_states[q]; }
    const Transition& rule(int q, Symbol s) const {
        return delta[q][static_cast<std::size_t>(s)];
    }
    std::string serialize() const;
};

// ---------------------------------------------------------------------------
// Machine description language
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> tm_tokens(const std::string& line) {
    std::string cleaned;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '#') break;
        if (line[i] == ',') {
            cleaned += ' ';
        } else if (line[i] == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            cleaned += " -> ";
            ++i;
        } else {
            cleaned += line[i];
        }
    }
    std::vector<std::string> toks;
    std::istringstream in(cleaned);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

}  // namespace detail

BooleanTM default_reject_machine();

inline BooleanTM parse_tm(std::string_view text, bool lenient = false) {
    try {
        BooleanTM m;
        std::map<std::string, int> ids;
        bool saw_states = false, saw_start = false, saw_final = false;
        bool default_u_as0 = false;
        std::vector<std::array<bool, 4>> given;
        std::string start_name;
        std::vector<std::string> final_names;
        std::optional<std::string> accept_name, reject_name;
        struct Row {
            std::string from, to;
            Symbol read, write;
            Move move;
        };
        std::vector<Row> rows;

        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            auto toks = detail::tm_tokens(line);
            if (toks.empty()) continue;
            const std::string& head = toks[0];
            if (head == "states:") {
                if (toks.size() < 2) throw parse_error("machine: states: needs names");
                for (std::size_t i = 1; i < toks.size(); ++i) {
                    if (ids.count(toks[i])) throw parse_error("machine: duplicate state " + toks[i]);
                    ids[toks[i]] = int(m.state_names.size());
                    m.state_names.push_back(toks[i]);
                }
                saw_states = true;
            } else if (head == "start:") {
                if (toks.size() != 2) throw parse_error("machine: start: takes one state");
                start_name = toks[1];
                saw_start = true;
            } else if (head == "final:") {
                for (std::size_t i = 1; i < toks.size(); ++i) final_names.push_back(toks[i]);
                saw_final = true;
            } else if (head == "accept:") {
                if (toks.size() != 2) throw parse_error("machine: accept: takes one state");
                accept_name = toks[1];
            } else if (head == "reject:") {
                if (toks.size() != 2) throw parse_error("machine: reject: takes one state");
                reject_name = toks[1];
            } else if (head == "default-u:") {
                if (toks.size() != 2 || toks[1] != "as0")
                    throw parse_error("machine: default-u: supports only 'as0'");
                default_u_as0 = true;
            } else {
                // q, sym -> q', sym', L|R
                if (toks.size() != 6 || toks[2] != "->")
                    throw parse_error("machine: malformed transition '" + line + "'");
                Row r;
                r.from = toks[0];
                if (toks[1].size() != 1) throw parse_error("machine: bad symbol " + toks[1]);
                r.read = symbol_from_char(toks[1][0]);
                r.to = toks[3];
                if (toks[4].size() != 1) throw parse_error("machine: bad symbol " + toks[4]);
                r.write = symbol_from_char(toks[4][0]);
                if (toks[5] == "L")
                    r.move = Move::left;
                else if (toks[5] == "R")
                    r.move = Move::right;
                else
                    throw parse_error("machine: move must be L or R, got " + toks[5]);
                rows.push_back(r);
            }
        }

        if (!saw_states) throw parse_error("machine: missing states: line");
        if (!saw_start) throw parse_error("machine: missing start: line");
        if (!saw_final) throw parse_error("machine: missing final: line");
        auto lookup = [&](const std::string& name) {
            auto it = ids.find(name);
            if (it == ids.end()) throw parse_error("machine: unknown state " + name);
            return it->second;
        };
        m.start = lookup(start_name);
        m.final_states.assign(m.state_names.size(), false);
        for (const auto& f : final_names) m.final_states[lookup(f)] = true;
        if (accept_name) m.accept = lookup(*accept_name);
        if (reject_name) m.reject = lookup(*reject_name);

        m.delta.assign(m.state_names.size(), {});
        given.assign(m.state_names.size(), {false, false, false, false});
        for (const Row& r : rows) {
            int q = lookup(r.from);
            auto s = static_cast<std::size_t>(r.read);
            if (given[q][s])
                throw parse_error("machine: duplicate rule for (" + r.from + ", " +
                                  symbol_char(r.read) + ")");
            given[q][s] = true;
            m.delta[q][s] = {lookup(r.to), r.write, r.move};
        }
        for (std::size_t q = 0; q < m.state_names.size(); ++q) {
            if (default_u_as0 && !given[q][std::size_t(Symbol::u)] &&
                given[q][std::size_t(Symbol::zero)]) {
                m.delta[q][std::size_t(Symbol::u)] = m.delta[q][std::size_t(Symbol::zero)];
                given[q][std::size_t(Symbol::u)] = true;
            }
            if (m.final_states[q]) {
                // never taken: halting is on entry; fill so delta stays total
                for (std::size_t s = 0; s < 4; ++s)
                    if (!given[q][s])
                        m.delta[q][s] = {int(q), static_cast<Symbol>(s), Move::right};
                continue;
            }
            for (std::size_t s = 0; s < 4; ++s)
                if (!given[q][s])
                    throw partial_transition("machine: no rule for (" + m.state_names[q] +
                                             ", " + symbol_char(static_cast<Symbol>(s)) + ")");
        }
        return m;
    } catch (const parse_error&) {
        if (lenient) return default_reject_machine();
        throw;
    }
}

inline std::string BooleanTM::serialize() const {
    std::ostringstream out;
    out << "states:";
    for (const auto& s : state_names) out << ' ' << s;
    out << "\nstart: " << state_names[start] << "\nfinal:";
    for (std::size_t q = 0; q < state_names.size(); ++q)
        if (final_states[q]) out << ' ' << state_names[q];
    out << '\n';
    if (accept) out << "accept: " << state_names[*accept] << '\n';
    if (reject) out << "reject: " << state_names[*reject] << '\n';
    for (std::size_t q = 0; q < state_names.size(); ++q) {
        if (final_states[q]) continue;
        for (std::size_t s = 0; s < 4; ++s) {
            const Transition& t = delta[q][s];
            out << state_names[q] << ", " << symbol_char(static_cast<Symbol>(s)) << " -> "
                << state_names[t.next] << ", " << symbol_char(t.write) << ", "
                << (t.move == Move::left ? 'L' : 'R') << '\n';
        }
    }
    return out.str();
}

inline BooleanTM default_reject_machine() {
    return parse_tm(
        "states: start wipe halt\n"
        "start: start\n"
        "final: halt\n"
        "reject: halt\n"
        "default-u: as0\n"
        "start, 0 -> wipe, 0, R\n"
        "start, 1 -> wipe, 0, R\n"
        "start, _ -> halt, 0, R\n"
        "wipe, 0 -> wipe, _, R\n"
        "wipe, 1 -> wipe, _, R\n"
        "wipe, u -> wipe, _, R\n"
        "wipe, _ -> halt, _, R\n");
}

// ---------------------------------------------------------------------------
// Configurations and single steps
// ---------------------------------------------------------------------------

struct Configuration {
    int state = 0;
    std::vector<Symbol> tape;  // semi-infinite; cells beyond the vector are blank
    std::int64_t head = 0;
    std::uint64_t steps = 0;

    Symbol read() const {
        return std::size_t(head) < tape.size() ? tape[std::size_t(head)] : Symbol::blank;
    }
};

inline Configuration initial_configuration(const BooleanTM& m, const TritWord& input) {
    Configuration c;
    c.state = m.start;
    c.tape.reserve(input.size());
    for (Trit t : input) c.tape.push_back(symbol_from_trit(t));
    return c;
}

struct TraceEntry {
    std::uint64_t step;
    std::string state;
    std::int64_t head;
    Symbol read;
    Symbol write;
    Move move;
};

inline void step(const BooleanTM& m, Configuration& c, std::vector<TraceEntry>* trace = nullptr) {
    if (m.is_final(c.state)) throw error("step: machine already halted");
    Symbol sym = c.read();
    const Transition& t = m.rule(c.state, sym);
    if (trace)
        trace->push_back({c.steps, m.state_names[c.state], c.head, sym, t.write, t.move});
    if (std::size_t(c.head) >= c.tape.size()) c.tape.resize(std::size_t(c.head) + 1, Symbol::blank);
    c.tape[std::size_t(c.head)] = t.write;
    c.head += t.move == Move::left ? -1 : 1;
    if (c.head < 0) c.head = 0;  // the tape is semi-infinite; a left move at cell 0 stays
    c.state = t.next;
    ++c.steps;
}

inline TritWord tape_output(const std::vector<Symbol>& tape) {
    TritWord out;
    for (Symbol s : tape) {
        if (s == Symbol::blank) break;
        out.push_back(trit_from_symbol(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Simulation outcomes and the uniform stepper interface
// ---------------------------------------------------------------------------

struct SimOutcome {
    bool halted = false;
    TritWord output;  // meaningful only when halted
    std::uint64_t steps = 0;

    static SimOutcome halt(TritWord out, std::uint64_t steps) { return {true, std::move(out), steps}; }
    static SimOutcome budget_exhausted(std::uint64_t steps) { return {false, {}, steps}; }

    friend bool operator==(const SimOutcome& a, const SimOutcome& b) {
        if (a.halted != b.halted) return false;
        if (!a.halted) return true;  // failures compare equal regardless of step counts
        return a.output == b.output;
    }
};

class Stepper {
public:
    virtual ~Stepper() = default;
    virtual bool halted() const = 0;
    virtual void step() = 0;  // precondition: !halted()
    virtual std::uint64_t steps() const = 0;
    virtual TritWord output() const = 0;  // precondition: halted()
    virtual std::int64_t head() const { return 0; }
};

class TableStepper final : public Stepper {
public:
    TableStepper(std::shared_ptr<const BooleanTM> m, const TritWord& input,
                 std::vector<TraceEntry>* trace = nullptr)
        : m_(std::move(m)), c_(initial_configuration(*m_, input)), trace_(trace) {}

    bool halted() const override { return m_->is_final(c_.state); }
    void step() override { mcturing::step(*m_, c_, trace_); }
    std::uint64_t steps() const override { return c_.steps; }
    TritWord output() const override { return tape_output(c_.tape); }
    std::int64_t head() const override { return c_.head; }
    const Configuration& config() const { return c_; }

private:
    std::shared_ptr<const BooleanTM> m_;
    Configuration c_;
    std::vector<TraceEntry>* trace_;
};

// A machine is either a transition table or a host-constructed stepper factory
// with a declared step-cost convention.
class MachineRef {
public:
    using Factory = std::function<std::unique_ptr<Stepper>(const TritWord&)>;

    static MachineRef from_table(BooleanTM m) {
        MachineRef r;
        r.name_ = "table";
        r.table_ = std::make_shared<const BooleanTM>(std::move(m));
        return r;
    }

    static MachineRef virtual_machine(std::string name, Factory factory) {
        MachineRef r;
        r.name_ = std::move(name);
        r.factory_ = std::move(factory);
        return r;
    }

    std::unique_ptr<Stepper> start(const TritWord& input,
                                   std::vector<TraceEntry>* trace = nullptr) const {
        if (table_) return std::make_unique<TableStepper>(table_, input, trace);
        return factory_(input);
    }

    const BooleanTM* table() const { return table_.get(); }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::shared_ptr<const BooleanTM> table_;
    Factory factory_;
};

inline SimOutcome simulate(const MachineRef& m, const TritWord& input, std::uint64_t budget,
                           std::vector<TraceEntry>* trace = nullptr) {
    auto st = m.start(input, trace);
    while (!st->halted()) {
        if (st->steps() >= budget) return SimOutcome::budget_exhausted(st->steps());
        st->step();
    }
    return SimOutcome::halt(st->output(), st->steps());
}

inline SimOutcome utm_bounded(const MachineRef& m, const TritWord& input, std::uint64_t bound) {
    if (bound == 0) throw error("utm_bounded: bound must be positive");
    return simulate(m, input, bound);
}

// ---------------------------------------------------------------------------
// Natural machines: state words evolving under a hazard-aware circuit
// ---------------------------------------------------------------------------

struct NaturalTraceEntry {
    std::uint64_t step;
    TritWord state;
    std::int64_t head;
    Trit read_blank, read_value;
    Trit write_blank, write_value;
    Move move;
};

struct NaturalTM {
    int state_width = 0;
    Circuit transition;  // state_width + 2 lines in and out (blank flag, value)
    std::function<Move(std::size_t, std::uint64_t)> head_schedule;
    TritWord start_state;
    std::vector<TritWord> finals;

    void validate() const {
        if (transition.n_inputs != state_width + 2)
            throw error("natural machine: transition arity mismatch");
        if (transition.outputs.size() != std::size_t(state_width) + 2)
            throw error("natural machine: transition output arity mismatch");
        if (!start_state.stable() || start_state.size() != std::size_t(state_width))
            throw error("natural machine: start state must be a stable word");
        if (finals.empty()) throw error("natural machine: empty final set");
        for (const TritWord& f : finals)
            if (!f.stable() || f.size() != std::size_t(state_width))
                throw error("natural machine: final states must be stable words");
        for (std::size_t line = 0; line < transition.outputs.size(); ++line)
            if (!is_natural(tabulate_line(transition, line)).natural())
                throw error("natural machine: transition line " + std::to_string(line) +
                            " is not natural");
    }
};

inline SimOutcome simulate_natural(const NaturalTM& m, const TritWord& input,
                                   std::uint64_t budget,
                                   std::vector<NaturalTraceEntry>* trace = nullptr) {
    struct Cell {
        Trit blank, value;
    };
    std::vector<Cell> tape;
    tape.reserve(input.size());
    for (Trit t : input) tape.push_back({Trit::zero, t});
    auto cell_at = [&](std::int64_t h) -> Cell {
        return std::size_t(h) < tape.size() ? tape[std::size_t(h)] : Cell{Trit::one, Trit::zero};
    };

    TritWord state = m.start_state;
    std::int64_t head = 0;
    std::uint64_t steps = 0;
    auto is_final = [&](const TritWord& s) {
        for (const TritWord& f : m.finals)
            if (s == f) return true;
        return false;
    };
    auto output = [&] {
        TritWord out;
        for (const Cell& c : tape) {
            if (c.blank != Trit::zero) break;
            out.push_back(c.value);
        }
        return out;
    };

    if (is_final(state)) return SimOutcome::halt(output(), 0);
    while (steps < budget) {
        Cell c = cell_at(head);
        TritWord in = state;
        in.push_back(c.blank);
        in.push_back(c.value);
        TritWord out = eval_kleene(m.transition, in);
        TritWord next;
        for (int i = 0; i < m.state_width; ++i) next.push_back(out[std::size_t(i)]);
        Cell wr{out[std::size_t(m.state_width)], out[std::size_t(m.state_width) + 1]};
        Move mv = m.head_schedule(input.size(), steps);
        if (trace)
            trace->push_back({steps, state, head, c.blank, c.value, wr.blank, wr.value, mv});
        if (std::size_t(head) >= tape.size()) tape.resize(std::size_t(head) + 1, {Trit::one, Trit::zero});
        tape[std::size_t(head)] = wr;
        head += mv == Move::left ? -1 : 1;
        if (head < 0) head = 0;
        state = next;
        ++steps;
        if (is_final(state)) return SimOutcome::halt(output(), steps);
    }
    return SimOutcome::budget_exhausted(steps);
}

// ---------------------------------------------------------------------------
// Obliviousness probe: does the head trajectory depend only on input length?
// ---------------------------------------------------------------------------

struct ObliviousReport {
    bool consistent = true;
    std::vector<std::int64_t> trajectory;  // head position before each step
    bool halts = false;
    std::uint64_t halt_step = 0;
    TritWord witness_a, witness_b;
    std::uint64_t diverge_step = 0;
};

inline ObliviousReport is_oblivious_probe(const MachineRef& m, std::size_t length,
                                          std::uint64_t budget, std::size_t samples,
                                          std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    ObliviousReport rep;
    TritWord first_input;
    for (std::size_t k = 0; k < samples; ++k) {
        TritWord x;
        for (std::size_t i = 0; i < length; ++i)
            x.push_back(rng() % 2 ? Trit::one : Trit::zero);
        auto st = m.start(x);
        std::vector<std::int64_t> traj;
        while (!st->halted() && st->steps() < budget) {
            traj.push_back(st->head());
            st->step();
        }
        bool halts = st->halted();
        if (k == 0) {
            rep.trajectory = traj;
            rep.halts = halts;
            rep.halt_step = st->steps();
            first_input = x;
            continue;
        }
        std::uint64_t diverge = 0;
        bool differ = false;
        std::size_t common = std::min(rep.trajectory.size(), traj.size());
        for (std::size_t i = 0; i < common; ++i) {
            if (rep.trajectory[i] != traj[i]) {
                differ = true;
                diverge = i;
                break;
            }
        }
        if (!differ && (traj.size() != rep.trajectory.size() || halts != rep.halts)) {
            differ = true;
            diverge = common;
        }
        if (differ) {
            rep.consistent = false;
            rep.witness_a = first_input;
            rep.witness_b = x;
            rep.diverge_step = diverge;
            return rep;
        }
    }
    return rep;
}

}  // namespace mcturing
