#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "machine.hpp"

namespace mcturing::corpus {

// ---------------------------------------------------------------------------
// Table machines. The scan machines share a skeleton: cell 0 keeps its value
// as a boundary marker, the rest of the input is erased on the way right, and
// the walk back over blanks stops at the marker to deposit the answer.
// ---------------------------------------------------------------------------

inline const char* parity_tm =
    "# parity of the input bits, written to cell 0\n"
    "states: start scan_e scan_o back_e back_o halt\n"
    "start: start\n"
    "final: halt\n"
    "default-u: as0\n"
    "start, 0 -> scan_e, 0, R\n"
    "start, 1 -> scan_o, 1, R\n"
    "start, _ -> halt, 0, R\n"
    "scan_e, 0 -> scan_e, _, R\n"
    "scan_e, 1 -> scan_o, _, R\n"
    "scan_e, _ -> back_e, _, L\n"
    "scan_o, 0 -> scan_o, _, R\n"
    "scan_o, 1 -> scan_e, _, R\n"
    "scan_o, _ -> back_o, _, L\n"
    "back_e, _ -> back_e, _, L\n"
    "back_e, 0 -> halt, 0, R\n"
    "back_e, 1 -> halt, 0, R\n"
    "back_o, _ -> back_o, _, L\n"
    "back_o, 0 -> halt, 1, R\n"
    "back_o, 1 -> halt, 1, R\n";

inline const char* and_tm =
    "# conjunction of the input bits; empty input counts as 1\n"
    "states: start scan_1 scan_0 back_1 back_0 halt\n"
    "start: start\n"
    "final: halt\n"
    "default-u: as0\n"
    "start, 0 -> scan_0, 0, R\n"
    "start, 1 -> scan_1, 1, R\n"
    "start, _ -> halt, 1, R\n"
    "scan_1, 0 -> scan_0, _, R\n"
    "scan_1, 1 -> scan_1, _, R\n"
    "scan_1, _ -> back_1, _, L\n"
    "scan_0, 0 -> scan_0, _, R\n"
    "scan_0, 1 -> scan_0, _, R\n"
    "scan_0, _ -> back_0, _, L\n"
    "back_1, _ -> back_1, _, L\n"
    "back_1, 0 -> halt, 1, R\n"
    "back_1, 1 -> halt, 1, R\n"
    "back_0, _ -> back_0, _, L\n"
    "back_0, 0 -> halt, 0, R\n"
    "back_0, 1 -> halt, 0, R\n";

inline const char* nand_tm =
    "# rejects exactly the all-ones input: 0 iff every bit is 1\n"
    "states: start scan_1 scan_0 back_1 back_0 halt\n"
    "start: start\n"
    "final: halt\n"
    "default-u: as0\n"
    "start, 0 -> scan_0, 0, R\n"
    "start, 1 -> scan_1, 1, R\n"
    "start, _ -> halt, 0, R\n"
    "scan_1, 0 -> scan_0, _, R\n"
    "scan_1, 1 -> scan_1, _, R\n"
    "scan_1, _ -> back_1, _, L\n"
    "scan_0, 0 -> scan_0, _, R\n"
    "scan_0, 1 -> scan_0, _, R\n"
    "scan_0, _ -> back_0, _, L\n"
    "back_1, _ -> back_1, _, L\n"
    "back_1, 0 -> halt, 0, R\n"
    "back_1, 1 -> halt, 0, R\n"
    "back_0, _ -> back_0, _, L\n"
    "back_0, 0 -> halt, 1, R\n"
    "back_0, 1 -> halt, 1, R\n";

inline const char* constant_tm =
    "# erases the input and answers 1 regardless\n"
    "states: start wipe halt\n"
    "start: start\n"
    "final: halt\n"
    "default-u: as0\n"
    "start, 0 -> wipe, 1, R\n"
    "start, 1 -> wipe, 1, R\n"
    "start, _ -> halt, 1, R\n"
    "wipe, 0 -> wipe, _, R\n"
    "wipe, 1 -> wipe, _, R\n"
    "wipe, _ -> halt, _, R\n";

inline const char* looper_tm =
    "# never halts\n"
    "states: spin\n"
    "start: spin\n"
    "final:\n"
    "spin, 0 -> spin, 0, R\n"
    "spin, 1 -> spin, 1, R\n"
    "spin, u -> spin, u, R\n"
    "spin, _ -> spin, _, R\n";

inline const char* immediate_halt_tm =
    "# the start state is final: halts at step 0 with the input untouched\n"
    "states: done\n"
    "start: done\n"
    "final: done\n";

inline const char* detect_one_tm =
    "# halts with answer 1 iff some input bit is 1; loops forever otherwise\n"
    "states: start seek back_1 wipe halt\n"
    "start: start\n"
    "final: halt\n"
    "default-u: as0\n"
    "start, 1 -> wipe, 1, R\n"
    "start, 0 -> seek, 0, R\n"
    "start, _ -> start, _, R\n"
    "seek, 0 -> seek, _, R\n"
    "seek, 1 -> back_1, _, L\n"
    "seek, _ -> seek, _, R\n"
    "back_1, _ -> back_1, _, L\n"
    "back_1, 0 -> halt, 1, R\n"
    "back_1, 1 -> halt, 1, R\n"
    "wipe, 0 -> wipe, _, R\n"
    "wipe, 1 -> wipe, _, R\n"
    "wipe, _ -> halt, _, R\n";

// Majority via a difference counter carried in the state, exact for inputs up
// to length 8 (the counter saturates at +-8). Ties count as no majority.
inline std::string majority_tm_text() {
    const int cap = 8;
    auto dname = [&](int d) {
        return d < 0 ? "d_m" + std::to_string(-d) : "d_p" + std::to_string(d);
    };
    std::ostringstream out;
    out << "# majority: 1 iff strictly more ones than zeros (exact up to length 8)\n";
    out << "states: start";
    for (int d = -cap; d <= cap; ++d) out << ' ' << dname(d);
    out << " back_0 back_1 halt\n";
    out << "start: start\nfinal: halt\ndefault-u: as0\n";
    out << "start, 0 -> " << dname(-1) << ", 0, R\n";
    out << "start, 1 -> " << dname(1) << ", 1, R\n";
    out << "start, _ -> halt, 0, R\n";
    for (int d = -cap; d <= cap; ++d) {
        out << dname(d) << ", 0 -> " << dname(std::max(d - 1, -cap)) << ", _, R\n";
        out << dname(d) << ", 1 -> " << dname(std::min(d + 1, cap)) << ", _, R\n";
        out << dname(d) << ", _ -> " << (d > 0 ? "back_1" : "back_0") << ", _, L\n";
    }
    for (int b = 0; b <= 1; ++b) {
        out << "back_" << b << ", _ -> back_" << b << ", _, L\n";
        out << "back_" << b << ", 0 -> halt, " << b << ", R\n";
        out << "back_" << b << ", 1 -> halt, " << b << ", R\n";
    }
    return out.str();
}

inline BooleanTM machine(const std::string& name) {
    if (name == "parity") return parse_tm(parity_tm);
    if (name == "and") return parse_tm(and_tm);
    if (name == "nand") return parse_tm(nand_tm);
    if (name == "constant") return parse_tm(constant_tm);
    if (name == "majority") return parse_tm(majority_tm_text());
    if (name == "looper") return parse_tm(looper_tm);
    if (name == "immediate-halt") return parse_tm(immediate_halt_tm);
    if (name == "detect-one") return parse_tm(detect_one_tm);
    throw error("corpus: unknown machine " + name);
}

inline MachineRef machine_ref(const std::string& name) {
    return MachineRef::from_table(machine(name));
}

// ---------------------------------------------------------------------------
// Natural twins of the scan machines. State word (phase1, phase0, acc):
// phase 00 start, 01 scan, 10 back, 11 done; symbols ride two lines (blank
// flag, value). The head schedule mirrors the table skeleton's trajectory.
// ---------------------------------------------------------------------------

inline Move scan_schedule(std::size_t n, std::uint64_t t) {
    if (t < n) return Move::right;
    if (t < 2 * n) return Move::left;
    return Move::right;
}

struct NaturalPair {
    NaturalTM natural;
    BooleanTM table;
    // table state name for each reachable natural state word
    std::map<std::string, std::string> state_names;
};

namespace detail {

struct PhaseLines {
    int phi1, phi0, acc, blank, value;       // inputs
    int n_phi1, n_phi0, n_blank;             // negations
    int phi1_next, phi0_next, blank_next;    // shared outputs
};

inline PhaseLines emit_phase_logic(CircuitBuilder& cb) {
    PhaseLines w{};
    w.phi1 = cb.add_input(0);
    w.phi0 = cb.add_input(1);
    w.acc = cb.add_input(2);
    w.blank = cb.add_input(3);
    w.value = cb.add_input(4);
    w.n_phi1 = cb.add_not(w.phi1);
    w.n_phi0 = cb.add_not(w.phi0);
    w.n_blank = cb.add_not(w.blank);
    w.phi1_next = cb.add_or(w.phi1, w.blank);
    int xnor = cb.add_or(cb.add_and(w.phi1, w.phi0), cb.add_and(w.n_phi1, w.n_phi0));
    w.phi0_next = cb.add_or(xnor, w.n_blank);
    w.blank_next = cb.add_or(cb.add_and(w.n_phi1, w.phi0), cb.add_and(w.phi1, w.blank));
    return w;
}

}  // namespace detail

inline NaturalPair natural_parity_pair() {
    CircuitBuilder cb;
    auto w = detail::emit_phase_logic(cb);
    // acc' = acc XOR (value AND NOT phi1): updates only while scanning
    int upd = cb.add_and(w.value, w.n_phi1);
    int n_upd = cb.add_not(upd);
    int n_acc = cb.add_not(w.acc);
    int acc_next = cb.add_or(cb.add_and(w.acc, n_upd), cb.add_and(n_acc, upd));
    // value' = input value at start (marker), acc at the back-marker step
    int at_start = cb.add_and(w.n_phi1, w.n_phi0);
    int value_next =
        cb.add_or(cb.add_and(at_start, w.value), cb.add_and(w.phi1, cb.add_and(w.acc, w.n_blank)));
    NaturalPair pair;
    pair.natural.state_width = 3;
    pair.natural.transition =
        cb.build({w.phi1_next, w.phi0_next, acc_next, w.blank_next, value_next});
    pair.natural.head_schedule = scan_schedule;
    pair.natural.start_state = TritWord::parse("000");
    pair.natural.finals = {TritWord::parse("110"), TritWord::parse("111")};
    pair.natural.validate();
    pair.table = machine("parity");
    pair.state_names = {{"000", "start"},  {"010", "scan_e"}, {"011", "scan_o"},
                        {"100", "back_e"}, {"101", "back_o"}, {"110", "halt"},
                        {"111", "halt"}};
    return pair;
}

inline NaturalPair natural_and_pair() {
    CircuitBuilder cb;
    auto w = detail::emit_phase_logic(cb);
    // acc' = acc AND (value OR blank OR phi1): blanks and later phases keep acc
    int keep = cb.add_or(w.value, cb.add_or(w.blank, w.phi1));
    int acc_next = cb.add_and(w.acc, keep);
    // value' = (value OR blank) at start: marker, or the answer 1 on empty input
    int at_start = cb.add_and(w.n_phi1, w.n_phi0);
    int value_next = cb.add_or(cb.add_and(at_start, cb.add_or(w.value, w.blank)),
                               cb.add_and(w.phi1, cb.add_and(w.acc, w.n_blank)));
    NaturalPair pair;
    pair.natural.state_width = 3;
    pair.natural.transition =
        cb.build({w.phi1_next, w.phi0_next, acc_next, w.blank_next, value_next});
    pair.natural.head_schedule = scan_schedule;
    pair.natural.start_state = TritWord::parse("001");
    pair.natural.finals = {TritWord::parse("110"), TritWord::parse("111")};
    pair.natural.validate();
    pair.table = machine("and");
    pair.state_names = {{"001", "start"},  {"010", "scan_0"}, {"011", "scan_1"},
                        {"100", "back_0"}, {"101", "back_1"}, {"110", "halt"},
                        {"111", "halt"}};
    return pair;
}

// ---------------------------------------------------------------------------
// Circuits and formulas
// ---------------------------------------------------------------------------

inline Circuit circuit(const std::string& name) {
    if (name == "mux_bit") return build_mux_bit();
    if (name == "cmux_bit") return build_cmux_bit();
    if (name == "cmux_tree_1") return build_cmux_tree(1);
    if (name == "cmux_tree_2") return build_cmux_tree(2);
    if (name == "cmux_tree_3") return build_cmux_tree(3);
    throw error("corpus: unknown circuit " + name);
}

inline const char* formulas_text =
    "| x0 ! x0\n"
    "& x0 ! x0\n"
    "| ! x0 | ! x1 & x0 x1\n"
    "& | x0 x1 ! x0\n";

struct Entry {
    std::string name;
    std::string kind;  // machine | natural-machine | circuit | formula-set
    std::string file;  // suggested fixture file name; empty for built-in objects
};

inline std::vector<Entry> list() {
    return {
        {"parity", "machine", "parity.tm"},
        {"and", "machine", "and.tm"},
        {"nand", "machine", "nand.tm"},
        {"constant", "machine", "constant.tm"},
        {"majority", "machine", "majority.tm"},
        {"looper", "machine", "looper.tm"},
        {"immediate-halt", "machine", "immediate_halt.tm"},
        {"detect-one", "machine", "detect_one.tm"},
        {"natural-parity", "natural-machine", ""},
        {"natural-and", "natural-machine", ""},
        {"mux_bit", "circuit", "mux_bit.ckt"},
        {"cmux_bit", "circuit", "cmux_bit.ckt"},
        {"cmux_tree_1", "circuit", "cmux_tree_1.ckt"},
        {"cmux_tree_2", "circuit", "cmux_tree_2.ckt"},
        {"cmux_tree_3", "circuit", "cmux_tree_3.ckt"},
        {"formulas", "formula-set", "basic.formula"},
    };
}

inline std::string text(const std::string& name) {
    if (name == "majority") return majority_tm_text();
    if (name == "parity") return parity_tm;
    if (name == "and") return and_tm;
    if (name == "nand") return nand_tm;
    if (name == "constant") return constant_tm;
    if (name == "looper") return looper_tm;
    if (name == "immediate-halt") return immediate_halt_tm;
    if (name == "detect-one") return detect_one_tm;
    if (name == "formulas") return formulas_text;
    return circuit(name).serialize();
}

}  // namespace mcturing::corpus
