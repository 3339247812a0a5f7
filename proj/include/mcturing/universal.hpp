#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "machine.hpp"
#include "trit.hpp"

namespace mcturing {

struct non_total_within_budget : error {
    non_total_within_budget(std::string msg, TritWord w)
        : error(std::move(msg)), witness(std::move(w)) {}
    TritWord witness;
};

// or_u(and_u(a, not_u(s)), or_u(and_u(b, s), and_u(a, b)))
constexpr Trit cmux_bit(Trit a, Trit b, Trit s) {
    return or_u(and_u(a, not_u(s)), or_u(and_u(b, s), and_u(a, b)));
}

// ---------------------------------------------------------------------------
// The selection tape and the oblivious pairwise-fold selection routine
// ---------------------------------------------------------------------------

struct SelectionTape {
    TritWord cells;
    int levels = 0;
    std::uint64_t ops = 0;  // one unit per cmux application and per cell read/write

    static SelectionTape from_word(TritWord cells) {
        SelectionTape t;
        std::size_t n = cells.size();
        if (n < 2) throw error("selection tape: need at least one level (2 cells)");
        int levels = 0;
        while ((std::size_t(1) << levels) < n) ++levels;
        if ((std::size_t(1) << levels) != n)
            throw error("selection tape: cell count must be a power of two");
        t.cells = std::move(cells);
        t.levels = levels;
        return t;
    }
};

struct TCmuxResult {
    Trit value = Trit::u;
    std::uint64_t cmux_applications = 0;
    std::vector<std::uint64_t> trajectory;  // cell indices in touch order
};

// Folds the upper half onto the lower half once per select bit, leading bit
// first. The touched-cell sequence depends only on the number of levels.
inline TCmuxResult t_cmux(SelectionTape& tape, const TritWord& select) {
    if (select.size() != std::size_t(tape.levels))
        throw length_mismatch("t_cmux: select word must have one trit per level");
    TCmuxResult res;
    for (int i = 0; i < tape.levels; ++i) {
        std::size_t stride = std::size_t(1) << (tape.levels - i - 1);
        for (std::size_t j = 0; j < stride; ++j) {
            Trit a = tape.cells[j];
            Trit b = tape.cells[j + stride];
            tape.cells.set(j, cmux_bit(a, b, select[std::size_t(i)]));
            res.trajectory.push_back(j);
            res.trajectory.push_back(j + stride);
            res.trajectory.push_back(j);
            tape.ops += 4;  // two reads, one cmux, one write
            ++res.cmux_applications;
        }
    }
    res.value = tape.cells[0];
    return res;
}

// ---------------------------------------------------------------------------
// The universal construction: table all stable behaviours, then select
// ---------------------------------------------------------------------------

struct BlowupRecord {
    std::size_t input_length = 0;
    std::uint64_t total_steps = 0;
    std::uint64_t selection_ops = 0;
    std::vector<std::uint64_t> per_resolution_steps;
};

struct UniversalResult {
    Trit value = Trit::u;
    BlowupRecord record;
};

inline UniversalResult mc_universal(const MachineRef& m, const TritWord& x,
                                    std::uint64_t per_run_budget,
                                    std::size_t capacity = default_u_capacity) {
    const std::size_t n = x.size();
    if (n > capacity)
        throw capacity_error("universal simulation tables 2^" + std::to_string(n) +
                             " entries, beyond capacity 2^" + std::to_string(capacity));
    UniversalResult res;
    res.record.input_length = n;

    auto run = [&](const TritWord& w) {
        SimOutcome out = simulate(m, w, per_run_budget);
        if (!out.halted)
            throw non_total_within_budget(
                "universal simulation: machine did not halt within " +
                    std::to_string(per_run_budget) + " steps on " + w.str(),
                w);
        if (out.output.size() != 1)
            throw error("universal simulation: runs must output a single trit, got \"" +
                        out.output.str() + "\"");
        res.record.per_resolution_steps.push_back(out.steps);
        res.record.total_steps += out.steps;
        return out.output[0];
    };

    if (n == 0) {
        res.value = run(x);
        return res;
    }
    TritWord cells;
    for (std::uint64_t i = 0; i < (std::uint64_t(1) << n); ++i)
        cells.push_back(run(index_to_word(i, n)));
    SelectionTape tape = SelectionTape::from_word(std::move(cells));
    res.value = t_cmux(tape, x).value;
    res.record.selection_ops = tape.ops;
    res.record.total_steps += tape.ops;
    return res;
}

// ---------------------------------------------------------------------------
// Bounded variant: cut every resolution run at T and aggregate the outcomes
// ---------------------------------------------------------------------------

struct ExtendedOutcome {
    enum class Kind { Value, NoHalt, USym };
    Kind kind = Kind::NoHalt;
    Trit value = Trit::u;  // meaningful only for Kind::Value

    static ExtendedOutcome of(Trit v) { return {Kind::Value, v}; }
    static ExtendedOutcome no_halt() { return {Kind::NoHalt, Trit::u}; }
    static ExtendedOutcome usym() { return {Kind::USym, Trit::u}; }
    friend bool operator==(const ExtendedOutcome&, const ExtendedOutcome&) = default;
};

struct BoundedResult {
    ExtendedOutcome outcome;
    BlowupRecord record;
};

inline BoundedResult mc_universal_bounded(const MachineRef& m, const TritWord& x,
                                          std::uint64_t bound,
                                          std::size_t capacity = default_u_capacity) {
    BoundedResult res;
    res.record.input_length = x.size();
    bool any_value = false, any_nohalt = false, mixed = false;
    Trit value = Trit::u;
    for (const TritWord& w : Resolution(x, capacity)) {
        SimOutcome out = utm_bounded(m, w, bound);
        res.record.per_resolution_steps.push_back(out.steps);
        res.record.total_steps += out.steps;
        if (!out.halted) {
            any_nohalt = true;
            continue;
        }
        if (out.output.size() != 1 || !is_stable(out.output[0]))
            throw error("bounded universal simulation: runs must output a single bit, got \"" +
                        out.output.str() + "\"");
        if (any_value && out.output[0] != value) mixed = true;
        value = out.output[0];
        any_value = true;
    }
    if (!any_value)
        res.outcome = ExtendedOutcome::no_halt();
    else if (mixed || any_nohalt)
        res.outcome = ExtendedOutcome::usym();
    else
        res.outcome = ExtendedOutcome::of(value);
    return res;
}

// ---------------------------------------------------------------------------
// Blowup bench: total universal-simulation work as the input grows
// ---------------------------------------------------------------------------

inline std::vector<BlowupRecord> blowup_bench(
    const std::function<MachineRef(std::size_t)>& family, std::size_t n_min, std::size_t n_max,
    const std::function<std::uint64_t(std::size_t)>& per_run_budget,
    std::size_t capacity = default_u_capacity) {
    std::vector<BlowupRecord> records;
    for (std::size_t n = n_min; n <= n_max; ++n)
        records.push_back(
            mc_universal(family(n), uniform_word(n, Trit::u), per_run_budget(n), capacity).record);
    return records;
}

}  // namespace mcturing
