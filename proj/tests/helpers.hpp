#pragma once

#include <mcturing/machine.hpp>
#include <mcturing/problems.hpp>
#include <mcturing/trit.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace mcturing::testing {

inline Trit random_trit(std::mt19937_64& rng) {
    switch (rng() % 3) {
        case 0: return Trit::zero;
        case 1: return Trit::one;
        default: return Trit::u;
    }
}

inline TritWord random_word(std::mt19937_64& rng, std::size_t n) {
    TritWord w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(random_trit(rng));
    return w;
}

inline TritWord random_stable_word(std::mt19937_64& rng, std::size_t n) {
    TritWord w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(rng() % 2 ? Trit::one : Trit::zero);
    return w;
}

// Random Boolean function on n bits as a truth table indexed by word_to_index.
inline std::vector<Trit> random_boolean_table(std::mt19937_64& rng, std::size_t n) {
    std::vector<Trit> table(std::size_t(1) << n);
    for (auto& t : table) t = rng() % 2 ? Trit::one : Trit::zero;
    return table;
}

// Raise some u positions of w to random stable values: result is >= w.
inline TritWord random_above(std::mt19937_64& rng, const TritWord& w) {
    TritWord y = w;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] == Trit::u && rng() % 2)
            y.set(i, rng() % 2 ? Trit::one : Trit::zero);
    return y;
}

// Random total machine with `working` non-final states plus one final state.
// Some of these halt quickly, some loop forever; both are wanted.
inline BooleanTM random_machine(std::mt19937_64& rng, int working) {
    BooleanTM m;
    for (int q = 0; q < working; ++q) m.state_names.push_back("q" + std::to_string(q));
    m.state_names.push_back("halt");
    m.start = 0;
    m.final_states.assign(m.state_names.size(), false);
    m.final_states.back() = true;
    m.delta.assign(m.state_names.size(), {});
    for (int q = 0; q < working; ++q)
        for (std::size_t s = 0; s < 4; ++s) {
            Transition t;
            // halting needs to stay rare enough that budgets actually bite
            t.next = rng() % 8 == 0 ? working : int(rng() % std::uint64_t(working));
            t.write = static_cast<Symbol>(rng() % 4);
            t.move = rng() % 2 ? Move::left : Move::right;
            m.delta[q][s] = t;
        }
    for (std::size_t s = 0; s < 4; ++s)
        m.delta[std::size_t(working)][s] = {working, static_cast<Symbol>(s), Move::right};
    return m;
}

// Random formula over n_vars variables with roughly `budget` nodes.
inline Formula random_formula(std::mt19937_64& rng, std::size_t n_vars, std::size_t budget) {
    Formula f;
    std::function<int(std::size_t)> build = [&](std::size_t remaining) -> int {
        int id = int(f.nodes.size());
        std::size_t pick = remaining <= 1 ? 0 : rng() % 4;
        switch (pick) {
            case 1: f.nodes.push_back({Formula::Op::Not}); break;
            case 2: f.nodes.push_back({Formula::Op::And}); break;
            case 3: f.nodes.push_back({Formula::Op::Or}); break;
            default: f.nodes.push_back({Formula::Op::Var, int(rng() % n_vars)}); break;
        }
        switch (f.nodes[std::size_t(id)].op) {
            case Formula::Op::Var: break;
            case Formula::Op::Not: f.nodes[std::size_t(id)].a = build(remaining - 1); break;
            default: {
                std::size_t half = std::max<std::size_t>(1, (remaining - 1) / 2);
                f.nodes[std::size_t(id)].a = build(half);
                f.nodes[std::size_t(id)].b = build(half);
            }
        }
        return id;
    };
    build(budget);
    return f;
}

// All formulas over variables x0..x{n_vars-1} with exactly `count` nodes.
inline std::vector<Formula> formulas_of_size(std::size_t count, std::size_t n_vars) {
    std::vector<Formula> out;
    if (count == 0) return out;
    if (count == 1) {
        for (std::size_t v = 0; v < n_vars; ++v) {
            Formula f;
            f.nodes.push_back({Formula::Op::Var, int(v)});
            out.push_back(std::move(f));
        }
        return out;
    }
    auto append = [](Formula& dst, const Formula& src) {
        int shift = int(dst.nodes.size());
        for (Formula::Node n : src.nodes) {
            if (n.a >= 0) n.a += shift;
            if (n.b >= 0) n.b += shift;
            dst.nodes.push_back(n);
        }
        return shift;
    };
    for (const Formula& sub : formulas_of_size(count - 1, n_vars)) {
        Formula f;
        f.nodes.push_back({Formula::Op::Not});
        f.nodes[0].a = append(f, sub);
        out.push_back(std::move(f));
    }
    for (std::size_t left = 1; left + 1 < count; ++left) {
        auto lhs = formulas_of_size(left, n_vars);
        auto rhs = formulas_of_size(count - 1 - left, n_vars);
        for (Formula::Op op : {Formula::Op::And, Formula::Op::Or})
            for (const Formula& a : lhs)
                for (const Formula& b : rhs) {
                    Formula f;
                    f.nodes.push_back({op});
                    f.nodes[0].a = append(f, a);
                    f.nodes[0].b = append(f, b);
                    out.push_back(std::move(f));
                }
    }
    return out;
}

inline std::vector<Formula> formulas_up_to(std::size_t max_nodes, std::size_t n_vars) {
    std::vector<Formula> out;
    for (std::size_t c = 1; c <= max_nodes; ++c)
        for (Formula& f : formulas_of_size(c, n_vars)) out.push_back(std::move(f));
    return out;
}

}  // namespace mcturing::testing
