#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "machine.hpp"
#include "trit.hpp"
#include "universal.hpp"

namespace mcturing {

struct instance_malformed : error {
    using error::error;
};

// ---------------------------------------------------------------------------
// Propositional formulas in prefix notation over & | ! x<i>
// ---------------------------------------------------------------------------

class Formula {
public:
    enum class Op { Var, Not, And, Or };
    struct Node {
        Op op;
        int var = -1;
        int a = -1, b = -1;
        friend bool operator==(const Node&, const Node&) = default;
    };
    std::vector<Node> nodes;  // preorder, root at index 0

    static Formula parse(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::vector<std::string> toks;
        std::string t;
        while (in >> t) toks.push_back(t);
        Formula f;
        std::size_t pos = 0;
        f.parse_node(toks, pos);
        if (pos != toks.size()) throw parse_error("formula: trailing tokens");
        return f;
    }

    std::size_t node_count() const { return nodes.size(); }

    std::size_t n_vars() const {
        int m = -1;
        for (const Node& n : nodes)
            if (n.op == Op::Var) m = std::max(m, n.var);
        return std::size_t(m + 1);
    }

    std::string str() const {
        std::string out;
        print(0, out);
        return out;
    }

    // Boolean evaluation on a stable assignment
    Trit eval(const TritWord& y) const {
        if (!y.stable()) throw error("formula eval: assignment must be stable");
        if (y.size() < n_vars()) throw length_mismatch("formula eval: too few variables");
        return eval_node(0, y);
    }

    friend bool operator==(const Formula&, const Formula&) = default;

private:
    int parse_node(const std::vector<std::string>& toks, std::size_t& pos) {
        if (pos >= toks.size()) throw parse_error("formula: unexpected end");
        std::string tok = toks[pos++];
        int id = int(nodes.size());
        if (tok == "&" || tok == "|") {
            nodes.push_back({tok == "&" ? Op::And : Op::Or});
            nodes[id].a = parse_node(toks, pos);
            nodes[id].b = parse_node(toks, pos);
        } else if (tok == "!") {
            nodes.push_back({Op::Not});
            nodes[id].a = parse_node(toks, pos);
        } else if (tok.size() > 1 && tok[0] == 'x') {
            int var;
            try {
                var = std::stoi(tok.substr(1));
            } catch (const std::exception&) {
                throw parse_error("formula: bad variable '" + tok + "'");
            }
            if (var < 0) throw parse_error("formula: negative variable index");
            nodes.push_back({Op::Var, var});
        } else {
            throw parse_error("formula: unknown token '" + tok + "'");
        }
        return id;
    }

    void print(int id, std::string& out) const {
        const Node& n = nodes[std::size_t(id)];
        switch (n.op) {
            case Op::Var: out += 'x' + std::to_string(n.var); return;
            case Op::Not:
                out += "! ";
                print(n.a, out);
                return;
            case Op::And:
            case Op::Or:
                out += n.op == Op::And ? "& " : "| ";
                print(n.a, out);
                out += ' ';
                print(n.b, out);
                return;
        }
    }

    Trit eval_node(int id, const TritWord& y) const {
        const Node& n = nodes[std::size_t(id)];
        switch (n.op) {
            case Op::Var: return y[std::size_t(n.var)];
            case Op::Not: return not_u(eval_node(n.a, y));
            case Op::And: return and_u(eval_node(n.a, y), eval_node(n.b, y));
            default: return or_u(eval_node(n.a, y), eval_node(n.b, y));
        }
    }
};

inline std::vector<Formula> parse_formula_lines(std::string_view text) {
    std::vector<Formula> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        out.push_back(Formula::parse(line));
    }
    return out;
}

inline bool decide_tautology_bruteforce(const Formula& f) {
    std::size_t n = f.n_vars();
    if (n > default_u_capacity) throw capacity_error("tautology check: too many variables");
    for (std::uint64_t i = 0; i < (std::uint64_t(1) << n); ++i)
        if (f.eval(index_to_word(i, n)) != Trit::one) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Self-delimiting formula encoding over {0,1}: gamma(n_vars), gamma(payload
// length), then a postfix code stream (Var '00'+index, And '01', Or '10',
// Not '11'). Variable indices use the fixed width implied by n_vars.
// ---------------------------------------------------------------------------

namespace detail {

inline void append_bits(TritWord& w, std::uint64_t value, std::size_t width) {
    for (std::size_t i = width; i-- > 0;)
        w.push_back((value >> i) & 1 ? Trit::one : Trit::zero);
}

inline void append_gamma(TritWord& w, std::uint64_t value) {
    if (value == 0) throw error("gamma code: value must be positive");
    std::size_t bits = 0;
    for (std::uint64_t v = value; v; v >>= 1) ++bits;
    for (std::size_t i = 1; i < bits; ++i) w.push_back(Trit::zero);
    append_bits(w, value, bits);
}

struct BitReader {
    const TritWord& w;
    std::size_t pos = 0;

    std::optional<int> next_bit() {
        if (pos >= w.size() || !is_stable(w[pos])) return std::nullopt;
        return w[pos++] == Trit::one ? 1 : 0;
    }

    std::optional<std::uint64_t> read_bits(std::size_t width) {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < width; ++i) {
            auto b = next_bit();
            if (!b) return std::nullopt;
            v = (v << 1) | std::uint64_t(*b);
        }
        return v;
    }

    std::optional<std::uint64_t> read_gamma() {
        std::size_t zeros = 0;
        while (true) {
            auto b = next_bit();
            if (!b) return std::nullopt;
            if (*b == 1) break;
            if (++zeros > 62) return std::nullopt;
        }
        std::uint64_t v = 1;
        for (std::size_t i = 0; i < zeros; ++i) {
            auto b = next_bit();
            if (!b) return std::nullopt;
            v = (v << 1) | std::uint64_t(*b);
        }
        return v;
    }
};

inline std::size_t var_width(std::size_t n_vars) {
    std::size_t w = 1;
    while ((std::size_t(1) << w) < n_vars) ++w;
    return w;
}

}  // namespace detail

inline TritWord encode_formula(const Formula& f) {
    std::size_t n = f.n_vars();
    if (n == 0) throw error("encode_formula: formulas must mention a variable");
    std::size_t width = detail::var_width(n);
    TritWord payload;
    // postfix emission keeps the decoder a plain stack machine
    std::vector<std::pair<int, bool>> stack{{0, false}};
    std::vector<int> order;
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        const Formula::Node& node = f.nodes[std::size_t(id)];
        if (expanded || node.op == Formula::Op::Var) {
            order.push_back(id);
            continue;
        }
        stack.push_back({id, true});
        if (node.op != Formula::Op::Not) stack.push_back({node.b, false});
        stack.push_back({node.a, false});
    }
    for (int id : order) {
        const Formula::Node& node = f.nodes[std::size_t(id)];
        switch (node.op) {
            case Formula::Op::Var:
                payload.push_back(Trit::zero);
                payload.push_back(Trit::zero);
                detail::append_bits(payload, std::uint64_t(node.var), width);
                break;
            case Formula::Op::And:
                payload.push_back(Trit::zero);
                payload.push_back(Trit::one);
                break;
            case Formula::Op::Or:
                payload.push_back(Trit::one);
                payload.push_back(Trit::zero);
                break;
            case Formula::Op::Not:
                payload.push_back(Trit::one);
                payload.push_back(Trit::one);
                break;
        }
    }
    TritWord out;
    detail::append_gamma(out, n);
    detail::append_gamma(out, payload.size());
    return out.concat(payload);
}

struct DecodedFormula {
    Formula formula;
    std::size_t consumed = 0;  // trits of the encoding prefix
};

inline std::optional<DecodedFormula> decode_formula(const TritWord& w) {
    detail::BitReader rd{w};
    auto n_vars = rd.read_gamma();
    if (!n_vars || *n_vars == 0 || *n_vars > default_u_capacity) return std::nullopt;
    auto payload_len = rd.read_gamma();
    if (!payload_len) return std::nullopt;
    std::size_t width = detail::var_width(*n_vars);
    std::size_t end = rd.pos + *payload_len;
    if (end > w.size()) return std::nullopt;

    Formula f;
    std::vector<int> stack;
    while (rd.pos < end) {
        auto tag = rd.read_bits(2);
        if (!tag || rd.pos > end) return std::nullopt;
        int id = int(f.nodes.size());
        if (*tag == 0b00) {
            auto var = rd.read_bits(width);
            if (!var || rd.pos > end || *var >= *n_vars) return std::nullopt;
            f.nodes.push_back({Formula::Op::Var, int(*var)});
        } else if (*tag == 0b11) {
            if (stack.empty()) return std::nullopt;
            int a = stack.back();
            stack.pop_back();
            f.nodes.push_back({Formula::Op::Not, -1, a});
        } else {
            if (stack.size() < 2) return std::nullopt;
            int b = stack.back();
            stack.pop_back();
            int a = stack.back();
            stack.pop_back();
            f.nodes.push_back({*tag == 0b01 ? Formula::Op::And : Formula::Op::Or, -1, a, b});
        }
        stack.push_back(id);
    }
    if (stack.size() != 1 || rd.pos != end) return std::nullopt;
    if (f.n_vars() != *n_vars) return std::nullopt;

    // the stack machine built nodes bottom-up; renumber into preorder so the
    // result is indistinguishable from a parsed formula
    Formula ordered;
    std::function<int(int)> renumber = [&](int src) -> int {
        const Formula::Node& n = f.nodes[std::size_t(src)];
        int id = int(ordered.nodes.size());
        ordered.nodes.push_back({n.op, n.var});
        if (n.a >= 0) ordered.nodes[std::size_t(id)].a = renumber(n.a);
        if (n.b >= 0) ordered.nodes[std::size_t(id)].b = renumber(n.b);
        return id;
    };
    renumber(stack[0]);
    return DecodedFormula{std::move(ordered), end};
}

// ---------------------------------------------------------------------------
// Bounded halting and the chain of reductions
// ---------------------------------------------------------------------------

inline bool decide_bhp(const MachineRef& m, const TritWord& x, std::uint64_t bound) {
    return simulate(m, x, bound).halted;
}

struct PExpBhpInstance {
    MachineRef machine;
    TritWord input;
    std::uint64_t bound = 0;
};

// bounds of the exponential-plus-one ladder: binary shape 1 0* 1
inline bool is_pexp_bound(std::uint64_t k) {
    if (k < 3) return false;
    std::uint64_t p = k - 1;
    return (p & (p - 1)) == 0;
}

inline std::uint64_t next_pexp_bound(std::uint64_t k) {
    for (std::uint64_t i = 1; i < 63; ++i) {
        std::uint64_t candidate = (std::uint64_t(1) << i) + 1;
        if (candidate >= k) return candidate;
    }
    throw error("no ladder bound of the form 2^i + 1 covers " + std::to_string(k));
}

namespace detail {

// Halts exactly when the inner run halts within the cut, inheriting its step
// count; otherwise degenerates into a sink loop that never halts.
class CutOrSinkStepper final : public Stepper {
public:
    CutOrSinkStepper(std::unique_ptr<Stepper> inner, std::uint64_t cut)
        : inner_(std::move(inner)), cut_(cut) {}

    bool halted() const override { return !sink_ && inner_->halted(); }
    void step() override {
        if (!sink_) {
            if (!inner_->halted() && inner_->steps() < cut_) {
                inner_->step();
                if (!inner_->halted() && inner_->steps() >= cut_) sink_ = true;
                return;
            }
            sink_ = true;
        }
        ++sink_steps_;
    }
    std::uint64_t steps() const override { return inner_->steps() + sink_steps_; }
    TritWord output() const override { return inner_->output(); }
    std::int64_t head() const override { return inner_->head(); }

private:
    std::unique_ptr<Stepper> inner_;
    std::uint64_t cut_;
    bool sink_ = false;
    std::uint64_t sink_steps_ = 0;
};

}  // namespace detail

inline PExpBhpInstance reduce_bhp_to_pexp(const MachineRef& m, const TritWord& x,
                                          std::uint64_t k) {
    PExpBhpInstance inst;
    inst.machine = MachineRef::virtual_machine(
        "cut-or-sink(" + m.name() + "," + std::to_string(k) + ")",
        [m, k](const TritWord& input) -> std::unique_ptr<Stepper> {
            return std::make_unique<detail::CutOrSinkStepper>(m.start(input), k);
        });
    inst.input = x;
    inst.bound = next_pexp_bound(k);
    return inst;
}

inline bool decide_pexp_bhp(const PExpBhpInstance& inst) {
    if (!is_pexp_bound(inst.bound))
        throw instance_malformed("bound " + std::to_string(inst.bound) +
                                 " is not of the form 2^i + 1");
    return decide_bhp(inst.machine, inst.input, inst.bound);
}

// ---------------------------------------------------------------------------
// One-metastable-bit detection
// ---------------------------------------------------------------------------

struct Detect1Instance {
    MachineRef machine;
    TritWord input;  // exactly one u position
    std::uint64_t bound = 0;
};

inline TritWord binary_word(std::uint64_t v) {
    std::size_t bits = 0;
    for (std::uint64_t t = v; t; t >>= 1) ++bits;
    if (bits == 0) bits = 1;
    TritWord w;
    detail::append_bits(w, v, bits);
    return w;
}

inline bool matches_zero_star_one(const TritWord& y) {
    if (y.empty() || y[y.size() - 1] != Trit::one) return false;
    for (std::size_t i = 0; i + 1 < y.size(); ++i)
        if (y[i] != Trit::zero) return false;
    return true;
}

namespace detail {

// Runs the captured machine on the captured input for bound-1 steps (charged
// one for one), then spends one terminal step branching on its own input.
class BudgetedProbeStepper final : public Stepper {
public:
    BudgetedProbeStepper(std::unique_ptr<Stepper> inner, std::uint64_t inner_budget,
                         TritWord own_input)
        : inner_(std::move(inner)), inner_budget_(inner_budget), y_(std::move(own_input)) {}

    bool halted() const override { return done_; }
    void step() override {
        if (!inner_->halted() && inner_->steps() < inner_budget_) {
            inner_->step();
            ++own_;
            return;
        }
        ++own_;
        done_ = true;
    }
    std::uint64_t steps() const override { return own_; }
    TritWord output() const override {
        bool halted_in_time = inner_->halted();
        return TritWord{halted_in_time && matches_zero_star_one(y_) ? Trit::one : Trit::zero};
    }
    std::int64_t head() const override { return inner_->head(); }

private:
    std::unique_ptr<Stepper> inner_;
    std::uint64_t inner_budget_;
    TritWord y_;
    std::uint64_t own_ = 0;
    bool done_ = false;
};

}  // namespace detail

inline Detect1Instance reduce_pexp_to_detect1(const MachineRef& m, const TritWord& s,
                                              std::uint64_t k) {
    if (!is_pexp_bound(k))
        throw instance_malformed("bound " + std::to_string(k) + " is not of the form 2^i + 1");
    std::uint64_t bound = k + 1;
    TritWord k_bits = binary_word(k);
    TritWord probe_input;
    probe_input.push_back(Trit::u);
    for (std::size_t i = 1; i < k_bits.size(); ++i) probe_input.push_back(k_bits[i]);

    Detect1Instance inst;
    inst.machine = MachineRef::virtual_machine(
        "budgeted-probe(" + m.name() + "," + std::to_string(k) + ")",
        [m, s, bound](const TritWord& y) -> std::unique_ptr<Stepper> {
            return std::make_unique<detail::BudgetedProbeStepper>(m.start(s), bound - 1, y);
        });
    inst.input = probe_input;
    inst.bound = bound;
    return inst;
}

inline bool decide_detect1(const Detect1Instance& inst) {
    if (inst.input.u_count() != 1)
        throw instance_malformed("detect1 inputs carry exactly one u, got " +
                                 std::to_string(inst.input.u_count()));
    Resolution res(inst.input);
    SimOutcome a = utm_bounded(inst.machine, res[0], inst.bound);
    SimOutcome b = utm_bounded(inst.machine, res[1], inst.bound);
    return !(a == b);
}

// ---------------------------------------------------------------------------
// Polynomially-bounded detection and the tautology reduction
// ---------------------------------------------------------------------------

struct DetectPolyInstance {
    MachineRef machine;
    TritWord input;
    std::uint64_t exponent = 1;
};

namespace detail {

// Deterministic behaviour with a declared cost: decoding charges the consumed
// prefix, each formula evaluation charges its node count, the contradiction
// guard charges the comparison scan, and the final answer charges one step.
class FormulaProbeStepper final : public Stepper {
public:
    FormulaProbeStepper(const TritWord& w) {
        auto decoded = decode_formula(w);
        total_ = 1;
        Trit out = Trit::zero;
        if (decoded && w.size() >= decoded->consumed) {
            const Formula& f = decoded->formula;
            std::size_t n = f.n_vars();
            TritWord y;
            for (std::size_t i = decoded->consumed; i < w.size(); ++i) y.push_back(w[i]);
            total_ += decoded->consumed;
            if (y.size() == n && y.stable()) {
                TritWord zeros = uniform_word(n, Trit::zero);
                total_ += f.node_count();
                if (f.eval(zeros) == Trit::zero) {
                    total_ += n;  // compare y against the all-zeros word
                    out = (y == zeros) ? Trit::zero : Trit::one;
                } else {
                    total_ += f.node_count();
                    out = f.eval(y);
                }
            }
        }
        output_ = TritWord{out};
    }

    bool halted() const override { return own_ >= total_; }
    void step() override { ++own_; }
    std::uint64_t steps() const override { return own_; }
    TritWord output() const override { return output_; }

private:
    std::uint64_t total_ = 1;
    std::uint64_t own_ = 0;
    TritWord output_;
};

}  // namespace detail

inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    while (exp--) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        r *= base;
    }
    return r;
}

inline DetectPolyInstance reduce_tautology_to_detect_poly(const Formula& f) {
    std::size_t n = f.n_vars();
    if (n == 0) throw instance_malformed("tautology instances must mention a variable");
    TritWord prefix = encode_formula(f);
    TritWord x = prefix.concat(uniform_word(n, Trit::u));

    std::uint64_t worst = prefix.size() + 2 * f.node_count() + x.size() + 2;
    std::uint64_t exponent = 1;
    while (saturating_pow(x.size(), exponent) < worst) {
        if (++exponent > 8)
            throw error("tautology reduction: no sane exponent bounds the run");
    }

    DetectPolyInstance inst;
    inst.machine = MachineRef::virtual_machine(
        "formula-probe(" + std::to_string(f.node_count()) + " nodes)",
        [](const TritWord& w) -> std::unique_ptr<Stepper> {
            return std::make_unique<detail::FormulaProbeStepper>(w);
        });
    inst.input = x;
    inst.exponent = exponent;
    return inst;
}

// True iff every resolution produces the same stable single-bit output within
// length(x)^exponent steps.
inline bool decide_detect_poly(const DetectPolyInstance& inst,
                               std::size_t capacity = default_u_capacity) {
    std::uint64_t budget = saturating_pow(inst.input.size(), inst.exponent);
    if (budget == 0) throw instance_malformed("detect-poly: empty input");
    std::optional<TritWord> ref;
    for (const TritWord& w : Resolution(inst.input, capacity)) {
        SimOutcome out = utm_bounded(inst.machine, w, budget);
        if (!out.halted) return false;
        if (out.output.size() != 1 || !is_stable(out.output[0])) return false;
        if (!ref)
            ref = out.output;
        else if (!(*ref == out.output))
            return false;
    }
    return ref.has_value();
}

// ---------------------------------------------------------------------------
// The bounded acceptance demo
// ---------------------------------------------------------------------------

enum class DemoVerdict { Accept, Reject, Unknown };

inline DemoVerdict demo_accepts_all(const MachineRef& m, std::size_t k,
                                    std::uint64_t per_run_budget,
                                    std::size_t capacity = default_u_capacity) {
    BoundedResult r = mc_universal_bounded(m, uniform_word(k, Trit::u), per_run_budget, capacity);
    switch (r.outcome.kind) {
        case ExtendedOutcome::Kind::Value:
            return r.outcome.value == Trit::one ? DemoVerdict::Accept : DemoVerdict::Reject;
        case ExtendedOutcome::Kind::USym: return DemoVerdict::Reject;
        default: return DemoVerdict::Unknown;
    }
}

}  // namespace mcturing
