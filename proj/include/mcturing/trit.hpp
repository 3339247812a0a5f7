#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcturing {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : error {
    using error::error;
};

struct length_mismatch : error {
    using error::error;
};

struct capacity_error : error {
    using error::error;
};

// ---------------------------------------------------------------------------
// Trits and Kleene gates
// ---------------------------------------------------------------------------

enum class Trit : std::uint8_t { zero = 0, one = 1, u = 2 };

constexpr bool is_stable(Trit t) { return t != Trit::u; }

constexpr char to_char(Trit t) {
    switch (t) {
        case Trit::zero: return '0';
        case Trit::one: return '1';
        default: return 'u';
    }
}

constexpr Trit trit_from_char(char c) {
    switch (c) {
        case '0': return Trit::zero;
        case '1': return Trit::one;
        case 'u':
        case 'U': return Trit::u;
        default: throw parse_error(std::string("invalid trit character '") + c + "'");
    }
}

// 0 dominates conjunction regardless of the other operand.
constexpr Trit and_u(Trit a, Trit b) {
    if (a == Trit::zero || b == Trit::zero) return Trit::zero;
    if (a == Trit::one && b == Trit::one) return Trit::one;
    return Trit::u;
}

// 1 dominates disjunction regardless of the other operand.
constexpr Trit or_u(Trit a, Trit b) {
    if (a == Trit::one || b == Trit::one) return Trit::one;
    if (a == Trit::zero && b == Trit::zero) return Trit::zero;
    return Trit::u;
}

constexpr Trit not_u(Trit a) {
    switch (a) {
        case Trit::zero: return Trit::one;
        case Trit::one: return Trit::zero;
        default: return Trit::u;
    }
}

// Stability order: u below both stable values, 0 and 1 incomparable.
constexpr bool leq_stab(Trit a, Trit b) { return a == Trit::u || a == b; }

// ---------------------------------------------------------------------------
// Words over {0, 1, u}
// ---------------------------------------------------------------------------

class TritWord {
public:
    TritWord() = default;
    explicit TritWord(std::vector<Trit> trits) : trits_(std::move(trits)) {}
    TritWord(std::initializer_list<Trit> trits) : trits_(trits) {}

    static TritWord parse(std::string_view text) {
        std::vector<Trit> v;
        v.reserve(text.size());
        for (char c : text) v.push_back(trit_from_char(c));
        return TritWord(std::move(v));
    }

    std::size_t size() const { return trits_.size(); }
    bool empty() const { return trits_.empty(); }
    Trit operator[](std::size_t i) const { return trits_[i]; }
    void set(std::size_t i, Trit t) { trits_[i] = t; }
    void push_back(Trit t) { trits_.push_back(t); }

    bool stable() const {
        for (Trit t : trits_)
            if (!is_stable(t)) return false;
        return true;
    }

    std::size_t u_count() const {
        std::size_t n = 0;
        for (Trit t : trits_)
            if (!is_stable(t)) ++n;
        return n;
    }

    std::string str() const {
        std::string s;
        s.reserve(trits_.size());
        for (Trit t : trits_) s.push_back(to_char(t));
        return s;
    }

    TritWord concat(const TritWord& other) const {
        std::vector<Trit> v = trits_;
        v.insert(v.end(), other.trits_.begin(), other.trits_.end());
        return TritWord(std::move(v));
    }

    friend bool operator==(const TritWord&, const TritWord&) = default;

    auto begin() const { return trits_.begin(); }
    auto end() const { return trits_.end(); }

private:
    std::vector<Trit> trits_;
};

inline TritWord uniform_word(std::size_t n, Trit t) {
    return TritWord(std::vector<Trit>(n, t));
}

// Pointwise stability order on equal-length words.
inline bool leq_word(const TritWord& a, const TritWord& b) {
    if (a.size() != b.size()) throw length_mismatch("leq_word: length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!leq_stab(a[i], b[i])) return false;
    return true;
}

// Positionwise superposition: agreeing positions kept, disagreements become u.
inline TritWord superpose(const TritWord& a, const TritWord& b) {
    if (a.size() != b.size()) throw length_mismatch("superpose: length mismatch");
    std::vector<Trit> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v[i] = (a[i] == b[i]) ? a[i] : Trit::u;
    return TritWord(std::move(v));
}

inline TritWord superpose_all(const std::vector<TritWord>& words) {
    if (words.empty()) throw length_mismatch("superpose_all: empty set");
    TritWord acc = words.front();
    for (std::size_t i = 1; i < words.size(); ++i) acc = superpose(acc, words[i]);
    return acc;
}

inline constexpr std::size_t default_u_capacity = 24;

// ---------------------------------------------------------------------------
// Resolutions: the stable words agreeing with x on its stable positions
// ---------------------------------------------------------------------------

class Resolution {
public:
    explicit Resolution(TritWord base, std::size_t capacity = default_u_capacity)
        : base_(std::move(base)) {
        for (std::size_t i = 0; i < base_.size(); ++i)
            if (!is_stable(base_[i])) u_positions_.push_back(i);
        if (u_positions_.size() > capacity)
            throw capacity_error("resolution set of 2^" + std::to_string(u_positions_.size()) +
                                 " exceeds capacity 2^" + std::to_string(capacity));
    }

    std::uint64_t count() const { return std::uint64_t(1) << u_positions_.size(); }

    // u positions take the cursor's bits, low bit first in left-to-right order.
    TritWord operator[](std::uint64_t cursor) const {
        TritWord w = base_;
        for (std::size_t k = 0; k < u_positions_.size(); ++k)
            w.set(u_positions_[k], (cursor >> k) & 1 ? Trit::one : Trit::zero);
        return w;
    }

    class iterator {
    public:
        iterator(const Resolution* r, std::uint64_t cursor) : r_(r), cursor_(cursor) {}
        TritWord operator*() const { return (*r_)[cursor_]; }
        iterator& operator++() { ++cursor_; return *this; }
        friend bool operator==(const iterator&, const iterator&) = default;

    private:
        const Resolution* r_;
        std::uint64_t cursor_;
    };

    iterator begin() const { return iterator(this, 0); }
    iterator end() const { return iterator(this, count()); }

private:
    TritWord base_;
    std::vector<std::size_t> u_positions_;
};

// ---------------------------------------------------------------------------
// Metastable closure, by brute force over resolutions
// ---------------------------------------------------------------------------

inline TritWord closure_oracle(const std::function<TritWord(const TritWord&)>& f,
                               const TritWord& x,
                               std::size_t capacity = default_u_capacity) {
    Resolution res(x, capacity);
    bool first = true;
    TritWord acc;
    for (const TritWord& r : res) {
        TritWord y = f(r);
        if (first) {
            acc = y;
            first = false;
        } else {
            if (y.size() != acc.size())
                throw length_mismatch("closure_oracle: inconsistent output lengths");
            acc = superpose(acc, y);
        }
    }
    return acc;
}

// Stable word of length n spelling value in binary, most significant bit first.
inline TritWord index_to_word(std::uint64_t value, std::size_t n) {
    TritWord w = uniform_word(n, Trit::zero);
    for (std::size_t i = 0; i < n; ++i)
        if ((value >> (n - 1 - i)) & 1) w.set(i, Trit::one);
    return w;
}

inline std::uint64_t word_to_index(const TritWord& w) {
    if (!w.stable()) throw error("word_to_index: word is not stable");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        v = (v << 1) | (w[i] == Trit::one ? 1u : 0u);
    return v;
}

}  // namespace mcturing
