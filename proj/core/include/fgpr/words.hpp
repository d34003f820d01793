#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fgpr/errors.hpp"
#include "fgpr/rng.hpp"

namespace fgpr {

inline constexpr int max_rank = 26;

// A signed generator of a free group of rank <= 26. Generator g in 1..26,
// positive letters render as 'a'..'z', inverses as 'A'..'Z'. The total order
// used everywhere (canonical rotations, move enumeration, lexicographic word
// order) is a < A < b < B < ... , i.e. by generator first, positive before
// inverse; index() realizes it as 0..2r-1.
class letter {
public:
    constexpr letter() : v_(0) {}
    letter(int generator, bool positive);

    static letter from_index(int index);
    static letter parse_char(char c, int rank);

    int generator() const { return v_ < 0 ? -v_ : v_; }
    bool positive() const { return v_ > 0; }
    letter inverse() const { letter l; l.v_ = static_cast<std::int8_t>(-v_); return l; }
    int index() const { return (generator() - 1) * 2 + (positive() ? 0 : 1); }
    char to_char() const;

    friend bool operator==(letter a, letter b) { return a.v_ == b.v_; }
    friend bool operator!=(letter a, letter b) { return a.v_ != b.v_; }
    friend bool operator<(letter a, letter b) { return a.index() < b.index(); }

private:
    std::int8_t v_; // +g / -g, 0 only for default-constructed
};

// A freely reduced word; the class invariant is that no letter is adjacent to
// its inverse. All factory paths reduce, so holding a word means holding a
// normal form. The empty word is the identity and renders as "1".
class word {
public:
    word() = default;

    // Reduces an arbitrary letter sequence. Validates generators against rank.
    static word reduce(std::span<const letter> letters, int rank);
    // Parses "abA" syntax; "1" denotes the empty word.
    static word parse(std::string_view text, int rank);
    // Adopts a sequence the caller promises is already reduced.
    static word from_reduced(std::vector<letter> letters);

    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    letter at(std::size_t i) const { return letters_[i]; }
    std::span<const letter> letters() const { return letters_; }

    word inverse() const;
    word pow(int k) const;
    friend word operator*(const word& a, const word& b);

    std::string str() const;

    friend bool operator==(const word& a, const word& b) { return a.letters_ == b.letters_; }
    friend bool operator!=(const word& a, const word& b) { return !(a == b); }
    // Length-lexicographic, letters compared by index().
    friend bool operator<(const word& a, const word& b);

private:
    std::vector<letter> letters_;
};

// A cyclically reduced word up to rotation, stored as its lexicographically
// least rotation. Two words are conjugate with cyclically reduced cores iff
// their cyclic_word representatives compare equal.
class cyclic_word {
public:
    cyclic_word() = default;

    // Cyclically reduces w, then rotates to the canonical representative.
    static cyclic_word of(const word& w);

    const word& rep() const { return rep_; }
    std::size_t length() const { return rep_.length(); }
    bool empty() const { return rep_.empty(); }

    friend bool operator==(const cyclic_word& a, const cyclic_word& b) { return a.rep_ == b.rep_; }
    friend bool operator!=(const cyclic_word& a, const cyclic_word& b) { return !(a == b); }
    friend bool operator<(const cyclic_word& a, const cyclic_word& b) { return a.rep_ < b.rep_; }

private:
    word rep_;
};

struct cyclic_decomposition {
    cyclic_word core;
    word conjugator; // w = conjugator * core.rep() * conjugator^-1 as group elements
};

// Strips matching first/last letters without rotating: returns (stripped,
// conjugator) with w = conjugator * stripped * conjugator^-1.
std::pair<word, word> strip_cyclic(const word& w);

cyclic_decomposition cyclic_reduce(const word& w);

// Maximal root decomposition of a nontrivial word: w = root^k with k maximal.
// k == 1 means w is not a proper power.
struct power_decomposition {
    word root;
    int exponent;
};
power_decomposition power_root(const word& w);
bool is_proper_power(const word& w);

// True iff every freely reduced two-letter word over rank generators occurs as
// a subword; with cyclic set, the wrap-around pair counts too.
bool contains_all_two_letter_subwords(const word& w, int rank, bool cyclic = false);

// Uniform sample from the sphere of freely reduced words of length n (by a
// non-backtracking walk: uniform first letter, then uniform among the 2r-1
// non-cancelling continuations). With cyclic set, rejection-samples until the
// result is cyclically reduced, which is uniform on that subset.
word sample_word(int rank, int n, bool cyclic, rng& gen);
word sample_word(int rank, int n, bool cyclic, std::uint64_t seed);

// Calls fn for every freely reduced (and, with cyclic set, cyclically
// reduced) word of length n, in lexicographic order. n == 0 yields the empty
// word.
void enumerate_words(int rank, int n, bool cyclic, const std::function<void(const word&)>& fn);
std::vector<word> enumerate_words_vec(int rank, int n, bool cyclic);

} // namespace fgpr
