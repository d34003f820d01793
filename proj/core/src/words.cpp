#include "fgpr/words.hpp"

#include <algorithm>

namespace fgpr {

namespace {

void check_rank(int rank) {
    if (rank < 2 || rank > max_rank)
        throw input_error("rank must be between 2 and 26, got " + std::to_string(rank));
}

// Appends l to a reduced prefix, cancelling if it inverts the last letter.
void push_reduced(std::vector<letter>& out, letter l) {
    if (!out.empty() && out.back() == l.inverse())
        out.pop_back();
    else
        out.push_back(l);
}

} // namespace

letter::letter(int generator, bool positive) {
    if (generator < 1 || generator > max_rank)
        throw input_error("letter generator out of range: " + std::to_string(generator));
    v_ = static_cast<std::int8_t>(positive ? generator : -generator);
}

letter letter::from_index(int index) {
    if (index < 0 || index >= 2 * max_rank)
        throw input_error("letter index out of range: " + std::to_string(index));
    return letter(index / 2 + 1, (index & 1) == 0);
}

letter letter::parse_char(char c, int rank) {
    check_rank(rank);
    if (c >= 'a' && c < 'a' + rank) return letter(c - 'a' + 1, true);
    if (c >= 'A' && c < 'A' + rank) return letter(c - 'A' + 1, false);
    throw input_error(std::string("invalid letter '") + c + "' for rank " + std::to_string(rank));
}

char letter::to_char() const {
    if (v_ == 0) return '?';
    return static_cast<char>((positive() ? 'a' : 'A') + generator() - 1);
}

word word::reduce(std::span<const letter> letters, int rank) {
    check_rank(rank);
    std::vector<letter> out;
    out.reserve(letters.size());
    for (letter l : letters) {
        if (l.generator() < 1 || l.generator() > rank)
            throw input_error("letter outside alphabet of rank " + std::to_string(rank));
        push_reduced(out, l);
    }
    return from_reduced(std::move(out));
}

word word::parse(std::string_view text, int rank) {
    check_rank(rank);
    if (text == "1") return word();
    if (text.empty()) throw input_error("empty word text (use \"1\" for the identity)");
    std::vector<letter> raw;
    raw.reserve(text.size());
    for (char c : text) raw.push_back(letter::parse_char(c, rank));
    std::vector<letter> out;
    out.reserve(raw.size());
    for (letter l : raw) push_reduced(out, l);
    return from_reduced(std::move(out));
}

word word::from_reduced(std::vector<letter> letters) {
    word w;
    w.letters_ = std::move(letters);
    return w;
}

word word::inverse() const {
    std::vector<letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
    return from_reduced(std::move(out));
}

word word::pow(int k) const {
    if (k == 0) return word();
    const word base = k > 0 ? *this : inverse();
    int reps = k > 0 ? k : -k;
    // Powers of a reduced word only cancel across the seam, so reduce as we go.
    std::vector<letter> out;
    out.reserve(letters_.size() * static_cast<std::size_t>(reps));
    for (int i = 0; i < reps; ++i)
        for (letter l : base.letters_) push_reduced(out, l);
    return from_reduced(std::move(out));
}

word operator*(const word& a, const word& b) {
    std::vector<letter> out(a.letters_);
    out.reserve(a.letters_.size() + b.letters_.size());
    for (letter l : b.letters_) push_reduced(out, l);
    return word::from_reduced(std::move(out));
}

std::string word::str() const {
    if (letters_.empty()) return "1";
    std::string s;
    s.reserve(letters_.size());
    for (letter l : letters_) s.push_back(l.to_char());
    return s;
}

bool operator<(const word& a, const word& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    for (std::size_t i = 0; i < a.length(); ++i) {
        if (a.at(i) != b.at(i)) return a.at(i) < b.at(i);
    }
    return false;
}

std::pair<word, word> strip_cyclic(const word& w) {
    std::size_t lo = 0, hi = w.length();
    while (hi - lo >= 2 && w.at(lo) == w.at(hi - 1).inverse()) { ++lo; --hi; }
    std::vector<letter> core(w.letters().begin() + static_cast<std::ptrdiff_t>(lo),
                             w.letters().begin() + static_cast<std::ptrdiff_t>(hi));
    std::vector<letter> conj(w.letters().begin(), w.letters().begin() + static_cast<std::ptrdiff_t>(lo));
    return {word::from_reduced(std::move(core)), word::from_reduced(std::move(conj))};
}

namespace {

// Index of the lexicographically least rotation (Booth's algorithm).
std::size_t least_rotation(std::span<const letter> s) {
    std::size_t n = s.size();
    if (n <= 1) return 0;
    auto idx = [&](std::size_t i) { return s[i % n].index(); };
    std::vector<std::ptrdiff_t> f(2 * n, -1);
    std::size_t k = 0;
    for (std::size_t j = 1; j < 2 * n; ++j) {
        std::ptrdiff_t i = f[j - k - 1];
        while (i != -1 && idx(j) != idx(k + static_cast<std::size_t>(i) + 1)) {
            if (idx(j) < idx(k + static_cast<std::size_t>(i) + 1)) k = j - static_cast<std::size_t>(i) - 1;
            i = f[static_cast<std::size_t>(i)];
        }
        if (i == -1 && idx(j) != idx(k)) {
            if (idx(j) < idx(k)) k = j;
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
        if (k + n <= j) break;
    }
    return k;
}

word rotate(const word& w, std::size_t k) {
    std::size_t n = w.length();
    if (n == 0 || k % n == 0) return w;
    k %= n;
    std::vector<letter> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(w.at((i + k) % n));
    return word::from_reduced(std::move(out));
}

} // namespace

cyclic_word cyclic_word::of(const word& w) {
    auto [core, conj] = strip_cyclic(w);
    (void)conj;
    cyclic_word c;
    c.rep_ = rotate(core, least_rotation(core.letters()));
    return c;
}

cyclic_decomposition cyclic_reduce(const word& w) {
    auto [core, conj] = strip_cyclic(w);
    std::size_t k = least_rotation(core.letters());
    cyclic_word c = cyclic_word::of(w);
    // core = u * rep * u^-1 where u is the prefix rotated past the seam.
    std::vector<letter> u(core.letters().begin(), core.letters().begin() + static_cast<std::ptrdiff_t>(k));
    word conjugator = conj * word::from_reduced(std::move(u));
    return {c, conjugator};
}

power_decomposition power_root(const word& w) {
    if (w.empty()) throw input_error("power_root of the trivial word");
    auto [core, conj] = strip_cyclic(w);
    std::size_t n = core.length();
    for (std::size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i)
            periodic = core.at(i) == core.at(i - p);
        if (periodic) {
            std::vector<letter> root(core.letters().begin(),
                                     core.letters().begin() + static_cast<std::ptrdiff_t>(p));
            word r = conj * word::from_reduced(std::move(root)) * conj.inverse();
            return {r, static_cast<int>(n / p)};
        }
    }
    return {w, 1}; // unreachable: p == n always matches
}

bool is_proper_power(const word& w) { return power_root(w).exponent >= 2; }

bool contains_all_two_letter_subwords(const word& w, int rank, bool cyclic) {
    check_rank(rank);
    const int m = 2 * rank;
    const std::size_t needed = static_cast<std::size_t>(m) * (m - 1);
    std::vector<char> seen(static_cast<std::size_t>(m) * m, 0);
    std::size_t found = 0;
    auto mark = [&](letter x, letter y) {
        auto& cell = seen[static_cast<std::size_t>(x.index()) * m + y.index()];
        if (!cell) { cell = 1; ++found; }
    };
    std::size_t n = w.length();
    for (std::size_t i = 0; i + 1 < n; ++i) mark(w.at(i), w.at(i + 1));
    if (cyclic && n >= 2 && w.at(n - 1) != w.at(0).inverse()) mark(w.at(n - 1), w.at(0));
    return found == needed;
}

word sample_word(int rank, int n, bool cyclic, rng& gen) {
    check_rank(rank);
    if (n < 1) throw input_error("sample_word requires n >= 1");
    const int m = 2 * rank;
    for (;;) {
        std::vector<letter> out;
        out.reserve(static_cast<std::size_t>(n));
        out.push_back(letter::from_index(static_cast<int>(gen.below(static_cast<std::uint64_t>(m)))));
        for (int i = 1; i < n; ++i) {
            int banned = out.back().inverse().index();
            int pick = static_cast<int>(gen.below(static_cast<std::uint64_t>(m - 1)));
            if (pick >= banned) ++pick;
            out.push_back(letter::from_index(pick));
        }
        if (cyclic && n >= 2 && out.back() == out.front().inverse()) continue;
        return word::from_reduced(std::move(out));
    }
}

word sample_word(int rank, int n, bool cyclic, std::uint64_t seed) {
    rng gen(seed);
    return sample_word(rank, n, cyclic, gen);
}

void enumerate_words(int rank, int n, bool cyclic, const std::function<void(const word&)>& fn) {
    check_rank(rank);
    if (n < 0) throw input_error("enumerate_words requires n >= 0");
    if (n == 0) { fn(word()); return; }
    const int m = 2 * rank;
    std::vector<letter> cur;
    cur.reserve(static_cast<std::size_t>(n));
    // Depth-first over letter indices in increasing order visits words
    // lexicographically.
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            if (!cyclic || n < 2 || cur.back() != cur.front().inverse())
                fn(word::from_reduced(cur));
            return;
        }
        for (int idx = 0; idx < m; ++idx) {
            letter l = letter::from_index(idx);
            if (depth > 0 && l == cur.back().inverse()) continue;
            cur.push_back(l);
            self(self, depth + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
}

std::vector<word> enumerate_words_vec(int rank, int n, bool cyclic) {
    std::vector<word> out;
    enumerate_words(rank, n, cyclic, [&](const word& w) { out.push_back(w); });
    return out;
}

} // namespace fgpr
