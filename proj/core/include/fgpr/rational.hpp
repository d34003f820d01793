#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "fgpr/errors.hpp"

namespace fgpr {

// Exact rational arithmetic for thresholds and expectations. Values stay tiny
// (parameters like 9/10, expectations with denominator (N!)^k for small N), so
// int64 components with 128-bit intermediates are plenty.
class rational {
public:
    constexpr rational() : num_(0), den_(1) {}
    rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }
    // NOLINTNEXTLINE(google-explicit-constructor): integers embed naturally
    constexpr rational(std::int64_t n) : num_(n), den_(1) {}

    static rational parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    rational operator-() const { return rational(-num_, den_, already_normal{}); }

    friend rational operator+(const rational& a, const rational& b) {
        return rational(checked(i128(a.num_) * b.den_ + i128(b.num_) * a.den_),
                        checked(i128(a.den_) * b.den_));
    }
    friend rational operator-(const rational& a, const rational& b) { return a + (-b); }
    friend rational operator*(const rational& a, const rational& b) {
        return rational(checked(i128(a.num_) * b.num_), checked(i128(a.den_) * b.den_));
    }
    friend rational operator/(const rational& a, const rational& b) {
        if (b.num_ == 0) throw input_error("rational division by zero");
        return rational(checked(i128(a.num_) * b.den_), checked(i128(a.den_) * b.num_));
    }

    friend bool operator==(const rational& a, const rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const rational& a, const rational& b) { return !(a == b); }
    friend bool operator<(const rational& a, const rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const rational& a, const rational& b) { return !(b < a); }
    friend bool operator>(const rational& a, const rational& b) { return b < a; }
    friend bool operator>=(const rational& a, const rational& b) { return !(a < b); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // floor(*this * n), exact.
    std::int64_t floor_scaled(std::int64_t n) const {
        i128 p = i128(num_) * n;
        i128 q = den_;
        i128 f = p / q;
        if (p % q != 0 && (p < 0)) f -= 1;
        return static_cast<std::int64_t>(f);
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    using i128 = __int128;
    struct already_normal {};
    constexpr rational(std::int64_t n, std::int64_t d, already_normal) : num_(n), den_(d) {}

    static std::int64_t checked(i128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw input_error("rational overflow");
        return static_cast<std::int64_t>(v);
    }

    void normalize() {
        if (den_ == 0) throw input_error("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline rational rational::parse(std::string_view text) {
    auto slash = text.find('/');
    auto to_int = [&](std::string_view s) -> std::int64_t {
        if (s.empty()) throw input_error("bad rational: '" + std::string(text) + "'");
        std::int64_t v = 0;
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '-') { neg = true; i = 1; }
        if (i == s.size()) throw input_error("bad rational: '" + std::string(text) + "'");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw input_error("bad rational: '" + std::string(text) + "'");
            v = v * 10 + (s[i] - '0');
            if (v < 0) throw input_error("rational overflow: '" + std::string(text) + "'");
        }
        return neg ? -v : v;
    };
    if (slash == std::string_view::npos) return rational(to_int(text), 1);
    return rational(to_int(text.substr(0, slash)), to_int(text.substr(slash + 1)));
}

} // namespace fgpr
