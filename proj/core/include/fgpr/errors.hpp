#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fgpr {

// Malformed input: unparsable words, letters outside the alphabet, invalid
// partitions, out-of-domain parameters, graphs that violate a precondition.
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A word was asked to be rewritten over a subgroup that does not contain it.
class membership_error : public std::domain_error {
public:
    explicit membership_error(const std::string& what) : std::domain_error(what) {}
};

// A bounded search exceeded its state budget before reaching an answer.
// Carries the budget and how much of it was consumed so callers can report
// partial progress instead of silently coercing "don't know" into "no".
class resource_limit_error : public std::runtime_error {
public:
    resource_limit_error(const std::string& what, std::uint64_t bound, std::uint64_t explored)
        : std::runtime_error(what), bound_(bound), explored_(explored) {}

    std::uint64_t bound() const { return bound_; }
    std::uint64_t explored() const { return explored_; }

private:
    std::uint64_t bound_;
    std::uint64_t explored_;
};

} // namespace fgpr
