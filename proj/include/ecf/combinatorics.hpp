#pragma once

#include "ecf/expansion.hpp"
#include "ecf/numerics.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ecf {

enum class LastDigitMode { Exact, AtMost };

/// Admissible words of length n whose last digit is m (Exact) or at most m (AtMost).
struct WordFamily {
    std::uint64_t n;
    std::uint64_t m;
    LastDigitMode mode;
};

inline constexpr std::uint64_t kDefaultWordBudget = 10'000'000;

/// C(n+m-2, m-1) for Exact, C(n+m-1, m-1) for AtMost.
BigInt count_words(const WordFamily& family);

/// Lexicographic single-pass stream over a WordFamily. Construction throws
/// BudgetExceeded when the family is larger than the budget.
class WordStream {
public:
    WordStream(const WordFamily& family, std::uint64_t budget = kDefaultWordBudget);

    /// Next word, or nullopt when exhausted.
    std::optional<DigitWord> next();
    /// Same as next() but exposes the raw small digits without allocation.
    const std::vector<std::uint64_t>* next_raw();

    const BigInt& count() const noexcept { return count_; }

private:
    bool advance();

    WordFamily family_;
    BigInt count_;
    std::vector<std::uint64_t> current_;
    bool started_ = false;
    bool finished_ = false;
};

std::vector<DigitWord> enumerate_words(const WordFamily& family,
                                       std::uint64_t budget = kDefaultWordBudget);

} // namespace ecf
