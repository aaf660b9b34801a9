#include "ecf/combinatorics.hpp"

#include <stdexcept>

namespace ecf {

namespace {

void validate(const WordFamily& family)
{
    if (family.n < 1 || family.m < 1) throw std::invalid_argument("word family needs n >= 1 and m >= 1");
}

} // namespace

BigInt count_words(const WordFamily& family)
{
    validate(family);
    if (family.mode == LastDigitMode::Exact) return binomial(family.n + family.m - 2, family.m - 1);
    return binomial(family.n + family.m - 1, family.m - 1);
}

WordStream::WordStream(const WordFamily& family, std::uint64_t budget)
    : family_(family), count_(count_words(family))
{
    if (count_ > BigInt(static_cast<unsigned long>(budget))) throw BudgetExceeded(count_, budget);
}

// Lexicographic successor among non-decreasing words with entries in [1, m]
// (the last entry pinned to m in Exact mode).
bool WordStream::advance()
{
    const std::size_t n = family_.n;
    const std::uint64_t m = family_.m;
    if (!started_) {
        started_ = true;
        current_.assign(n, 1);
        if (family_.mode == LastDigitMode::Exact) current_.back() = m;
        return true;
    }
    const std::size_t free_len = family_.mode == LastDigitMode::Exact ? n - 1 : n;
    // Rightmost free position that can still grow.
    for (std::size_t i = free_len; i-- > 0;) {
        if (current_[i] < m) {
            const std::uint64_t v = current_[i] + 1;
            for (std::size_t k = i; k < free_len; ++k) current_[k] = v;
            return true;
        }
    }
    return false;
}

const std::vector<std::uint64_t>* WordStream::next_raw()
{
    if (finished_) return nullptr;
    if (!advance()) {
        finished_ = true;
        return nullptr;
    }
    return &current_;
}

std::optional<DigitWord> WordStream::next()
{
    const auto* raw = next_raw();
    if (!raw) return std::nullopt;
    std::vector<BigInt> digits;
    digits.reserve(raw->size());
    for (auto d : *raw) digits.emplace_back(static_cast<unsigned long>(d));
    return DigitWord(std::move(digits));
}

std::vector<DigitWord> enumerate_words(const WordFamily& family, std::uint64_t budget)
{
    WordStream stream(family, budget);
    std::vector<DigitWord> out;
    while (auto w = stream.next()) out.push_back(std::move(*w));
    return out;
}

} // namespace ecf
