#pragma once

// Hand-rolled generators and brute-force oracles shared by the unit tests.

#include "ecf/expansion.hpp"
#include "ecf/numerics.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace ecf::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi)
    {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
    }

    /// Admissible word with length in [1, max_len] and digits in [1, max_digit].
    DigitWord word(std::size_t max_len, std::uint64_t max_digit)
    {
        std::size_t len = uniform(1, max_len);
        std::vector<std::uint64_t> raw(len);
        for (auto& d : raw) d = uniform(1, max_digit);
        std::sort(raw.begin(), raw.end());
        std::vector<BigInt> digits(raw.begin(), raw.end());
        return DigitWord(std::move(digits));
    }

    /// p/q with 0 < p <= q <= max_den.
    Rational unit_rational(std::uint64_t max_den)
    {
        std::uint64_t q = uniform(1, max_den);
        std::uint64_t p = uniform(1, q);
        Rational r(BigInt(static_cast<unsigned long>(p)), BigInt(static_cast<unsigned long>(q)));
        r.canonicalize();
        return r;
    }

private:
    std::mt19937_64 rng_;
};

/// Digits by the textbook recursion b = floor(1/x), x <- (1/x - b) / b.
inline std::vector<BigInt> naive_expand(Rational x, std::size_t limit)
{
    std::vector<BigInt> out;
    while (x != 0 && out.size() < limit) {
        Rational inv = 1 / x;
        BigInt b = inv.get_num() / inv.get_den();
        out.push_back(b);
        x = (inv - b) / b;
    }
    return out;
}

/// [[b_1, ..., b_n]] evaluated from the tail: v = 1 / (b_i + b_i v).
inline Rational naive_value(const DigitWord& w)
{
    Rational v = 0;
    for (std::size_t i = w.size(); i-- > 0;) v = 1 / (Rational(w[i]) + Rational(w[i]) * v);
    return v;
}

/// Cylinder length from the two endpoint values, without continuants.
inline Rational naive_measure(const DigitWord& w)
{
    std::vector<BigInt> bumped(w.begin(), w.end());
    bumped.back() += 1;
    Rational a = naive_value(w);
    Rational b = naive_value(DigitWord(std::move(bumped)));
    return a > b ? Rational(a - b) : Rational(b - a);
}

} // namespace ecf::testing
