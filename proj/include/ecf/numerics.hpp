#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ecf {

using BigInt = mpz_class;
/// Always canonical: gcd(|num|, den) = 1 and den > 0 after every GMP operation.
using Rational = mpq_class;

/// Raised when an enumeration would exceed its word budget. Carries the
/// offending count so callers (the CLI in particular) can report it.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const BigInt& count, std::uint64_t budget);

    const BigInt& count() const noexcept { return count_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    BigInt count_;
    std::uint64_t budget_;
};

/// Parses "p/q", "p" or a finite decimal such as "-0.75" into an exact rational.
Rational parse_rational(std::string_view text);

/// "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

Rational make_rational(const BigInt& num, const BigInt& den);

/// Exact conversion of a finite double.
Rational rational_from_double(double value);

/// C(n, k); zero when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Natural logarithm of a positive integer as a double (works far beyond the
/// double exponent range).
double log_double(const BigInt& value);

} // namespace ecf
