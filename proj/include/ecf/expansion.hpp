#pragma once

#include "ecf/numerics.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace ecf {

/// True iff every entry is >= 1 and the sequence is non-decreasing. The empty
/// word is admissible.
bool is_admissible(std::span<const BigInt> digits);

/// An admissible ECF digit prefix b_1 <= b_2 <= ... <= b_n, all b_i >= 1.
class DigitWord {
public:
    DigitWord() = default;
    /// Throws std::invalid_argument when the digits are not admissible.
    explicit DigitWord(std::vector<BigInt> digits);
    DigitWord(std::initializer_list<unsigned long> digits);

    std::size_t size() const noexcept { return digits_.size(); }
    bool empty() const noexcept { return digits_.empty(); }
    const BigInt& operator[](std::size_t i) const { return digits_[i]; }
    const BigInt& back() const { return digits_.back(); }
    std::span<const BigInt> digits() const noexcept { return digits_; }
    auto begin() const { return digits_.begin(); }
    auto end() const { return digits_.end(); }

    /// Appends a digit; throws when it would break admissibility.
    void push_back(BigInt digit);
    DigitWord extended(BigInt digit) const;
    DigitWord prefix(std::size_t length) const;

    friend bool operator==(const DigitWord&, const DigitWord&) = default;

private:
    std::vector<BigInt> digits_;
};

struct EcfStep {
    BigInt digit;
    Rational remainder;
};

/// One application of the ECF map: digit = floor(1/x), remainder = T_E x.
EcfStep ecf_step(const Rational& x);

/// Result of expanding a rational or an interval. certified_count equals the
/// number of digits; truncated is set when expansion stopped at max_digits
/// while more digits were still determined.
struct CertifiedExpansion {
    DigitWord digits;
    std::size_t certified_count = 0;
    bool truncated = false;
};

/// Incremental ECF digit extraction on x = num/den held as an unreduced pair.
/// Each step costs one big-integer division and one small multiplication.
class EcfCursor {
public:
    /// Requires 0 < num <= den.
    EcfCursor(BigInt num, BigInt den);
    explicit EcfCursor(const Rational& x);

    /// True once the remainder reached zero (finite expansion exhausted).
    bool done() const noexcept { return num_ == 0; }
    /// Produces the next digit; precondition !done().
    const BigInt& next();
    Rational value() const { return make_rational(num_, den_); }

private:
    BigInt num_;
    BigInt den_;
    BigInt digit_;
    BigInt rem_;
};

CertifiedExpansion expand_rational(const Rational& x, std::size_t max_digits);

/// Longest common digit prefix shared by every real in [lo, hi], certified by
/// exact expansion of both endpoints.
CertifiedExpansion expand_interval(const Rational& lo, const Rational& hi, std::size_t max_digits);

/// Exact value of the finite expansion [[b_1, ..., b_n]].
Rational reconstruct(const DigitWord& word);

/// Continuants Q_0..Q_n with Q_{-1} = 0, Q_0 = 1, Q_k = b_k Q_{k-1} + b_{k-1} Q_{k-2}.
std::vector<BigInt> continuants(const DigitWord& word);

/// Endpoints [[b_1..b_n]] and [[b_1..b_{n-1}, b_n + 1]] of the cylinder,
/// sorted ascending.
std::pair<Rational, Rational> cylinder_endpoints(const DigitWord& word);

} // namespace ecf
