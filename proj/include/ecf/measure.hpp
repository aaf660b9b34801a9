#pragma once

#include "ecf/combinatorics.hpp"
#include "ecf/expansion.hpp"
#include "ecf/interval.hpp"
#include "ecf/numerics.hpp"

#include <cstdint>
#include <vector>

namespace ecf {

/// Exact enclosure [lo, hi] of a probability.
struct ProbInterval {
    Rational lo;
    Rational hi;

    bool contains(const Rational& p) const { return lo <= p && p <= hi; }
    static ProbInterval point(const Rational& p) { return {p, p}; }
};

/// Lebesgue measure of the cylinder B(w): prod_{i<n} b_i / (Q_n (Q_n + Q_{n-1})).
Rational cylinder_measure(const DigitWord& word);

/// a(1+y) / ((b + a y)(b + 1 + a y)); the one-step ratio P(B(w, b)) / P(B(w))
/// for a word w ending in a with y = Q_{n-1}/Q_n.
Rational phi_ratio(const BigInt& a, const BigInt& b, const Rational& y);

/// P(B(prefix, next)) / P(B(prefix)).
Rational conditional_probability(const DigitWord& prefix, const BigInt& next);

/// P(b_n = k | b_{n-1} = j), summing over every admissible history.
Rational conditional_given_last(std::uint64_t n, std::uint64_t j, std::uint64_t k,
                                std::uint64_t budget = kDefaultWordBudget);

/// [j/(k(k+2)), (j+1)/(k(k+1))], valid for every history ending in j.
ProbInterval transition_bounds(const BigInt& j, const BigInt& k);

struct MarginalTable {
    std::uint64_t n = 0;
    std::uint64_t cap = 0;
    /// entries[k-1] encloses P(b_n = k), k = 1..cap.
    std::vector<ProbInterval> entries;
    /// Encloses P(b_n > cap).
    ProbInterval tail;
    /// Number of depth-n cylinders summed (exact tables only).
    BigInt cylinders_visited = 0;
};

/// Exact law of b_n on {1..kmax} by summing every cylinder of Sigma_{n, <= kmax}.
MarginalTable marginal_exact(std::uint64_t n, std::uint64_t kmax,
                             std::uint64_t budget = kDefaultWordBudget);

/// Rigorous enclosure of the law of b_n obtained by iterating the transition
/// sandwich from the exact law of b_1. O(n K^2) exact rational work.
MarginalTable marginal_interval_dp(std::uint64_t n, std::uint64_t cap);

struct DigitOneLaw {
    BigInt q_n;       // Fibonacci continuant of the all-ones word
    BigInt q_prev;
    Rational exact;   // P(b_n = 1)
    ProbInterval sandwich; // [1/(2 Q_n^2), 1/Q_n^2]
};

DigitOneLaw prob_digit_one(std::uint64_t n);

/// Binet enclosure (phi^{n+1} - psi^{n+1}) / sqrt(5) of the n-th all-ones continuant.
Interval binet_continuant(std::uint64_t n, mpfr_prec_t prec = Interval::default_precision());

struct SeriesBoundsReport {
    bool lower_ok = false;
    bool upper_ok = false;
    Interval lower_series;   // sum_{k>=j} j/(k(k+2)) (k/j)^theta
    Interval lower_bound;    // (j/(j+2)) / (1-theta)
    Interval upper_series;   // sum_{k>=j} (j+1)/(k(k+1)) (k/j)^theta
    Interval upper_bound;    // (1+1/j)(1-1/j)^(theta-1) / (1-theta)
};

/// Encloses both one-step tilted series with `terms` explicit terms plus
/// integral tail enclosures, and decides the two inequalities as interval
/// statements. Requires j >= 2 and theta < 1.
SeriesBoundsReport series_bounds_check(std::uint64_t j, const Rational& theta, std::uint64_t terms,
                                       mpfr_prec_t prec = Interval::default_precision());

struct MomentOptions {
    std::uint64_t cap = 60;          // largest tracked digit K
    std::uint64_t clusters = 32;     // history clusters kept per (depth, digit)
    mpfr_prec_t precision = Interval::default_precision();
};

/// Two-sided enclosure of E(b_n^theta); +inf when theta >= 1.
ExtendedReal moment_interval(std::uint64_t n, const Rational& theta, const MomentOptions& options = {});

} // namespace ecf
