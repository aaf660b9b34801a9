#pragma once

#include "ecf/numerics.hpp"

#include <mpfr.h>

#include <optional>
#include <string>

namespace ecf {

/// Closed real interval [lo, hi] with MPFR endpoints. Every operation rounds
/// the lower endpoint toward -inf and the upper endpoint toward +inf, so the
/// result always contains the exact real value of the operation applied to any
/// points of the operands.
class Interval {
public:
    static constexpr mpfr_prec_t kDefaultPrecision = 128;

    /// Process-wide default precision used by constructors that take none.
    static mpfr_prec_t default_precision() noexcept;
    static void set_default_precision(mpfr_prec_t bits);

    Interval();
    explicit Interval(long value, mpfr_prec_t prec = default_precision());
    explicit Interval(const BigInt& value, mpfr_prec_t prec = default_precision());
    explicit Interval(const Rational& value, mpfr_prec_t prec = default_precision());
    Interval(const Rational& lo, const Rational& hi, mpfr_prec_t prec = default_precision());
    /// Interval containing the given double exactly (doubles are dyadic).
    static Interval from_double(double value, mpfr_prec_t prec = default_precision());
    /// [lower endpoint of lo_source, upper endpoint of hi_source]; requires lo <= hi.
    static Interval from_bounds(const Interval& lo_source, const Interval& hi_source);

    /// Degenerate intervals at the endpoints.
    Interval lower_point() const;
    Interval upper_point() const;

    Interval(const Interval& other);
    Interval(Interval&& other) noexcept;
    Interval& operator=(const Interval& other);
    Interval& operator=(Interval&& other) noexcept;
    ~Interval();

    mpfr_prec_t precision() const noexcept { return prec_; }

    double lower() const; // rounded down
    double upper() const; // rounded up
    double mid() const;
    double width() const; // rounded up
    Rational lower_rational() const;
    Rational upper_rational() const;

    bool contains(const Rational& value) const;
    bool contains(const Interval& other) const;
    bool overlaps(const Interval& other) const;
    /// True when every point of *this is strictly below / at most every point of other.
    bool certainly_less(const Interval& other) const;
    bool certainly_leq(const Interval& other) const;
    bool certainly_positive() const;
    bool certainly_negative() const;
    bool contains_zero() const;

    Interval operator-() const;
    Interval& operator+=(const Interval& rhs);
    Interval& operator-=(const Interval& rhs);
    Interval& operator*=(const Interval& rhs);
    Interval& operator/=(const Interval& rhs);

    friend Interval operator+(Interval a, const Interval& b) { return a += b; }
    friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
    friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
    friend Interval operator/(Interval a, const Interval& b) { return a /= b; }

    friend Interval hull(const Interval& a, const Interval& b);
    /// Intersection; nullopt when disjoint.
    friend std::optional<Interval> intersect(const Interval& a, const Interval& b);
    friend Interval min(const Interval& a, const Interval& b);
    friend Interval max(const Interval& a, const Interval& b);
    friend Interval sqrt(const Interval& x);
    friend Interval log(const Interval& x);
    friend Interval exp(const Interval& x);
    friend Interval abs(const Interval& x);

    /// Decimal rendering of the midpoint with the given number of significant digits.
    std::string to_decimal(int digits = 40) const;
    std::string lower_decimal(int digits = 40) const;
    std::string upper_decimal(int digits = 40) const;

    const __mpfr_struct* lo_ptr() const { return lo_; }
    const __mpfr_struct* hi_ptr() const { return hi_; }

private:
    struct Uninit {};
    Interval(Uninit, mpfr_prec_t prec);

    mpfr_prec_t prec_;
    mpfr_t lo_;
    mpfr_t hi_;
};

/// base^exponent for a positive integer base.
Interval interval_pow(const BigInt& base, const Rational& exponent,
                      mpfr_prec_t prec = Interval::default_precision());
Interval interval_pow(const BigInt& base, const Interval& exponent);
/// x^e for an interval x > 0.
Interval pow(const Interval& x, const Interval& e);

/// Natural logarithm; throws std::domain_error for nonpositive input.
Interval interval_log(const Rational& x, mpfr_prec_t prec = Interval::default_precision());
Interval interval_log(const Interval& x);

/// Extended real: a finite enclosure or +inf.
class ExtendedReal {
public:
    static ExtendedReal infinity() { return ExtendedReal(); }
    ExtendedReal(Interval value) : value_(std::move(value)) {}

    bool is_infinite() const noexcept { return !value_.has_value(); }
    bool is_finite() const noexcept { return value_.has_value(); }
    /// Throws std::logic_error for +inf.
    const Interval& value() const;

    /// Interval-overlap equality; +inf only matches +inf.
    bool overlaps(const ExtendedReal& other) const;
    /// +inf compares greater than every finite value.
    bool certainly_greater(const ExtendedReal& other) const;

    std::string to_string(int digits = 40) const;

private:
    ExtendedReal() = default;
    std::optional<Interval> value_;
};

} // namespace ecf
