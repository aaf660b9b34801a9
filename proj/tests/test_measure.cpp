#include "generators.hpp"

#include "ecf/measure.hpp"

#include <doctest.h>

using namespace ecf;
using ecf::testing::Gen;

TEST_CASE("golden cylinder measures")
{
    CHECK(cylinder_measure(DigitWord{1, 1, 2}) == Rational(1, 35));
    CHECK(cylinder_measure(DigitWord{1, 2, 2}) == Rational(1, 44));
    CHECK(cylinder_measure(DigitWord{2, 2, 2}) == Rational(1, 88));
    CHECK(cylinder_measure(DigitWord{1, 1, 2, 2}) == Rational(1, 133));
    CHECK(cylinder_measure(DigitWord{1, 2, 2, 2}) == Rational(1, 165));
    CHECK(cylinder_measure(DigitWord{2, 2, 2, 2}) == Rational(1, 330));
    CHECK(conditional_probability(DigitWord{1, 1, 2}, BigInt(2)) == Rational(5, 19));
    CHECK(conditional_given_last(4, 2, 2) == Rational(972, 3667));
}

TEST_CASE("first digit law")
{
    // b_1 = k on (1/(k+1), 1/k].
    for (unsigned long k = 1; k <= 50; ++k)
        CHECK(cylinder_measure(DigitWord{k}) == Rational(1, static_cast<long>(k * (k + 1))));
}

TEST_CASE("second digit equal to two")
{
    Rational direct = ecf::testing::naive_measure(DigitWord{1, 2}) + ecf::testing::naive_measure(DigitWord{2, 2});
    MarginalTable t = marginal_exact(2, 2);
    CHECK(t.entries[1].lo == direct);
    CHECK(t.entries[1].hi == direct);
}

TEST_CASE("property: measure equals endpoint distance")
{
    Gen gen(31);
    for (int trial = 0; trial < 1000; ++trial) {
        DigitWord w = gen.word(10, 50);
        CHECK(cylinder_measure(w) == ecf::testing::naive_measure(w));
    }
}

TEST_CASE("property: conditional probability is a ratio of cylinders")
{
    Gen gen(32);
    for (int trial = 0; trial < 1000; ++trial) {
        DigitWord w = gen.word(7, 30);
        BigInt k = w.back() + gen.uniform(0, 40);
        Rational p = conditional_probability(w, k);
        CHECK(p == cylinder_measure(w.extended(k)) / cylinder_measure(w));
        auto q = continuants(w);
        Rational y = make_rational(q[q.size() - 2], q.back());
        CHECK(p == phi_ratio(w.back(), k, y));
    }
}

TEST_CASE("property: sandwich encloses every conditional")
{
    Gen gen(33);
    for (int trial = 0; trial < 2000; ++trial) {
        DigitWord w = gen.word(6, 20);
        BigInt k = w.back() + gen.uniform(0, 60);
        CHECK(transition_bounds(w.back(), k).contains(conditional_probability(w, k)));
    }
}

TEST_CASE("property: children partition the parent in the limit")
{
    // Children with next digit in [b, b + L) plus the rest; the rest is at most
    // the upper sandwich tail sum (j+1)/(b+L).
    Gen gen(34);
    for (int trial = 0; trial < 100; ++trial) {
        DigitWord w = gen.word(5, 10);
        const unsigned long span = 400;
        Rational sum = 0;
        for (unsigned long i = 0; i < span; ++i) sum += conditional_probability(w, w.back() + i);
        Rational rest_bound = Rational(w.back() + 1) / Rational(w.back() + span);
        CHECK(sum < 1);
        CHECK(1 - sum <= rest_bound);
    }
}

TEST_CASE("exact marginal laws are probability vectors")
{
    for (std::uint64_t n = 1; n <= 5; ++n) {
        MarginalTable t = marginal_exact(n, 8);
        Rational total = t.tail.lo;
        for (const auto& e : t.entries) {
            CHECK(e.lo == e.hi);
            total += e.lo;
        }
        CHECK(total == 1);
        CHECK(t.tail.lo == t.tail.hi);
    }
}

TEST_CASE("interval marginal encloses the exact marginal")
{
    for (std::uint64_t n = 1; n <= 5; ++n) {
        MarginalTable exact = marginal_exact(n, 10);
        MarginalTable dp = marginal_interval_dp(n, 10);
        for (std::size_t k = 0; k < 10; ++k) CHECK(dp.entries[k].contains(exact.entries[k].lo));
        CHECK(dp.tail.contains(exact.tail.lo));
    }
}

TEST_CASE("conditional given last digit sums over histories")
{
    // Direct oracle for n = 3: histories (b1, j) with b1 <= j.
    for (unsigned long j = 1; j <= 4; ++j) {
        for (unsigned long k = j; k <= j + 3; ++k) {
            Rational num = 0, den = 0;
            for (unsigned long b1 = 1; b1 <= j; ++b1) {
                num += cylinder_measure(DigitWord{b1, j, k});
                den += cylinder_measure(DigitWord{b1, j});
            }
            CHECK(conditional_given_last(3, j, k) == num / den);
        }
    }
}

TEST_CASE("all-ones law and Fibonacci sandwich")
{
    for (std::uint64_t n = 1; n <= 30; ++n) {
        DigitOneLaw law = prob_digit_one(n);
        CHECK(law.sandwich.contains(law.exact));
        std::vector<BigInt> ones(n, BigInt(1));
        CHECK(law.exact == cylinder_measure(DigitWord(ones)));
        CHECK(binet_continuant(n).contains(Rational(law.q_n)));
    }
}

TEST_CASE("tilted series bounds")
{
    for (std::uint64_t j : {2u, 3u, 10u}) {
        for (Rational theta : {Rational(-2), Rational(-1, 2), Rational(1, 2), Rational(9, 10)}) {
            auto r = series_bounds_check(j, theta, 2000);
            CHECK(r.lower_ok);
            CHECK(r.upper_ok);
        }
    }
}

TEST_CASE("moment enclosure against exact marginals")
{
    // E(b_n^-1) lies in [S, S + P(b_n > K) / (K + 1)] with S the exact partial sum.
    const std::uint64_t cap = 150;
    for (std::uint64_t n : {1u, 2u}) {
        MarginalTable t = marginal_exact(n, cap);
        Rational s = 0;
        for (std::size_t k = 0; k < cap; ++k) s += t.entries[k].lo / static_cast<long>(k + 1);
        Rational hi = s + t.tail.lo / static_cast<long>(cap + 1);
        ExtendedReal e = moment_interval(n, Rational(-1), MomentOptions{40, 8});
        REQUIRE(e.is_finite());
        CHECK(e.value().overlaps(Interval(s, hi)));
    }
}

TEST_CASE("moment edge cases")
{
    ExtendedReal zero = moment_interval(5, Rational(0));
    REQUIRE(zero.is_finite());
    CHECK(zero.value().contains(Rational(1)));
    CHECK(zero.value().width() == 0.0);
    CHECK(moment_interval(3, Rational(1)).is_infinite());
    CHECK(moment_interval(3, Rational(2)).is_infinite());
}

TEST_CASE("property: moments are monotone in theta")
{
    MomentOptions opt{40, 8};
    ExtendedReal a = moment_interval(4, Rational(-1, 2), opt);
    ExtendedReal b = moment_interval(4, Rational(1, 4), opt);
    ExtendedReal c = moment_interval(4, Rational(1, 2), opt);
    CHECK(a.value().certainly_less(b.value()));
    CHECK(b.value().certainly_less(c.value()));
}
