#include "generators.hpp"

#include "ecf/expansion.hpp"

#include <doctest.h>

using namespace ecf;
using ecf::testing::Gen;

TEST_CASE("known expansions")
{
    CHECK(expand_rational(Rational(7, 10), 20).digits == DigitWord{1, 2, 6});
    CHECK(expand_rational(Rational(3, 5), 20).digits == DigitWord{1, 1, 2});
    CHECK(expand_rational(Rational(1), 20).digits == DigitWord{1});
    auto e = expand_rational(Rational(7, 10), 20);
    CHECK_FALSE(e.truncated);
    CHECK(e.certified_count == 3);
}

TEST_CASE("single step")
{
    EcfStep s = ecf_step(Rational(7, 10));
    CHECK(s.digit == 1);
    CHECK(s.remainder == Rational(3, 7));
    s = ecf_step(Rational(3, 7));
    CHECK(s.digit == 2);
    CHECK(s.remainder == Rational(1, 6));
}

TEST_CASE("truncation flag")
{
    auto e = expand_rational(Rational(7, 10), 2);
    CHECK(e.digits == DigitWord{1, 2});
    CHECK(e.truncated);
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(expand_rational(Rational(0), 5), std::domain_error);
    CHECK_THROWS_AS(expand_rational(Rational(3, 2), 5), std::domain_error);
    CHECK_THROWS_AS(DigitWord({3, 2}), std::invalid_argument);
    DigitWord w{2, 3};
    CHECK_THROWS_AS(w.push_back(BigInt(1)), std::invalid_argument);
}

TEST_CASE("interval spanning a digit boundary certifies nothing")
{
    auto e = expand_interval(Rational(1, 3), Rational(2, 3), 10);
    CHECK(e.digits.empty());
    CHECK(e.certified_count == 0);
}

TEST_CASE("interval inside a cylinder certifies its word")
{
    Gen gen(11);
    for (int trial = 0; trial < 300; ++trial) {
        DigitWord w = gen.word(6, 30);
        auto [lo, hi] = cylinder_endpoints(w);
        Rational a = lo + (hi - lo) / 3;
        Rational b = lo + 2 * (hi - lo) / 3;
        auto e = expand_interval(a, b, w.size());
        REQUIRE(e.digits.size() == w.size());
        CHECK(e.digits == w);
    }
}

TEST_CASE("property: expansion agrees with the textbook recursion")
{
    Gen gen(1);
    for (int trial = 0; trial < 2000; ++trial) {
        Rational x = gen.unit_rational(100000);
        auto e = expand_rational(x, 200);
        auto naive = ecf::testing::naive_expand(x, 200);
        REQUIRE(e.digits.size() == naive.size());
        for (std::size_t i = 0; i < naive.size(); ++i) CHECK(e.digits[i] == naive[i]);
        CHECK_FALSE(e.truncated);
    }
}

TEST_CASE("property: reconstruct inverts expand")
{
    Gen gen(2);
    for (int trial = 0; trial < 2000; ++trial) {
        Rational x = gen.unit_rational(1000000);
        CHECK(reconstruct(expand_rational(x, 500).digits) == x);
    }
}

TEST_CASE("property: reconstruct matches the nested fraction")
{
    Gen gen(3);
    for (int trial = 0; trial < 1000; ++trial) {
        DigitWord w = gen.word(10, 50);
        CHECK(reconstruct(w) == ecf::testing::naive_value(w));
    }
}

TEST_CASE("property: expanded words are canonical")
{
    // A word ending in b, b names the same number as the word ending in b + 1.
    Gen gen(4);
    for (int trial = 0; trial < 1000; ++trial) {
        DigitWord w = gen.word(8, 40);
        std::vector<BigInt> twin(w.begin(), w.end());
        twin.push_back(w.back());
        std::vector<BigInt> bumped(w.begin(), w.end());
        bumped.back() += 1;
        CHECK(reconstruct(DigitWord(twin)) == reconstruct(DigitWord(bumped)));

        DigitWord e = expand_rational(reconstruct(w), 100).digits;
        bool canonical = w.size() < 2 || w[w.size() - 2] < w.back();
        if (canonical) CHECK(e == w);
        if (e.size() >= 2) CHECK(e[e.size() - 2] < e.back());
    }
}

TEST_CASE("property: continuant recurrence and endpoint width")
{
    Gen gen(5);
    for (int trial = 0; trial < 500; ++trial) {
        DigitWord w = gen.word(10, 50);
        auto q = continuants(w);
        REQUIRE(q.size() == w.size() + 1);
        CHECK(q[0] == 1);
        CHECK(q[1] == w[0]);
        for (std::size_t k = 2; k <= w.size(); ++k) CHECK(q[k] == w[k - 1] * q[k - 1] + w[k - 2] * q[k - 2]);
        auto [lo, hi] = cylinder_endpoints(w);
        CHECK(lo < hi);
        CHECK(hi - lo == ecf::testing::naive_measure(w));
    }
}

TEST_CASE("property: cursor agrees with one-step map")
{
    Gen gen(6);
    for (int trial = 0; trial < 500; ++trial) {
        Rational x = gen.unit_rational(50000);
        EcfCursor cursor(x);
        Rational y = x;
        while (!cursor.done()) {
            EcfStep s = ecf_step(y);
            CHECK(cursor.next() == s.digit);
            y = s.remainder;
            CHECK(cursor.value() == y);
            if (y == 0) break;
        }
        CHECK(cursor.done());
    }
}
