#include "generators.hpp"

#include "ecf/combinatorics.hpp"

#include <doctest.h>

#include <set>

using namespace ecf;

namespace {

// Brute force: every non-decreasing word of length n over {1..m}.
std::uint64_t brute_count(std::uint64_t n, std::uint64_t m, LastDigitMode mode)
{
    std::uint64_t total = 0;
    std::vector<std::uint64_t> w(n, 1);
    while (true) {
        if (mode == LastDigitMode::AtMost || w.back() == m) ++total;
        std::size_t i = n;
        while (i > 0 && w[i - 1] == m) --i;
        if (i == 0) break;
        ++w[i - 1];
        for (std::size_t j = i; j < n; ++j) w[j] = w[i - 1];
    }
    return total;
}

} // namespace

TEST_CASE("known counts")
{
    CHECK(count_words({3, 3, LastDigitMode::Exact}) == 6);
    CHECK(count_words({3, 3, LastDigitMode::AtMost}) == 10);
    CHECK(count_words({1, 7, LastDigitMode::Exact}) == 1);
    CHECK(count_words({1, 7, LastDigitMode::AtMost}) == 7);
}

TEST_CASE("counts match brute force")
{
    for (std::uint64_t n = 1; n <= 6; ++n)
        for (std::uint64_t m = 1; m <= 6; ++m)
            for (auto mode : {LastDigitMode::Exact, LastDigitMode::AtMost})
                CHECK(count_words({n, m, mode}) == brute_count(n, m, mode));
}

TEST_CASE("property: Pascal recursion")
{
    ecf::testing::Gen gen(21);
    for (int trial = 0; trial < 500; ++trial) {
        std::uint64_t n = gen.uniform(2, 200);
        std::uint64_t m = gen.uniform(2, 200);
        BigInt lhs = count_words({n, m, LastDigitMode::Exact});
        CHECK(lhs == count_words({n - 1, m, LastDigitMode::Exact}) + count_words({n, m - 1, LastDigitMode::Exact}));
        CHECK(lhs == count_words({n - 1, m, LastDigitMode::AtMost}));
        CHECK(count_words({n, m, LastDigitMode::AtMost}) ==
              count_words({n, m - 1, LastDigitMode::AtMost}) + lhs);
    }
}

TEST_CASE("enumeration is lexicographic, admissible and complete")
{
    for (std::uint64_t n = 1; n <= 5; ++n) {
        for (std::uint64_t m = 1; m <= 5; ++m) {
            for (auto mode : {LastDigitMode::Exact, LastDigitMode::AtMost}) {
                auto words = enumerate_words({n, m, mode});
                CHECK(BigInt(static_cast<unsigned long>(words.size())) == count_words({n, m, mode}));
                std::set<std::vector<unsigned long>> seen;
                std::vector<unsigned long> previous;
                for (const auto& w : words) {
                    CHECK(w.size() == n);
                    CHECK(is_admissible(w.digits()));
                    if (mode == LastDigitMode::Exact) CHECK(w.back() == m);
                    else CHECK(w.back() <= m);
                    std::vector<unsigned long> raw;
                    for (const auto& d : w) raw.push_back(d.get_ui());
                    CHECK(seen.insert(raw).second);
                    if (!previous.empty()) CHECK(previous < raw);
                    previous = raw;
                }
            }
        }
    }
}

TEST_CASE("raw stream matches word stream")
{
    WordStream a({4, 6, LastDigitMode::AtMost});
    WordStream b({4, 6, LastDigitMode::AtMost});
    while (auto w = a.next()) {
        const auto* raw = b.next_raw();
        REQUIRE(raw != nullptr);
        REQUIRE(raw->size() == w->size());
        for (std::size_t i = 0; i < raw->size(); ++i) CHECK((*w)[i] == (*raw)[i]);
    }
    CHECK(b.next_raw() == nullptr);
}

TEST_CASE("budget refusal reports the count")
{
    try {
        WordStream s({20, 20, LastDigitMode::Exact}, 1000);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.count() == binomial(38, 19));
        CHECK(e.budget() == 1000);
    }
}
