#include "generators.hpp"

#include "ecf/montecarlo.hpp"

#include <doctest.h>

#include <cmath>

using namespace ecf;

TEST_CASE("cell expansion example")
{
    auto e = simulate_cell(Rational(61, 100), Rational(62, 100), 10);
    CHECK(e.digits == DigitWord{1, 1, 1, 1});
    CHECK(simulate_cell(Rational(0), Rational(1, 100), 5).digits.empty());
}

TEST_CASE("default precision")
{
    CHECK(default_bits(10) == 220);
    CHECK(default_bits(1) == 3);
    SampleConfig c;
    c.depth = 1;
    CHECK(c.effective_bits() == 64);
    c.bits = 500;
    CHECK(c.effective_bits() == 500);
}

TEST_CASE("random streams are keyed by seed and index")
{
    CHECK(sample_bits(42, 7, 256) == sample_bits(42, 7, 256));
    CHECK(sample_bits(42, 7, 256) != sample_bits(42, 8, 256));
    CHECK(sample_bits(42, 7, 256) != sample_bits(43, 7, 256));
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rational x = sample_dyadic(1, i, 70);
        CHECK(x > 0);
        CHECK(x <= 1);
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 2, 70);
        CHECK(Rational(x * scale).get_den() == 1);
    }
}

TEST_CASE("property: certified digits are a prefix of every point in the cell")
{
    ecf::testing::Gen gen(41);
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint64_t bits = 80;
        Rational x = sample_dyadic(gen.uniform(0, 1u << 30), trial, bits);
        auto cert = simulate_digits(x, bits, 12);
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
        Rational lo = x - Rational(1) / scale;
        auto hi_digits = ecf::testing::naive_expand(x, 12);
        for (std::size_t i = 0; i < cert.digits.size(); ++i) CHECK(cert.digits[i] == hi_digits[i]);
        if (lo > 0) {
            Rational mid = (lo + x) / 2;
            auto mid_digits = ecf::testing::naive_expand(mid, 12);
            for (std::size_t i = 0; i < cert.digits.size(); ++i) CHECK(cert.digits[i] == mid_digits[i]);
        }
    }
}

TEST_CASE("Clopper-Pearson interval")
{
    auto ci = clopper_pearson(5, 10, 0.95);
    CHECK(ci.lo == doctest::Approx(0.187086).epsilon(1e-5));
    CHECK(ci.hi == doctest::Approx(0.812914).epsilon(1e-5));
    CHECK(clopper_pearson(0, 10, 0.95).lo == 0.0);
    CHECK(clopper_pearson(10, 10, 0.95).hi == 1.0);
    CHECK(clopper_pearson(0, 10, 0.95).hi == doctest::Approx(1 - std::pow(0.025, 0.1)));
}

TEST_CASE("first digit event estimate")
{
    SampleConfig c;
    c.trials = 20000;
    c.depth = 1;
    auto est = estimate_event(c, [](const DigitWord& w) { return w[0] >= 2; });
    CHECK(est.trials + est.uncertified == c.trials);
    CHECK(est.ci.lo < 0.5);
    CHECK(est.ci.hi > 0.5);
    CHECK(est.p_hat == Rational(static_cast<long>(est.hits), static_cast<long>(est.trials)));
}

TEST_CASE("results do not depend on the worker count")
{
    SampleConfig c;
    c.trials = 3000;
    c.seed = 9;
    c.depth = 12;
    c.workers = 1;
    auto one = sample_log_digits(c, {6, 12});
    c.workers = 3;
    auto three = sample_log_digits(c, {6, 12});
    REQUIRE(one.values.size() == three.values.size());
    for (std::size_t d = 0; d < one.values.size(); ++d) {
        for (std::size_t i = 0; i < one.values[d].size(); ++i) {
            double a = one.values[d][i];
            double b = three.values[d][i];
            CHECK(((std::isnan(a) && std::isnan(b)) || a == b));
        }
    }
    c.workers = 1;
    auto e1 = estimate_event(c, [](const DigitWord& w) { return w[5] > 20; });
    c.workers = 4;
    auto e4 = estimate_event(c, [](const DigitWord& w) { return w[5] > 20; });
    CHECK(e1.hits == e4.hits);
    CHECK(e1.trials == e4.trials);
}

TEST_CASE("law of large numbers and tails on shared samples")
{
    SampleConfig c;
    c.trials = 4000;
    c.depth = 30;
    auto samples = sample_log_digits(c, {30});
    CHECK(samples.certified(0) == c.trials);
    LlnReport r = lln_report(samples, 0);
    CHECK(r.mean == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.sd < 0.3);
    auto tail = two_sided_tail(Rational(1, 2), samples, 0);
    CHECK(tail.trials == c.trials);
    CHECK(tail.ci.hi < 0.1);
    CltReport clt = clt_report(samples, 0);
    CHECK(clt.ks < 0.1);
}

TEST_CASE("lower tail decays with a modest slope")
{
    SampleConfig c;
    c.trials = 20000;
    auto report = ldp_slope(Rational(1, 2), Tail::Lower, {5, 10, 15}, c);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.fitted_rows == 3);
    CHECK(report.rows[0].estimate.p_hat > report.rows[2].estimate.p_hat);
    CHECK(report.slope > 0);
    CHECK(report.slope < 0.5);
}
