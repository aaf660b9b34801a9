#include "ecf/deviations.hpp"

#include <doctest.h>

#include <cmath>

using namespace ecf;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

Interval iv(long p, long q = 1) { return Interval(Rational(p, q)); }

double mid(const ExtendedReal& x) { return x.value().mid(); }

} // namespace

TEST_CASE("golden constants")
{
    GoldenConstants g = golden_constants();
    CHECK(g.phi.mid() == doctest::Approx(kPhi).epsilon(1e-15));
    CHECK(g.two_log_phi.mid() == doctest::Approx(2 * std::log(kPhi)).epsilon(1e-15));
    CHECK(g.branch_point.mid() == doctest::Approx(1 - kPhi).epsilon(1e-15));
    CHECK(g.gamma.mid() == doctest::Approx(1 / (kPhi * kPhi)).epsilon(1e-15));
    CHECK(g.phi.width() < 1e-35);
}

TEST_CASE("rate function values")
{
    RateFunctionId I{RateKind::I, 1};
    CHECK(mid(rate(I, iv(-1))) == doctest::Approx(0.9624236501192069));
    CHECK(rate(I, iv(0)).value().contains(Rational(0)));
    CHECK(mid(rate(I, iv(1))) == doctest::Approx(1 - std::log(2.0)));
    CHECK(mid(rate(I, iv(-1, 2))) == doctest::Approx(-0.5 + std::log(2.0)));
    CHECK(mid(rate(I, iv(-4, 5))) == doctest::Approx(-kPhi / 5 + 2 * std::log(kPhi)));
    CHECK(rate(I, iv(-2)).is_infinite());
}

TEST_CASE("rate function is continuous and convex at the branch point")
{
    RateFunctionId I{RateKind::I, 1};
    const double x0 = 1 - kPhi;
    for (double h : {1e-3, 1e-5, 1e-7}) {
        double left = mid(rate(I, Interval::from_double(x0 - h)));
        double right = mid(rate(I, Interval::from_double(x0 + h)));
        CHECK(std::abs(left - right) < 4 * h);
    }
    for (double x = -0.95; x < 3; x += 0.05) {
        double a = mid(rate(I, Interval::from_double(x - 0.01)));
        double b = mid(rate(I, Interval::from_double(x)));
        double c = mid(rate(I, Interval::from_double(x + 0.01)));
        CHECK(a + c - 2 * b >= -1e-12);
    }
}

TEST_CASE("other rate functions")
{
    CHECK(rate(RateFunctionId{RateKind::J, 1}, iv(1, 2)).value().contains(Rational(1, 8)));
    CHECK(mid(rate(RateFunctionId{RateKind::Iinf, 1}, iv(1))) == doctest::Approx(1 - std::log(2.0)));
    CHECK(rate(RateFunctionId{RateKind::Iinf, 1}, iv(-1)).is_infinite());
    CHECK(parse_rate_id("Ib", 4).kind == RateKind::Ib);
    CHECK(parse_rate_id("Lambda").kind == RateKind::Pressure);
    CHECK_THROWS(parse_rate_id("nope"));
}

TEST_CASE("xi_b closed form")
{
    for (long b : {1L, 2L, 4L, 10L}) {
        double bd = static_cast<double>(b);
        double expected = (bd * bd + 2 + std::sqrt(bd * bd + 4 * bd)) / (2 * bd);
        CHECK(xi_b(BigInt(b)).mid() == doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK(xi_b(BigInt(1)).mid() == doctest::Approx(kPhi * kPhi).epsilon(1e-14));
}

TEST_CASE("pressure branches")
{
    CHECK(mid(pressure(iv(-2))) == doctest::Approx(2 - 2 * std::log(kPhi)));
    CHECK(mid(pressure(iv(1, 2))) == doctest::Approx(-0.5 + std::log(2.0)));
    CHECK(pressure(iv(0)).value().contains(Rational(0)));
    CHECK(pressure(iv(1)).is_infinite());
    const double t0 = -kPhi;
    double left = mid(pressure(Interval::from_double(t0 - 1e-9)));
    double right = mid(pressure(Interval::from_double(t0 + 1e-9)));
    CHECK(std::abs(left - right) < 1e-8);
}

TEST_CASE("moment limit")
{
    CHECK(moment_limit(iv(0)).value().contains(Rational(0)));
    CHECK(mid(moment_limit(iv(1, 2))) == doctest::Approx(std::log(2.0)));
    CHECK(mid(moment_limit(iv(-3))) == doctest::Approx(-2 * std::log(kPhi)));
    CHECK(moment_limit(iv(1)).is_infinite());
}

TEST_CASE("Legendre transform of the pressure recovers the rate function")
{
    ConvexFn f = [](const Interval& t) { return pressure(t); };
    RateFunctionId I{RateKind::I, 1};
    for (Rational x : {Rational(-9, 10), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1), Rational(3)}) {
        LegendreResult r = legendre_numeric(f, x);
        REQUIRE(r.value.is_finite());
        ExtendedReal closed = rate(I, Interval(x));
        CHECK(r.value.value().overlaps(closed.value()));
        CHECK(r.value.value().width() < 1e-9);
    }
}

TEST_CASE("Legendre transform of J is J")
{
    ConvexFn f = [](const Interval& t) { return ExtendedReal(t * t / Interval(2L)); };
    LegendreResult r = legendre_numeric(f, Rational(3, 2), -50, 50);
    CHECK(r.value.value().contains(Rational(9, 8)));
    CHECK(r.maximizer == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("scaling domain")
{
    CHECK_THROWS(power_scaling(Rational(1, 2)));
    CHECK_THROWS(power_scaling(Rational(1)));
    Scaling s = power_scaling(Rational(3, 4));
    CHECK(s.a(16) == doctest::Approx(8.0));
}

TEST_CASE("moderate deviation rows are consistent")
{
    auto rows = mdp_curve(Rational(1), {8}, power_scaling(Rational(3, 4)), MomentOptions{40, 8});
    REQUIRE(rows.size() == 1);
    const MdpRow& r = rows[0];
    CHECK(r.feasible);
    CHECK(r.theta > 0);
    CHECK(r.theta < 1);
    // a_n = n theta_n / lambda
    CHECK(r.a_n.contains(Rational(8 * r.theta)));
    REQUIRE(r.value.is_finite());
    CHECK(mid(r.value) > 0.0);
    CHECK(mid(r.value) < 2.0);
}

TEST_CASE("exponential bound fit")
{
    std::vector<TailProbability> tails{{10, 0.2}, {20, 0.05}, {30, 0.012}};
    auto report = exponential_bound_check(Rational(1, 2), tails);
    CHECK(report.beta > 0);
    CHECK(report.beta / 0.9 == doctest::Approx(report.beta_max.mid()));
    for (const auto& row : report.rows) {
        CHECK(row.ok);
        CHECK(row.upper <= row.bound * (1 + 1e-12));
    }
    auto strict = exponential_bound_check(Rational(1, 2), tails, 0.9, report.alpha / 2);
    bool any_fail = false;
    for (const auto& row : strict.rows) any_fail = any_fail || !row.ok;
    CHECK(any_fail);
}
