#include "ecf/acceptance.hpp"

#include "ecf/combinatorics.hpp"
#include "ecf/deviations.hpp"
#include "ecf/expansion.hpp"
#include "ecf/measure.hpp"
#include "ecf/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>

namespace ecf::acceptance {

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(const char* pattern, auto... args)
{
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, pattern, args...);
    return buffer;
}

Rational q(long p, long d = 1) { return Rational(p, d); }

DigitWord random_word(std::mt19937_64& rng, std::size_t max_len, unsigned long max_digit)
{
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    std::uniform_int_distribution<unsigned long> digit(1, max_digit);
    std::vector<unsigned long> raw(len(rng));
    for (auto& d : raw) d = digit(rng);
    std::sort(raw.begin(), raw.end());
    std::vector<BigInt> digits(raw.begin(), raw.end());
    return DigitWord(std::move(digits));
}

// 1. Golden rationals.
Outcome golden_rationals()
{
    struct Case {
        DigitWord word;
        Rational expected;
    };
    const std::vector<Case> cases = {
        {{1, 1, 2}, q(1, 35)},     {{1, 2, 2}, q(1, 44)},     {{2, 2, 2}, q(1, 88)},
        {{1, 1, 2, 2}, q(1, 133)}, {{1, 2, 2, 2}, q(1, 165)}, {{2, 2, 2, 2}, q(1, 330)},
    };
    for (const auto& c : cases) {
        const Rational got = cylinder_measure(c.word);
        if (got != c.expected) return {false, "cylinder measure " + to_string(got) + " != " + to_string(c.expected)};
    }
    const Rational cond = conditional_probability(DigitWord{1, 1, 2}, 2);
    if (cond != q(5, 19)) return {false, "conditional_probability([1,1,2],2) = " + to_string(cond)};
    const Rational given = conditional_given_last(4, 2, 2);
    if (given != q(972, 3667)) return {false, "conditional_given_last(4,2,2) = " + to_string(given)};
    return {true, "6 cylinders, 5/19, 972/3667 exact"};
}

// 2. Counting against Pascal's triangle.
Outcome counting()
{
    std::vector<std::vector<std::uint64_t>> pascal(21, std::vector<std::uint64_t>(21, 0));
    for (std::size_t i = 0; i <= 20; ++i) {
        pascal[i][0] = 1;
        for (std::size_t j = 1; j <= i; ++j) pascal[i][j] = pascal[i - 1][j - 1] + pascal[i - 1][j];
    }
    std::uint64_t checked = 0;
    for (std::uint64_t n = 1; n <= 10; ++n) {
        for (std::uint64_t m = 1; m <= 10; ++m) {
            for (auto mode : {LastDigitMode::Exact, LastDigitMode::AtMost}) {
                const WordFamily family{n, m, mode};
                const std::uint64_t expected = mode == LastDigitMode::Exact ? pascal[n + m - 2][m - 1] : pascal[n + m - 1][m - 1];
                WordStream stream(family);
                std::uint64_t listed = 0;
                std::vector<std::uint64_t> previous;
                while (const auto* w = stream.next_raw()) {
                    if (!std::is_sorted(w->begin(), w->end()) || w->front() < 1 || w->back() > m) return {false, "inadmissible word listed"};
                    if (mode == LastDigitMode::Exact && w->back() != m) return {false, "wrong last digit"};
                    if (!previous.empty() && !(previous < *w)) return {false, "listing not strictly increasing"};
                    previous = *w;
                    ++listed;
                }
                if (listed != expected || count_words(family) != BigInt(static_cast<unsigned long>(expected))) {
                    return {false, fmt("n=%lu m=%lu: listed %lu, expected %lu", n, m, listed, expected)};
                }
                ++checked;
            }
        }
    }
    return {true, fmt("%lu families match the binomials", checked)};
}

// 3. Cylinder width equals the measure formula.
Outcome cylinder_geometry()
{
    std::mt19937_64 rng(20240501);
    for (int i = 0; i < 1000; ++i) {
        const DigitWord w = random_word(rng, 10, 50);
        const auto [left, right] = cylinder_endpoints(w);
        // prod_{i<n} b_i / (Q_n (Q_n + Q_{n-1})) from the continuants.
        const auto qs = continuants(w);
        BigInt prod = 1;
        for (std::size_t k = 0; k + 1 < w.size(); ++k) prod *= w[k];
        const Rational formula = make_rational(prod, qs.back() * (qs.back() + qs[qs.size() - 2]));
        if (right - left != formula || cylinder_measure(w) != formula) return {false, "width mismatch at word " + std::to_string(i)};
    }
    return {true, "1000 random words, exact"};
}

// 4. Round trips. A word ending in a repeated digit b, b is the twin of the
// canonical word ending in b + 1; expansion returns the canonical one.
Outcome round_trips()
{
    std::mt19937_64 rng(7);
    int twins = 0;
    for (int i = 0; i < 1000; ++i) {
        const DigitWord w = random_word(rng, 12, 50);
        DigitWord canonical = w;
        const std::size_t n = w.size();
        if (n >= 2 && w[n - 1] == w[n - 2]) {
            canonical = w.prefix(n - 1);
            std::vector<BigInt> digits(canonical.begin(), canonical.end());
            digits.back() += 1;
            canonical = DigitWord(std::move(digits));
            ++twins;
        }
        const CertifiedExpansion e = expand_rational(reconstruct(w), 64);
        if (e.truncated || !(e.digits == canonical)) return {false, "expand(reconstruct(w)) is not the canonical word"};
    }
    std::uniform_int_distribution<unsigned long> den(1, 1'000'000);
    for (int i = 0; i < 1000; ++i) {
        const unsigned long d = den(rng);
        const unsigned long p = std::uniform_int_distribution<unsigned long>(1, d)(rng);
        const Rational x = make_rational(BigInt(p), BigInt(d));
        const CertifiedExpansion e = expand_rational(x, 100000);
        if (e.truncated || reconstruct(e.digits) != x) return {false, "reconstruct(expand(x)) != x for " + to_string(x)};
    }
    return {true, fmt("1000 words (%d twins) and 1000 rationals", twins)};
}

// 5. Transition sandwich, exhaustive.
Outcome sandwich()
{
    std::uint64_t checked = 0;
    for (std::uint64_t len = 1; len <= 5; ++len) {
        WordStream stream({len, 20, LastDigitMode::AtMost});
        while (auto w = stream.next()) {
            const unsigned long last = w->back().get_ui();
            for (unsigned long k = last; k <= 20; ++k) {
                const Rational p = conditional_probability(*w, k);
                if (!transition_bounds(w->back(), k).contains(p)) return {false, "sandwich violated"};
                ++checked;
            }
        }
    }
    return {true, fmt("%lu (prefix, next) pairs", checked)};
}

// 6. Fibonacci sandwich and Binet enclosure.
Outcome fibonacci()
{
    for (std::uint64_t n = 1; n <= 30; ++n) {
        const DigitOneLaw law = prob_digit_one(n);
        std::vector<BigInt> ones(n, BigInt(1));
        const DigitWord all_ones(ones);
        if (law.exact != cylinder_measure(all_ones)) return {false, fmt("P(b_%lu = 1) disagrees with the cylinder", n)};
        const Rational q2 = Rational(law.q_n * law.q_n);
        if (!(1 / (2 * q2) <= law.exact && law.exact <= 1 / q2)) return {false, fmt("sandwich fails at n=%lu", n)};
        if (!binet_continuant(n).contains(Rational(law.q_n))) return {false, fmt("Binet misses Q_%lu", n)};
    }
    return {true, "n = 1..30"};
}

// 7. Interval DP contains the exact marginals.
Outcome interval_dp()
{
    int tables = 0;
    for (std::uint64_t n = 1; n <= 6; ++n) {
        for (std::uint64_t K = 1; K <= 12; ++K) {
            const MarginalTable exact = marginal_exact(n, K);
            const MarginalTable dp = marginal_interval_dp(n, K);
            for (std::uint64_t k = 0; k < K; ++k) {
                if (!dp.entries[k].contains(exact.entries[k].lo)) return {false, fmt("n=%lu K=%lu digit %lu", n, K, k + 1)};
            }
            if (!dp.tail.contains(exact.tail.lo)) return {false, fmt("n=%lu K=%lu tail", n, K)};
            ++tables;
        }
    }
    return {true, fmt("%d tables", tables)};
}

// Distance interval |row - target|.
std::pair<double, double> distance(const Interval& row, const Interval& target)
{
    const Interval d = row - target;
    if (d.contains_zero()) return {0.0, std::max(-d.lower(), d.upper())};
    const Interval a = abs(d);
    return {a.lower(), a.upper()};
}

// True when each later row is certainly at least as close as the earlier one.
bool certainly_approaching(const std::vector<std::pair<double, double>>& d)
{
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i].second > d[i - 1].first) return false;
    }
    return true;
}

// 8. Moment growth limit.
Outcome moment_limit_check()
{
    std::ostringstream detail;
    bool ok = true;
    for (const char* text : {"-3", "-1/2", "0", "1/2", "9/10"}) {
        const Rational theta = parse_rational(text);
        const auto rows = moment_growth_rate(theta, {4, 8, 12}, MomentOptions{60, 8});
        const Interval limit = moment_limit(Interval(theta)).value();
        if (theta == 0) {
            for (const auto& r : rows) {
                if (!(r.value.value().lower() == 0 && r.value.value().upper() == 0)) ok = false;
            }
            detail << "theta=0 exact; ";
            continue;
        }
        std::vector<std::pair<double, double>> d;
        for (const auto& r : rows) d.push_back(distance(r.value.value(), limit));
        const bool close = d.back().second <= 0.15;
        const bool trend = certainly_approaching(d);
        ok = ok && close && trend;
        detail << "theta=" << text << fmt(" dist(n=12) <= %.4f%s; ", d.back().second, trend ? "" : " NOT monotone");
    }
    return {ok, detail.str()};
}

// 9. Rate function identities.
Outcome rate_identities()
{
    const RateFunctionId I{RateKind::I, 1};
    double worst = 0.0;
    const ConvexFn lambda_fn = [](const Interval& t) { return pressure(t); };
    for (int i = 0; i < 200; ++i) {
        const Rational x = rational_from_double(-0.99 + 5.99 * i / 199.0);
        const Interval L = legendre_numeric(lambda_fn, x).value.value();
        const Interval r = rate(I, Interval(x)).value();
        worst = std::max({worst, L.upper() - r.lower(), r.upper() - L.lower()});
    }
    if (worst > 1e-6) return {false, fmt("Legendre deviation %.3g", worst)};

    const GoldenConstants g = golden_constants();
    const Interval one(1L);
    const Interval bp = g.branch_point;
    const Interval i_first = bp - log(bp + one);
    const Interval i_middle = -g.phi * (bp + one) + g.two_log_phi;
    const Interval l_first = g.phi - g.two_log_phi;
    const Interval l_second = g.phi - log(one + g.phi);
    const double join_width = std::max(hull(i_first, i_middle).width(), hull(l_first, l_second).width());
    if (!i_first.overlaps(i_middle) || !l_first.overlaps(l_second) || join_width > 1e-20) {
        return {false, fmt("branch joins fail (width %.3g)", join_width)};
    }

    const RateFunctionId I1{RateKind::Ib, 1}, Ibig{RateKind::Ib, 1'000'000}, Iinf{RateKind::Iinf, 1};
    double family = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const Interval x(rational_from_double(-0.9 + 5.9 * i / 200.0));
        if (!rate(I1, x).overlaps(rate(I, x))) return {false, "I_1 differs from I"};
        const Interval diff = rate(Ibig, x).value() - rate(Iinf, x).value();
        family = std::max(family, std::max(-diff.lower(), diff.upper()));
    }
    for (int i = 0; i <= 40; ++i) {
        const Interval x(rational_from_double(-0.99 + 0.99 * i / 40.0));
        if (!rate(I1, x).overlaps(rate(I, x))) return {false, "I_1 differs from I on the middle branch"};
    }
    if (family > 1e-3) return {false, fmt("I_b vs I_inf deviation %.3g", family)};

    const ConvexFn half_square = [](const Interval& t) { return ExtendedReal(t * t / Interval(2L)); };
    double dual = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const Rational x = rational_from_double(-5.0 + 10.0 * i / 100.0);
        const Interval L = legendre_numeric(half_square, x, -50.0, 50.0).value.value();
        const Interval target = Interval(x) * Interval(x) / Interval(2L);
        dual = std::max({dual, L.upper() - target.lower(), target.upper() - L.lower()});
    }
    if (dual > 1e-8) return {false, fmt("J self-duality deviation %.3g", dual)};
    return {true, fmt("Legendre %.2g, joins %.2g, I_b %.2g, J %.2g", worst, join_width, family, dual)};
}

const LogDigitSamples& depth_100_samples()
{
    static const LogDigitSamples samples = [] {
        SampleConfig c;
        c.seed = 42;
        c.trials = 10'000;
        c.depth = 100;
        return sample_log_digits(c, {100});
    }();
    return samples;
}

const LogDigitSamples& tail_samples()
{
    static const LogDigitSamples samples = [] {
        SampleConfig c;
        c.seed = 42;
        c.trials = 1'000'000;
        c.depth = 40;
        return sample_log_digits(c, {10, 20, 30, 40});
    }();
    return samples;
}

// 10. Law of large numbers.
Outcome lln()
{
    const LlnReport r = lln_report(depth_100_samples(), 0);
    const bool ok = r.mean >= 0.99 && r.mean <= 1.01 && r.uncertified == 0;
    return {ok, fmt("mean %.5f, sd %.4f, uncertified %lu at B=%lu", r.mean, r.sd, r.uncertified, depth_100_samples().bits)};
}

// 11. Central limit theorem.
Outcome clt()
{
    const CltReport r = clt_report(depth_100_samples(), 0);
    return {r.ks <= 0.1, fmt("KS %.4f, median %.4f", r.ks, r.median)};
}

// 12. Large deviation slopes.
Outcome ldp()
{
    const auto& s = tail_samples();
    const RateFunctionId I{RateKind::I, 1};
    const double target_lower = rate(I, Interval(q(-1, 2))).value().mid();
    const double target_upper = rate(I, Interval(q(1))).value().mid();
    const LdpReport lower = ldp_slope(q(1, 2), Tail::Lower, s);
    LogDigitSamples upper_samples = s;
    upper_samples.depths.pop_back();
    upper_samples.values.pop_back();
    const LdpReport upper = ldp_slope(q(1), Tail::Upper, upper_samples);
    const double rel_lower = lower.slope / target_lower - 1;
    const double rel_upper = upper.slope / target_upper - 1;
    const bool ok = std::abs(rel_lower) <= 0.3 && std::abs(rel_upper) <= 0.3 && lower.fitted_rows == 4 && upper.fitted_rows == 3;
    return {ok, fmt("lower %.4f vs I(-1/2)=%.5f (%+.1f%%), upper %.4f vs I(1)=%.5f (%+.1f%%)", lower.slope, target_lower,
                    100 * rel_lower, upper.slope, target_upper, 100 * rel_upper)};
}

// 13. Exponential bound with a single alpha.
Outcome exponential_bound()
{
    const auto& s = tail_samples();
    std::vector<TailProbability> tails;
    std::vector<double> xs, ys;
    for (std::size_t d = 0; d < s.depths.size(); ++d) {
        const EventEstimate e = two_sided_tail(q(1, 2), s, d);
        tails.push_back({s.depths[d], e.ci.hi});
        xs.push_back(static_cast<double>(s.depths[d]));
        ys.push_back(-std::log(e.ci.hi));
    }
    const ExponentialBoundReport report = exponential_bound_check(q(1, 2), tails, 0.9);
    const bool all_ok = std::all_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return r.ok; });
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const bool ok = all_ok && std::isfinite(report.alpha) && slope >= report.beta;
    return {ok, fmt("beta %.5f, alpha %.4f, observed decay %.4f", report.beta, report.alpha, slope)};
}

// 14. Moderate deviation trend.
Outcome mdp_trend()
{
    std::ostringstream detail;
    bool ok = true;
    const Scaling scaling = power_scaling(q(3, 4));
    for (long lambda : {-1L, 1L}) {
        const auto rows = mdp_curve(q(lambda), {8, 12, 16}, scaling, MomentOptions{60, 8});
        const Interval target = Interval(q(lambda * lambda, 2));
        std::vector<std::pair<double, double>> d;
        detail << "lambda=" << lambda << " rows";
        for (const auto& r : rows) {
            const Interval& v = r.value.value();
            d.push_back(distance(v, target));
            detail << fmt(" [%.4f, %.4f]", v.lower(), v.upper());
        }
        const bool trend = certainly_approaching(d);
        ok = ok && trend;
        detail << (trend ? " approaching; " : " NOT approaching; ");
    }
    return {ok, detail.str()};
}

struct Entry {
    const char* title;
    Outcome (*run)();
};

const Entry kEntries[] = {
    {"golden cylinder rationals", golden_rationals},
    {"word counts", counting},
    {"cylinder geometry", cylinder_geometry},
    {"round trips", round_trips},
    {"transition sandwich", sandwich},
    {"Fibonacci sandwich", fibonacci},
    {"interval DP enclosure", interval_dp},
    {"moment growth limit", moment_limit_check},
    {"rate function identities", rate_identities},
    {"Monte Carlo LLN", lln},
    {"Monte Carlo CLT", clt},
    {"Monte Carlo LDP slopes", ldp},
    {"exponential bound", exponential_bound},
    {"MDP trend", mdp_trend},
};

} // namespace

std::vector<int> suite_items(Suite suite)
{
    if (suite == Suite::Quick) return {1, 2, 3, 4, 5, 6, 7, 9};
    std::vector<int> all(std::size(kEntries));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i + 1);
    return all;
}

CriterionResult run_criterion(int id)
{
    if (id < 1 || id > static_cast<int>(std::size(kEntries))) throw std::out_of_range("no such criterion");
    const Entry& entry = kEntries[id - 1];
    CriterionResult result;
    result.id = id;
    result.title = entry.title;
    const auto start = std::chrono::steady_clock::now();
    try {
        const Outcome o = entry.run();
        result.passed = o.passed;
        result.detail = o.detail;
    } catch (const std::exception& e) {
        result.passed = false;
        result.detail = std::string("error: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<CriterionResult> run_suite(Suite suite, const std::function<void(const CriterionResult&)>& on_result)
{
    std::vector<CriterionResult> results;
    for (int id : suite_items(suite)) {
        results.push_back(run_criterion(id));
        if (on_result) on_result(results.back());
    }
    return results;
}

std::string format_result(const CriterionResult& r)
{
    return fmt("[%s] %2d  %s (%.1f s): %s", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds, r.detail.c_str());
}

} // namespace ecf::acceptance
