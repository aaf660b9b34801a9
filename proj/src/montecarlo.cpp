#include "ecf/montecarlo.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ecf {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

unsigned worker_count(const SampleConfig& config, std::uint64_t trials)
{
    unsigned w = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(trials, 1)));
}

// Runs body(index) for every trial, partitioned into contiguous index blocks.
template <typename Body>
void for_each_trial(const SampleConfig& config, Body body)
{
    const std::uint64_t trials = config.trials;
    const unsigned workers = worker_count(config, trials);
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < trials; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_lock;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = trials * w / workers;
        const std::uint64_t end = trials * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::uint64_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// Cell [k / 2^B, (k+1) / 2^B] as unreduced fractions over 2^B.
CertifiedExpansion expand_dyadic(const BigInt& k, std::uint64_t bits, std::uint64_t depth)
{
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
    if (k == 0) return {};
    EcfCursor a(k, den);
    EcfCursor b(BigInt(k + 1), den);
    std::vector<BigInt> digits;
    bool agree = true;
    while (digits.size() < depth && !a.done() && !b.done()) {
        const BigInt& da = a.next();
        if (da != b.next()) {
            agree = false;
            break;
        }
        digits.push_back(da);
    }
    CertifiedExpansion out;
    out.truncated = agree && digits.size() == depth && !a.done() && !b.done();
    out.certified_count = digits.size();
    out.digits = DigitWord(std::move(digits));
    return out;
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

} // namespace

std::uint64_t default_bits(std::uint64_t depth)
{
    return (22 * depth * depth + 9) / 10;
}

std::uint64_t SampleConfig::effective_bits() const
{
    return bits ? bits : std::max<std::uint64_t>(default_bits(depth), 64);
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t index)
    : state_(mix(seed ^ mix(index + kGolden)))
{
}

std::uint64_t TrialRng::next()
{
    state_ += kGolden;
    return mix(state_);
}

BigInt sample_bits(std::uint64_t seed, std::uint64_t index, std::uint64_t bits)
{
    if (bits < 1) throw std::invalid_argument("bits must be >= 1");
    TrialRng rng(seed, index);
    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buffer(words);
    for (auto& w : buffer) w = rng.next();
    BigInt k;
    mpz_import(k.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buffer.data());
    mpz_fdiv_r_2exp(k.get_mpz_t(), k.get_mpz_t(), bits);
    return k;
}

Rational sample_dyadic(std::uint64_t seed, std::uint64_t index, std::uint64_t bits)
{
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
    return make_rational(sample_bits(seed, index, bits) + 1, den);
}

CertifiedExpansion simulate_digits(const Rational& x, std::uint64_t bits, std::uint64_t depth)
{
    if (x <= 0 || x > 1) throw std::domain_error("sample must lie in (0, 1]");
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
    const Rational scaled = x * Rational(den);
    if (scaled.get_den() != 1) throw std::invalid_argument("sample is not a multiple of 2^-bits");
    return expand_dyadic(BigInt(scaled.get_num() - 1), bits, depth);
}

CertifiedExpansion simulate_cell(const Rational& lo, const Rational& hi, std::uint64_t depth)
{
    if (lo < 0 || hi > 1 || lo > hi || hi <= 0) throw std::domain_error("cell must satisfy 0 <= lo <= hi <= 1, hi > 0");
    if (lo == 0) return {};
    return expand_interval(lo, hi, depth);
}

ConfidenceInterval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double level)
{
    if (trials == 0) return {0.0, 1.0};
    if (hits > trials) throw std::invalid_argument("hits exceed trials");
    const double alpha = 1.0 - level;
    const double k = static_cast<double>(hits), n = static_cast<double>(trials);
    ConfidenceInterval ci;
    ci.lo = hits == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1, alpha / 2);
    ci.hi = hits == trials ? 1.0 : boost::math::ibeta_inv(k + 1, n - k, 1 - alpha / 2);
    return ci;
}

EventEstimate make_estimate(std::uint64_t hits, std::uint64_t trials, std::uint64_t uncertified, double level)
{
    if (trials == 0) throw std::runtime_error("no certified trials");
    EventEstimate e;
    e.hits = hits;
    e.trials = trials;
    e.uncertified = uncertified;
    e.p_hat = make_rational(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(trials)));
    e.ci = clopper_pearson(hits, trials, level);
    return e;
}

EventEstimate estimate_event(const SampleConfig& config, const DigitEvent& event)
{
    const std::uint64_t bits = config.effective_bits();
    // 0: miss, 1: hit, 2: uncertified
    std::vector<unsigned char> outcome(config.trials, 2);
    for_each_trial(config, [&](std::uint64_t i) {
        const CertifiedExpansion e = expand_dyadic(sample_bits(config.seed, i, bits), bits, config.depth);
        if (e.certified_count < config.depth) return;
        outcome[i] = event(e.digits) ? 1 : 0;
    });
    std::uint64_t hits = 0, certified = 0;
    for (auto o : outcome) {
        if (o == 2) continue;
        ++certified;
        hits += o;
    }
    return make_estimate(hits, certified, config.trials - certified);
}

std::uint64_t LogDigitSamples::certified(std::size_t depth_index) const
{
    const auto& v = values.at(depth_index);
    return static_cast<std::uint64_t>(std::count_if(v.begin(), v.end(), [](double x) { return !std::isnan(x); }));
}

LogDigitSamples sample_log_digits(const SampleConfig& config, const std::vector<std::uint64_t>& depths)
{
    if (depths.empty()) throw std::invalid_argument("need at least one depth");
    LogDigitSamples out;
    out.depths = depths;
    const std::uint64_t max_depth = *std::max_element(depths.begin(), depths.end());
    if (max_depth < 1) throw std::invalid_argument("depths must be >= 1");
    SampleConfig run = config;
    run.depth = max_depth;
    out.bits = run.effective_bits();
    out.values.assign(depths.size(), std::vector<double>(config.trials, std::numeric_limits<double>::quiet_NaN()));
    for_each_trial(run, [&](std::uint64_t i) {
        const CertifiedExpansion e = expand_dyadic(sample_bits(run.seed, i, out.bits), out.bits, max_depth);
        for (std::size_t d = 0; d < depths.size(); ++d) {
            if (e.certified_count >= depths[d]) out.values[d][i] = log_double(e.digits[depths[d] - 1]);
        }
    });
    return out;
}

LlnReport lln_report(const LogDigitSamples& samples, std::size_t depth_index)
{
    LlnReport r;
    r.n = samples.depths.at(depth_index);
    double sum = 0.0, sum_sq = 0.0;
    for (double v : samples.values[depth_index]) {
        if (std::isnan(v)) {
            ++r.uncertified;
            continue;
        }
        const double s = v / static_cast<double>(r.n);
        ++r.certified;
        sum += s;
        sum_sq += s * s;
    }
    if (r.certified == 0) throw std::runtime_error("no certified trials");
    const double m = sum / static_cast<double>(r.certified);
    r.mean = m;
    r.sd = r.certified > 1 ? std::sqrt(std::max(0.0, (sum_sq - r.certified * m * m) / static_cast<double>(r.certified - 1))) : 0.0;
    return r;
}

LlnReport lln_report(const SampleConfig& config)
{
    return lln_report(sample_log_digits(config, {config.depth}), 0);
}

CltReport clt_report(const LogDigitSamples& samples, std::size_t depth_index)
{
    CltReport r;
    r.n = samples.depths.at(depth_index);
    const double n = static_cast<double>(r.n);
    std::vector<double> z;
    for (double v : samples.values[depth_index]) {
        if (std::isnan(v)) {
            ++r.uncertified;
            continue;
        }
        z.push_back((v - n) / std::sqrt(n));
    }
    r.certified = z.size();
    if (z.empty()) throw std::runtime_error("no certified trials");
    std::sort(z.begin(), z.end());
    const double count = static_cast<double>(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double f = normal_cdf(z[i]);
        r.ks = std::max({r.ks, f - static_cast<double>(i) / count, static_cast<double>(i + 1) / count - f});
    }
    auto quantile = [&](double q) {
        const double pos = q * (count - 1);
        const std::size_t i = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(i);
        return i + 1 < z.size() ? z[i] * (1 - frac) + z[i + 1] * frac : z.back();
    };
    r.median = quantile(0.5);
    const boost::math::normal standard;
    for (double q : {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99}) {
        r.quantiles.push_back({q, quantile(q), boost::math::quantile(standard, q)});
    }
    return r;
}

CltReport clt_report(const SampleConfig& config)
{
    return clt_report(sample_log_digits(config, {config.depth}), 0);
}

LdpReport ldp_slope(const Rational& eps, Tail tail, const LogDigitSamples& samples)
{
    if (eps < 0) throw std::invalid_argument("eps must be >= 0");
    LdpReport report;
    report.tail = tail;
    report.eps = eps;
    const double e = eps.get_d();
    std::vector<double> xs, ys;
    for (std::size_t d = 0; d < samples.depths.size(); ++d) {
        const std::uint64_t n = samples.depths[d];
        const double threshold = tail == Tail::Upper ? (1 + e) * static_cast<double>(n) : (1 - e) * static_cast<double>(n);
        std::uint64_t hits = 0, certified = 0;
        for (double v : samples.values[d]) {
            if (std::isnan(v)) continue;
            ++certified;
            if (tail == Tail::Upper ? v >= threshold : v <= threshold) ++hits;
        }
        LdpRow row;
        row.n = n;
        row.estimate = make_estimate(hits, certified, samples.values[d].size() - certified);
        const double nd = static_cast<double>(n);
        row.rate_lo = -std::log(row.estimate.ci.hi) / nd;
        row.rate_hi = hits ? -std::log(row.estimate.ci.lo) / nd : std::numeric_limits<double>::infinity();
        row.rate_hat = hits ? -std::log(row.estimate.p_hat.get_d()) / nd : std::numeric_limits<double>::infinity();
        if (hits) {
            xs.push_back(nd);
            ys.push_back(-std::log(row.estimate.p_hat.get_d()));
        }
        report.rows.push_back(row);
    }
    report.fitted_rows = xs.size();
    if (xs.size() >= 2) {
        const double k = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        report.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        report.intercept = (sy - report.slope * sx) / k;
    }
    return report;
}

LdpReport ldp_slope(const Rational& eps, Tail tail, const std::vector<std::uint64_t>& n_list, const SampleConfig& config)
{
    return ldp_slope(eps, tail, sample_log_digits(config, n_list));
}

EventEstimate two_sided_tail(const Rational& eps, const LogDigitSamples& samples, std::size_t depth_index)
{
    const double n = static_cast<double>(samples.depths.at(depth_index));
    const double e = eps.get_d();
    std::uint64_t hits = 0, certified = 0;
    for (double v : samples.values[depth_index]) {
        if (std::isnan(v)) continue;
        ++certified;
        if (std::abs(v / n - 1.0) >= e) ++hits;
    }
    return make_estimate(hits, certified, samples.values[depth_index].size() - certified);
}

} // namespace ecf
