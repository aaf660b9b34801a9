#pragma once

#include "ecf/expansion.hpp"
#include "ecf/numerics.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ecf {

/// Name recorded in reports for the per-trial random stream.
inline constexpr const char* kRngName = "splitmix64-v1";

struct SampleConfig {
    std::uint64_t seed = 42;
    std::uint64_t trials = 10'000;
    std::uint64_t bits = 0;   // dyadic precision B; 0 selects default_bits(depth)
    std::uint64_t depth = 1;  // digits needed per trial
    unsigned workers = 0;     // 0: hardware concurrency

    std::uint64_t effective_bits() const;
};

/// ceil(2.2 n^2).
std::uint64_t default_bits(std::uint64_t depth);

/// Deterministic splitmix64 stream for one trial.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t index);
    std::uint64_t next();

private:
    std::uint64_t state_;
};

/// Uniform k on {0, ..., 2^bits - 1} for trial `index`.
BigInt sample_bits(std::uint64_t seed, std::uint64_t index, std::uint64_t bits);
/// (k + 1) / 2^bits.
Rational sample_dyadic(std::uint64_t seed, std::uint64_t index, std::uint64_t bits);

/// Digits shared by every real in the dyadic cell [x - 2^-bits, x] (x a
/// multiple of 2^-bits in (0, 1]), up to `depth` digits.
CertifiedExpansion simulate_digits(const Rational& x, std::uint64_t bits, std::uint64_t depth);
/// Same for an arbitrary cell [lo, hi] with 0 <= lo <= hi <= 1; lo = 0 certifies nothing.
CertifiedExpansion simulate_cell(const Rational& lo, const Rational& hi, std::uint64_t depth);

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Two-sided Clopper-Pearson interval at the given confidence level.
ConfidenceInterval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double level = 0.99);

struct EventEstimate {
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;       // certified trials
    std::uint64_t uncertified = 0;
    Rational p_hat;
    ConfidenceInterval ci;
};

EventEstimate make_estimate(std::uint64_t hits, std::uint64_t trials, std::uint64_t uncertified, double level = 0.99);

/// Event decided from the first `depth` certified digits.
using DigitEvent = std::function<bool(const DigitWord&)>;

/// Throws std::runtime_error when no trial certifies.
EventEstimate estimate_event(const SampleConfig& config, const DigitEvent& event);

/// log b_d for every trial and every requested depth d (NaN when b_d was not certified).
struct LogDigitSamples {
    std::vector<std::uint64_t> depths;
    std::uint64_t bits = 0;
    std::vector<std::vector<double>> values; // values[depth index][trial]

    std::uint64_t certified(std::size_t depth_index) const;
};

LogDigitSamples sample_log_digits(const SampleConfig& config, const std::vector<std::uint64_t>& depths);

struct LlnReport {
    std::uint64_t n = 0;
    std::uint64_t certified = 0;
    std::uint64_t uncertified = 0;
    double mean = 0.0; // of log b_n / n
    double sd = 0.0;
};

LlnReport lln_report(const SampleConfig& config);
LlnReport lln_report(const LogDigitSamples& samples, std::size_t depth_index);

struct QuantileRow {
    double level;
    double empirical;
    double normal;
};

struct CltReport {
    std::uint64_t n = 0;
    std::uint64_t certified = 0;
    std::uint64_t uncertified = 0;
    double ks = 0.0;     // sup |F_n - Phi| for (log b_n - n) / sqrt(n)
    double median = 0.0;
    std::vector<QuantileRow> quantiles;
};

CltReport clt_report(const SampleConfig& config);
CltReport clt_report(const LogDigitSamples& samples, std::size_t depth_index);

enum class Tail { Upper, Lower };

struct LdpRow {
    std::uint64_t n = 0;
    EventEstimate estimate;
    double rate_hat = 0.0;       // -(1/n) log p_hat
    double rate_lo = 0.0;        // from the CI upper bound
    double rate_hi = 0.0;        // from the CI lower bound; +inf when zero hits
};

struct LdpReport {
    Tail tail = Tail::Lower;
    Rational eps;
    std::vector<LdpRow> rows;
    double slope = 0.0;          // least squares slope of -log p_hat against n
    double intercept = 0.0;
    std::size_t fitted_rows = 0; // rows with at least one hit
};

/// Upper: {log b_n - n >= eps n}; Lower: {log b_n - n <= -eps n}.
LdpReport ldp_slope(const Rational& eps, Tail tail, const LogDigitSamples& samples);
LdpReport ldp_slope(const Rational& eps, Tail tail, const std::vector<std::uint64_t>& n_list,
                    const SampleConfig& config);

/// Probability estimate of {|log b_n / n - 1| >= eps} from shared samples.
EventEstimate two_sided_tail(const Rational& eps, const LogDigitSamples& samples, std::size_t depth_index);

} // namespace ecf
