#pragma once

#include "ecf/interval.hpp"
#include "ecf/measure.hpp"
#include "ecf/numerics.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ecf {

/// Enclosures of the golden-ratio constants that shape the rate function.
struct GoldenConstants {
    Interval phi;          // (sqrt5 + 1) / 2
    Interval two_log_phi;  // 2 log phi
    Interval branch_point; // -(sqrt5 - 1) / 2 = 1 - phi
    Interval gamma;        // phi^-2
};

GoldenConstants golden_constants(mpfr_prec_t prec = Interval::default_precision());

enum class RateKind { I, Ib, Iinf, J, Pressure, EngelMomentLimit, ModifiedMomentLimit };

struct RateFunctionId {
    RateKind kind = RateKind::I;
    BigInt b = 1; // only for Ib
};

/// Parses "I", "Ib", "Iinf", "J", "Lambda", "engel", "modified".
RateFunctionId parse_rate_id(const std::string& name, const BigInt& b = 1);

/// Lambda(theta): -theta - 2 log phi for theta <= -phi, -theta - log(1 - theta)
/// for -phi < theta < 1, +inf for theta >= 1.
ExtendedReal pressure(const Interval& theta);

/// (b^2 + 2 + sqrt(b^2 + 4b)) / (2b).
Interval xi_b(const BigInt& b, mpfr_prec_t prec = Interval::default_precision());

ExtendedReal rate(const RateFunctionId& id, const Interval& x);

/// max{-2 log phi, log 1/(1-theta)}, the limit of (1/n) log E(b_n^theta); +inf for theta >= 1.
ExtendedReal moment_limit(const Interval& theta);

using ConvexFn = std::function<ExtendedReal(const Interval&)>;

struct LegendreResult {
    ExtendedReal value = ExtendedReal::infinity();
    double maximizer = 0.0;
};

/// sup over theta in [lo, hi] of theta x - f(theta) for convex f. The lower end
/// of the enclosure is the objective at the numerical maximizer; the upper end
/// comes from secant lines of the concave objective on both sides of it.
LegendreResult legendre_numeric(const ConvexFn& f, const Rational& x, double lo = -50.0,
                                double hi = 1.0 - 1e-12, double tol = 1e-10);

struct GrowthRow {
    std::uint64_t n = 0;
    ExtendedReal value = ExtendedReal::infinity(); // (1/n) log E(b_n^theta)
};

std::vector<GrowthRow> moment_growth_rate(const Rational& theta, const std::vector<std::uint64_t>& n_list,
                                          const MomentOptions& options = {});

/// Normalising sequence a_n for the moderate deviation curve.
struct Scaling {
    std::string name;
    std::function<double(std::uint64_t)> a;
};

/// a_n = n^p; requires 1/2 < p < 1.
Scaling power_scaling(const Rational& p);

struct MdpRow {
    std::uint64_t n = 0;
    Rational theta;   // theta_n, rounded to a dyadic rational
    Interval a_n;     // n theta_n / lambda
    Interval speed;   // a_n^2 / n
    bool feasible = true;
    ExtendedReal value = ExtendedReal::infinity(); // (n/a_n^2)(-n theta_n + log E b_n^theta_n)
};

/// Rows approach lambda^2 / 2.
std::vector<MdpRow> mdp_curve(const Rational& lambda, const std::vector<std::uint64_t>& n_list,
                              const Scaling& scaling, const MomentOptions& options = {});

struct TailProbability {
    std::uint64_t n = 0;
    double upper = 0.0; // an upper bound (e.g. confidence bound) for P(|log b_n / n - 1| >= eps)
};

struct ExponentialBoundReport {
    Interval beta_max;   // min(I(eps), I(-eps)), or I(eps) when the lower tail is empty
    double beta = 0.0;
    double alpha = 0.0;  // smallest alpha with p <= alpha e^{-beta n} on every row
    struct Row {
        std::uint64_t n;
        double upper;
        double bound;
        bool ok;
    };
    std::vector<Row> rows;
};

/// With beta = fraction * beta_max, fits the smallest alpha (or checks the given one).
ExponentialBoundReport exponential_bound_check(const Rational& eps, const std::vector<TailProbability>& tails,
                                               double fraction = 0.9, std::optional<double> alpha = std::nullopt);

} // namespace ecf
