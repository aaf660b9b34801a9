#include "ecf/deviations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecf {

namespace {

// Pieces of x on either side of a breakpoint; nullopt when empty.
struct Split {
    std::optional<Interval> below; // x <= point
    std::optional<Interval> above; // x >= point
};

Split split_at(const Interval& x, const Interval& point)
{
    Split out;
    if (!point.certainly_less(x)) out.below = x.certainly_leq(point) ? x : Interval::from_bounds(x, point);
    if (!x.certainly_less(point)) out.above = point.certainly_leq(x) ? x : Interval::from_bounds(point, x);
    return out;
}

ExtendedReal hull_of(const std::optional<Interval>& a, const std::optional<Interval>& b)
{
    if (a && b) return ExtendedReal(hull(*a, *b));
    if (a) return ExtendedReal(*a);
    if (b) return ExtendedReal(*b);
    throw std::logic_error("empty split");
}

// x - log(x+1) on x > -1.
Interval first_branch(const Interval& x)
{
    return x - log(x + Interval(1L, x.precision()));
}

// Rate with middle branch (1 - xi)(x+1) + log xi on [-1, -1 + 1/xi].
ExtendedReal piecewise_rate(const Interval& x, const Interval& xi)
{
    const mpfr_prec_t prec = x.precision();
    const Interval minus_one(-1L, prec);
    if (x.certainly_less(minus_one)) return ExtendedReal::infinity();
    if (x.lower_rational() < Rational(-1)) return ExtendedReal::infinity();
    const Interval one(1L, prec);
    const Interval breakpoint = one / xi - one;
    const Split parts = split_at(x, breakpoint);
    std::optional<Interval> middle, upper;
    if (parts.below) middle = (one - xi) * (*parts.below + one) + log(xi);
    if (parts.above) upper = first_branch(*parts.above);
    return hull_of(middle, upper);
}

Interval point_of(double t, mpfr_prec_t prec)
{
    return Interval(rational_from_double(t), prec);
}

} // namespace

GoldenConstants golden_constants(mpfr_prec_t prec)
{
    const Interval one(1L, prec);
    const Interval phi = (one + sqrt(Interval(5L, prec))) / Interval(2L, prec);
    return {phi, Interval(2L, prec) * log(phi), one - phi, one / (phi * phi)};
}

RateFunctionId parse_rate_id(const std::string& name, const BigInt& b)
{
    if (name == "I") return {RateKind::I, 1};
    if (name == "Ib") {
        if (b < 1) throw std::invalid_argument("I_b needs b >= 1");
        return {RateKind::Ib, b};
    }
    if (name == "Iinf") return {RateKind::Iinf, 1};
    if (name == "J") return {RateKind::J, 1};
    if (name == "Lambda") return {RateKind::Pressure, 1};
    if (name == "engel") return {RateKind::EngelMomentLimit, 1};
    if (name == "modified") return {RateKind::ModifiedMomentLimit, 1};
    throw std::invalid_argument("unknown rate function: " + name);
}

ExtendedReal pressure(const Interval& theta)
{
    const mpfr_prec_t prec = theta.precision();
    const Interval one(1L, prec);
    if (!theta.certainly_less(one)) return ExtendedReal::infinity();
    const GoldenConstants g = golden_constants(prec);
    const Split parts = split_at(theta, -g.phi);
    std::optional<Interval> fibonacci, smooth;
    if (parts.below) fibonacci = -*parts.below - g.two_log_phi;
    if (parts.above) smooth = -*parts.above - log(one - *parts.above);
    return hull_of(fibonacci, smooth);
}

Interval xi_b(const BigInt& b, mpfr_prec_t prec)
{
    if (b < 1) throw std::invalid_argument("xi_b needs b >= 1");
    const Interval bv(b, prec);
    return (bv * bv + Interval(2L, prec) + sqrt(bv * bv + Interval(4L, prec) * bv)) / (Interval(2L, prec) * bv);
}

ExtendedReal moment_limit(const Interval& theta)
{
    const mpfr_prec_t prec = theta.precision();
    const Interval one(1L, prec);
    if (!theta.certainly_less(one)) return ExtendedReal::infinity();
    const GoldenConstants g = golden_constants(prec);
    return ExtendedReal(max(-g.two_log_phi, -log(one - theta)));
}

ExtendedReal rate(const RateFunctionId& id, const Interval& x)
{
    const mpfr_prec_t prec = x.precision();
    const Interval one(1L, prec);
    switch (id.kind) {
    case RateKind::I: {
        const GoldenConstants g = golden_constants(prec);
        return piecewise_rate(x, g.phi * g.phi);
    }
    case RateKind::Ib:
        return piecewise_rate(x, xi_b(id.b, prec));
    case RateKind::Iinf:
        if (!Interval(-1L, prec).certainly_less(x)) return ExtendedReal::infinity();
        return ExtendedReal(first_branch(x));
    case RateKind::J:
        return ExtendedReal(x * x / Interval(2L, prec));
    case RateKind::Pressure:
        return pressure(x);
    case RateKind::EngelMomentLimit:
        if (!x.certainly_less(one)) return ExtendedReal::infinity();
        return ExtendedReal(max(-log(Interval(2L, prec)), -log(one - x)));
    case RateKind::ModifiedMomentLimit:
        if (!x.certainly_less(one)) return ExtendedReal::infinity();
        return ExtendedReal(-log(one - x));
    }
    throw std::logic_error("unhandled rate function");
}

LegendreResult legendre_numeric(const ConvexFn& f, const Rational& x, double lo, double hi, double tol)
{
    if (!(lo < hi)) throw std::invalid_argument("legendre bracket must satisfy lo < hi");
    const mpfr_prec_t prec = Interval::default_precision();
    const Interval xv(x, prec);

    // Objective theta x - f(theta); nullopt stands for -inf.
    auto objective = [&](double t) -> std::optional<Interval> {
        const Interval tv = point_of(t, prec);
        const ExtendedReal ft = f(tv);
        if (ft.is_infinite()) return std::nullopt;
        return tv * xv - ft.value();
    };
    auto score = [&](double t) {
        const auto v = objective(t);
        return v ? v->mid() : -HUGE_VAL;
    };

    // Coarse scan to land in the finite region, then golden-section search.
    constexpr int kScan = 64;
    double best_t = lo;
    double best = -HUGE_VAL;
    for (int i = 0; i <= kScan; ++i) {
        const double t = lo + (hi - lo) * i / kScan;
        const double s = score(t);
        if (s > best) {
            best = s;
            best_t = t;
        }
    }
    if (best == -HUGE_VAL) return {};
    const double step = (hi - lo) / kScan;
    double a = std::max(lo, best_t - step);
    double b = std::min(hi, best_t + step);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = score(c), fd = score(d);
    for (int iter = 0; iter < 400 && b - a > tol * (1.0 + std::abs(a)) * 1e-6; ++iter) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = score(d);
        }
        if (c == d) break;
    }
    double t_star = (a + b) / 2;
    for (double t : {a, b, c, d}) {
        if (score(t) > score(t_star)) t_star = t;
    }

    const auto at_star = objective(t_star);
    if (!at_star) return {};

    // Secant bounds: for concave g and p1 < p2, g(t) <= g(p2) + s12 (t - p2) for t >= p2.
    auto secant = [&](double p, double q) -> std::optional<Interval> {
        const auto gp = objective(p), gq = objective(q);
        if (!gp || !gq) return std::nullopt;
        return (*gq - *gp) / (point_of(q, prec) - point_of(p, prec));
    };
    double h = std::max(tol, 1e-13 * (1.0 + std::abs(t_star)));
    for (int attempt = 0; attempt < 80; ++attempt, h *= 2) {
        const double p2 = std::max(lo, t_star - h), p1 = p2 - h;
        const double p3 = std::min(hi, t_star + h), p4 = p3 + h;
        const bool left_edge = p2 <= lo, right_edge = p3 >= hi;
        const auto g2 = objective(p2), g3 = objective(p3);
        if (!g2 || !g3) continue;
        std::optional<Interval> s12, s34;
        if (!left_edge) {
            s12 = secant(p1, p2);
            if (!s12 || s12->lower() < 0) continue;
        }
        if (!right_edge) {
            s34 = secant(p3, p4);
            if (!s34 || s34->upper() > 0) continue;
        }
        const Interval P2 = point_of(p2, prec), P3 = point_of(p3, prec);
        std::optional<Interval> bound;
        auto take = [&](const Interval& candidate) { bound = bound ? min(*bound, candidate) : candidate; };
        if (s12) take(*g2 + *s12 * (P3 - P2));
        if (s34) take(*g3 + *s34 * (P2 - P3));
        if (!bound) take(max(*g2, *g3));
        Interval upper = max(bound->upper_point(), at_star->upper_point());
        return {ExtendedReal(Interval::from_bounds(at_star->lower_point(), upper)), t_star};
    }
    throw std::runtime_error("legendre_numeric could not certify the supremum");
}

std::vector<GrowthRow> moment_growth_rate(const Rational& theta, const std::vector<std::uint64_t>& n_list,
                                          const MomentOptions& options)
{
    std::vector<GrowthRow> rows;
    for (std::uint64_t n : n_list) {
        if (n < 1) throw std::invalid_argument("depths must be >= 1");
        GrowthRow row{n, ExtendedReal::infinity()};
        if (theta == 0) {
            row.value = ExtendedReal(Interval(0L, options.precision));
        } else {
            const ExtendedReal m = moment_interval(n, theta, options);
            if (m.is_finite()) row.value = ExtendedReal(log(m.value()) / Interval(static_cast<long>(n), options.precision));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Scaling power_scaling(const Rational& p)
{
    if (!(p > Rational(1, 2) && p < 1)) throw std::invalid_argument("power scaling needs 1/2 < p < 1");
    const double e = p.get_d();
    return {"n^" + to_string(p), [e](std::uint64_t n) { return std::pow(static_cast<double>(n), e); }};
}

std::vector<MdpRow> mdp_curve(const Rational& lambda, const std::vector<std::uint64_t>& n_list,
                              const Scaling& scaling, const MomentOptions& options)
{
    const mpfr_prec_t prec = options.precision;
    std::vector<MdpRow> rows;
    for (std::uint64_t n : n_list) {
        if (n < 1) throw std::invalid_argument("depths must be >= 1");
        MdpRow row;
        row.n = n;
        const Interval nv(static_cast<long>(n), prec);
        const double a = scaling.a(n);
        if (lambda == 0) {
            row.theta = 0;
            row.a_n = Interval::from_double(a, prec);
            row.speed = row.a_n * row.a_n / nv;
            row.value = ExtendedReal(Interval(0L, prec));
            rows.push_back(std::move(row));
            continue;
        }
        row.theta = rational_from_double(lambda.get_d() * a / static_cast<double>(n));
        const Interval th(row.theta, prec);
        row.a_n = nv * th / Interval(lambda, prec);
        row.speed = row.a_n * row.a_n / nv;
        if (row.theta >= 1) {
            row.feasible = false;
            rows.push_back(std::move(row));
            continue;
        }
        const ExtendedReal m = moment_interval(n, row.theta, options);
        if (m.is_finite()) {
            row.value = ExtendedReal(nv / (row.a_n * row.a_n) * (log(m.value()) - nv * th));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ExponentialBoundReport exponential_bound_check(const Rational& eps, const std::vector<TailProbability>& tails,
                                               double fraction, std::optional<double> alpha)
{
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    if (!(fraction > 0 && fraction <= 1)) throw std::invalid_argument("fraction must lie in (0, 1]");
    const mpfr_prec_t prec = Interval::default_precision();
    const RateFunctionId I{RateKind::I, 1};
    const ExtendedReal up = rate(I, Interval(eps, prec));
    const ExtendedReal down = rate(I, Interval(Rational(-eps), prec));
    ExponentialBoundReport report;
    report.beta_max = down.is_finite() ? min(up.value(), down.value()) : up.value();
    report.beta = fraction * report.beta_max.lower();
    double fitted = 0.0;
    for (const auto& t : tails) fitted = std::max(fitted, t.upper * std::exp(report.beta * static_cast<double>(t.n)));
    report.alpha = alpha.value_or(fitted);
    for (const auto& t : tails) {
        const double bound = report.alpha * std::exp(-report.beta * static_cast<double>(t.n));
        report.rows.push_back({t.n, t.upper, bound, t.upper <= bound * (1 + 1e-12)});
    }
    return report;
}

} // namespace ecf
