// Two-sided enclosure of the fractional moment E(b_n^theta).
//
// Write z_n = b_n Q_{n-1} / Q_n. Along any history the next-digit law is
//     P(b_{n+1} = k | history) = (b_n + z_n) / ((k + z_n)(k + 1 + z_n)),
// with z_1 = 1 and z_{n+1} = b_{n+1} / (b_{n+1} + z_n). The walk below tracks,
// for every (depth, digit <= K), a bounded number of clusters, each carrying a
// z-range and an enclosure of the probability mass of the histories it
// absorbed. Kernel values are bounded over the z-range of a cluster, so every
// mass interval stays a rigorous enclosure after clusters are merged.
// Mass that leaves the tracked digits (> K) is carried as tilted mass
// E(b^theta; ...) through geometric digit levels [J, 3J/2). Each level has
// uniform one-step growth bounds and a lower bound on the share that moves to
// the next level, so the bounds tighten as the mass climbs.

#include "ecf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecf {

namespace {

struct Cluster {
    Interval z;
    Interval mass;
};

class MomentWalk {
public:
    MomentWalk(std::uint64_t cap, std::uint64_t clusters, mpfr_prec_t prec)
        : K_(cap), M_(clusters), prec_(prec), one_(1L, prec)
    {
        digits_.reserve(K_ + 2);
        for (std::uint64_t d = 0; d <= K_ + 1; ++d) digits_.emplace_back(BigInt(static_cast<unsigned long>(d)), prec);
    }

    const Interval& digit(std::uint64_t d) const { return digits_[d]; }

    // f(z) = (a+z) / ((b+z)(b+1+z)) evaluated over an interval of z.
    Interval kernel_naive(std::uint64_t a, std::uint64_t b, const Interval& z) const
    {
        return (digits_[a] + z) / ((digits_[b] + z) * (digits_[b] + one_ + z));
    }

    // Tight bounds of f over [z.lo, z.hi]. f is unimodal on z >= 0 with its
    // maximum at z* = -a + sqrt((b-a)(b-a+1)), so the minimum sits at an endpoint.
    Interval kernel(std::uint64_t a, std::uint64_t b, const Interval& z) const
    {
        const Interval f_lo = kernel_naive(a, b, z.lower_point());
        const Interval f_hi = kernel_naive(a, b, z.upper_point());
        Interval lower = min(f_lo, f_hi);
        Interval upper = max(f_lo, f_hi);
        if (b > a) {
            const Interval gap(BigInt(static_cast<unsigned long>(b - a)), prec_);
            const Interval z_star = sqrt(gap * (gap + one_)) - digits_[a];
            if (auto inside = intersect(z_star, z)) upper = max(upper, kernel_naive(a, b, *inside));
        }
        return Interval::from_bounds(lower, upper);
    }

    // Image of the z-range under z -> b / (b + z) (decreasing in z).
    Interval next_z(std::uint64_t b, const Interval& z) const
    {
        const Interval hi_end = digits_[b] / (digits_[b] + z.lower_point());
        const Interval lo_end = digits_[b] / (digits_[b] + z.upper_point());
        return Interval::from_bounds(lo_end, hi_end);
    }

    void merge(std::vector<Cluster>& list) const
    {
        if (list.size() <= M_) return;
        std::sort(list.begin(), list.end(), [](const Cluster& x, const Cluster& y) {
            return mpfr_less_p(x.z.lo_ptr(), y.z.lo_ptr());
        });
        std::vector<Cluster> merged;
        merged.reserve(M_);
        const std::size_t total = list.size();
        for (std::size_t g = 0; g < M_; ++g) {
            const std::size_t begin = g * total / M_;
            const std::size_t end = (g + 1) * total / M_;
            if (begin == end) continue;
            Cluster acc = list[begin];
            for (std::size_t i = begin + 1; i < end; ++i) {
                acc.z = hull(acc.z, list[i].z);
                acc.mass += list[i].mass;
            }
            merged.push_back(std::move(acc));
        }
        list = std::move(merged);
    }

    std::uint64_t K_;
    std::uint64_t M_;
    mpfr_prec_t prec_;
    Interval one_;
    std::vector<Interval> digits_;
};


// Bounds on the tilted future of mass sitting above K.
class EscapeModel {
public:
    static constexpr std::size_t kLevels = 80;
    static constexpr std::size_t kGrid = 32;
    static constexpr std::uint64_t kExplicitLimit = 4096;

    EscapeModel(std::uint64_t K, const Rational& theta, std::uint64_t steps, mpfr_prec_t prec)
        : prec_(prec), theta_(theta), th_(theta, prec), one_(1L, prec), one_minus_(one_ - th_)
    {
        BigInt j = static_cast<unsigned long>(K + 1);
        for (std::size_t l = 0; l <= kLevels; ++l) {
            starts_.push_back(j);
            if (j < kExplicitLimit) explicit_levels_ = l + 1;
            j += (j + 1) / 2;
        }
        build_entry_sums();
        build_futures(steps);
    }

    // Tilted mass of the first escape, given (a + z) in `weight` and z in [z_lo, z_hi],
    // carried forward `remaining` steps.
    Interval escape(const Interval& weight, const Interval& mass, const Interval& z, std::uint64_t remaining) const
    {
        const std::size_t g_lo = grid_floor(z.lower());
        const std::size_t g_hi = grid_ceil(z.upper());
        const Interval up = mass.upper_point() * weight.upper_point() * carry_up_[g_lo][remaining];
        const Interval lo = mass.lower_point() * weight.lower_point() * carry_lo_[g_hi][remaining];
        return Interval::from_bounds(lo, up);
    }

private:
    Interval point(const BigInt& v) const { return Interval(v, prec_); }

    std::size_t grid_floor(double z) const
    {
        const double g = std::floor(z * kGrid);
        return g <= 0 ? 0 : std::min<std::size_t>(kGrid, static_cast<std::size_t>(g));
    }
    std::size_t grid_ceil(double z) const
    {
        const double g = std::ceil(z * kGrid);
        return g <= 0 ? 0 : std::min<std::size_t>(kGrid, static_cast<std::size_t>(g));
    }

    // sum_{k>=m} k^theta / ((k+z)(k+z+1)), z in [0, 1].
    Interval remainder(const BigInt& m) const
    {
        const Interval half(Rational(1, 2), prec_);
        const Interval mv = point(m);
        const Interval up = pow(mv - half, th_ - one_) / one_minus_;
        Interval lo = pow(mv + Interval(2L, prec_), th_ - one_) / one_minus_;
        if (theta_ >= 0) lo *= pow(mv / (mv + Interval(2L, prec_)), th_);
        return Interval::from_bounds(lo.lower_point(), up.upper_point());
    }

    // entry_[g][l] encloses sum over k in level l of k^theta / ((k+z)(k+z+1)) at z = g / kGrid.
    // Everything beyond the explicit levels is booked at the first non-explicit level.
    void build_entry_sums()
    {
        const std::uint64_t first = starts_[0].get_ui();
        const std::uint64_t last = starts_[explicit_levels_].get_ui();
        std::vector<Interval> powers;
        powers.reserve(last - first);
        for (std::uint64_t k = first; k < last; ++k) powers.push_back(interval_pow(BigInt(static_cast<unsigned long>(k)), theta_, prec_));
        const Interval tail = remainder(starts_[explicit_levels_]);
        entry_.assign(kGrid + 1, std::vector<Interval>(kLevels + 1, Interval(0L, prec_)));
        for (std::size_t g = 0; g <= kGrid; ++g) {
            const Interval z(Rational(static_cast<long>(g), static_cast<long>(kGrid)), prec_);
            std::size_t level = 0;
            for (std::uint64_t k = first; k < last; ++k) {
                while (k >= starts_[level + 1].get_ui()) ++level;
                const Interval kz = Interval(BigInt(static_cast<unsigned long>(k)), prec_) + z;
                entry_[g][level] += powers[k - first] / (kz * (kz + one_));
            }
            entry_[g][explicit_levels_] += tail;
        }
    }

    // Bounds for one step from a digit j in [J, J2) (J2 = 0: unbounded) with
    // z in [j/(j+1), 1]:
    //   S(j, z) = j^-theta (j+z) sum_{k>=j} k^theta / ((k+z)(k+z+1)),
    // evaluated over the box u = 1/j, z. The sum is compared with integrals of
    // t^(theta-1)/(t+1), expanded as t^(theta-2) - t^(theta-3) (+ t^(theta-4)).
    void level_factors(const BigInt& J, const BigInt& J2, Interval& s_lo, Interval& s_up) const
    {
        const Interval Jv = point(J);
        const Interval two(2L, prec_), three(3L, prec_);
        const Interval half(Rational(1, 2), prec_);
        const Interval w = Jv / (Jv + one_);
        const Rational u_lo = J2 == 0 ? Rational(0) : Rational(1) / Rational(J2);
        const Interval u(u_lo, Rational(1) / Rational(J), prec_);
        const Interval z = Interval::from_bounds(w, one_);
        const Interval v = one_ + (z - half) * u;   // (j + z - 1/2) / j
        const Interval v1 = one_ + z * u;           // (j + z) / j
        const Interval inv = one_ / one_minus_;
        const Interval shift = pow(one_ + u, -th_);
        Interval up = (one_ + u / (two * v)) * pow(v, th_) *
                      (inv - u / ((two - th_) * v) + u * u / ((three - th_) * v * v));
        Interval lo = pow(v1, th_) * (inv - u / ((two - th_) * v1));
        if (theta_ < 0) {
            up *= shift;
            up = min(up, one_);
        } else {
            lo *= shift;
        }
        s_up = up.upper_point();
        s_lo = lo.lower_point();
    }

    // up[t][l], lo[t][l]: bounds on E(b_{s+t}^theta) / b_s^theta from level l.
    // up is kept non-increasing and lo non-decreasing in l. reach[l][i] is a
    // lower bound on the part of one step from level l that lands at level >= i;
    // by Abel summation
    //   up <= s_up up(l) - sum_i reach_i (up(i-1) - up(i)),
    //   lo >= s_lo lo(l) + sum_i reach_i (lo(i) - lo(i-1)).
    void build_futures(std::uint64_t steps)
    {
        const std::size_t L = kLevels + 1;
        std::vector<Interval> s_lo(L, one_), s_up(L, one_);
        std::vector<Interval> tails;
        for (std::size_t i = 0; i < L; ++i) tails.push_back(remainder(starts_[i]).lower_point());
        std::vector<std::vector<Interval>> reach(L);
        for (std::size_t l = 0; l < L; ++l) {
            const BigInt next = l == kLevels ? BigInt(0) : BigInt(starts_[l + 1]);
            level_factors(starts_[l], next, s_lo[l], s_up[l]);
            const Interval Jv = point(starts_[l]);
            const Interval scale = ((Jv + Jv / (Jv + one_)) * pow(Jv, -th_)).lower_point();
            for (std::size_t i = l + 1; i < L; ++i) reach[l].push_back((scale * tails[i]).lower_point());
        }
        std::vector<std::vector<Interval>> up(steps + 1), lo(steps + 1);
        up[0].assign(L, one_);
        lo[0].assign(L, one_);
        for (std::uint64_t t = 1; t <= steps; ++t) {
            up[t].assign(L, one_);
            lo[t].assign(L, one_);
            const auto& pu = up[t - 1];
            const auto& pl = lo[t - 1];
            for (std::size_t l = L; l-- > 0;) {
                Interval u = s_up[l] * pu[l];
                Interval d = s_lo[l] * pl[l];
                for (std::size_t i = l + 1; i < L; ++i) {
                    const Interval& r = reach[l][i - l - 1];
                    u -= r * (pu[i - 1] - pu[i]);
                    d += r * (pl[i] - pl[i - 1]);
                }
                if (l + 1 < L) {
                    u = max(u, up[t][l + 1]);
                    d = min(d, lo[t][l + 1]);
                }
                up[t][l] = u.upper_point();
                lo[t][l] = d.lower_point();
            }
        }
        carry_up_.assign(kGrid + 1, std::vector<Interval>(steps + 1, Interval(0L, prec_)));
        carry_lo_ = carry_up_;
        for (std::size_t g = 0; g <= kGrid; ++g) {
            for (std::uint64_t t = 0; t <= steps; ++t) {
                for (std::size_t l = 0; l < L; ++l) {
                    carry_up_[g][t] += (entry_[g][l] * up[t][l]).upper_point();
                    carry_lo_[g][t] += (entry_[g][l] * lo[t][l]).lower_point();
                }
            }
        }
    }

    mpfr_prec_t prec_;
    Rational theta_;
    Interval th_;
    Interval one_;
    Interval one_minus_;
    std::vector<BigInt> starts_;
    std::size_t explicit_levels_ = 0;
    std::vector<std::vector<Interval>> entry_;
    std::vector<std::vector<Interval>> carry_up_, carry_lo_;
};

} // namespace

ExtendedReal moment_interval(std::uint64_t n, const Rational& theta, const MomentOptions& options)
{
    if (n < 1) throw std::invalid_argument("moment_interval needs n >= 1");
    if (options.cap < 2) throw std::invalid_argument("moment_interval needs cap >= 2");
    if (options.clusters < 1) throw std::invalid_argument("moment_interval needs at least one cluster");
    // E(b_1^theta) = sum k^theta / (k(k+1)) diverges for theta >= 1 and b_n >= b_1.
    if (theta >= 1) return ExtendedReal::infinity();
    const mpfr_prec_t prec = options.precision;
    if (theta == 0) return ExtendedReal(Interval(1L, prec));

    const std::uint64_t K = options.cap;
    MomentWalk walk(K, options.clusters, prec);
    EscapeModel escape(K, theta, n - 1, prec);

    std::vector<Interval> weight; // k^theta, index k
    weight.reserve(K + 1);
    weight.emplace_back(0L, prec);
    for (std::uint64_t k = 1; k <= K; ++k) weight.push_back(interval_pow(BigInt(static_cast<unsigned long>(k)), theta, prec));

    // b_1 > K: P(b_1 = k) = 1 / (k(k+1)), i.e. weight 1 at z = 0.
    const Interval one(1L, prec);
    Interval total = escape.escape(one, one, Interval(0L, prec), n - 1);

    // Depth 1: z_1 = 1 exactly, mass 1/(a(a+1)).
    std::vector<std::vector<Cluster>> level(K + 1);
    for (std::uint64_t a = 1; a <= K; ++a) {
        level[a].push_back({Interval(1L, prec), Interval(Rational(1, a * (a + 1)), prec)});
    }

    for (std::uint64_t depth = 1; depth < n; ++depth) {
        const std::uint64_t remaining = n - depth - 1;
        std::vector<std::vector<Cluster>> next(K + 1);
        for (std::uint64_t a = 1; a <= K; ++a) {
            for (const Cluster& c : level[a]) {
                for (std::uint64_t b = a; b <= K; ++b) {
                    next[b].push_back({walk.next_z(b, c.z), c.mass * walk.kernel(a, b, c.z)});
                }
                total += escape.escape(walk.digit(a) + c.z, c.mass, c.z, remaining);
            }
        }
        for (auto& list : next) walk.merge(list);
        level = std::move(next);
    }

    for (std::uint64_t a = 1; a <= K; ++a) {
        for (const Cluster& c : level[a]) total += c.mass * weight[a];
    }
    return ExtendedReal(total);
}

} // namespace ecf
