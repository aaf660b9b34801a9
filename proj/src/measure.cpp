#include "ecf/measure.hpp"

#include <stdexcept>

namespace ecf {

Rational cylinder_measure(const DigitWord& word)
{
    if (word.empty()) throw std::invalid_argument("cylinder_measure of an empty word");
    const auto q = continuants(word);
    BigInt prod = 1;
    for (std::size_t i = 0; i + 1 < word.size(); ++i) prod *= word[i];
    const BigInt& qn = q[word.size()];
    const BigInt& qp = q[word.size() - 1];
    return make_rational(prod, qn * (qn + qp));
}

Rational phi_ratio(const BigInt& a, const BigInt& b, const Rational& y)
{
    if (a < 1 || b < a) throw std::invalid_argument("phi_ratio requires 1 <= a <= b");
    if (y < 0 || y > 1) throw std::invalid_argument("phi_ratio requires 0 <= y <= 1");
    const Rational ay = Rational(a) * y;
    return Rational(a) * (1 + y) / ((Rational(b) + ay) * (Rational(b) + 1 + ay));
}

Rational conditional_probability(const DigitWord& prefix, const BigInt& next)
{
    if (prefix.empty()) throw std::invalid_argument("conditional_probability needs a nonempty prefix");
    if (next < prefix.back()) throw std::invalid_argument("extension is not admissible");
    return cylinder_measure(prefix.extended(next)) / cylinder_measure(prefix);
}

namespace {

// Depth-first walk over Sigma_{len, <= kmax} (or Sigma_{len, last}) carrying
// continuants and the digit product, so each node costs O(1) big-int work.
struct CylinderWalker {
    std::uint64_t len;
    std::uint64_t kmax;
    std::uint64_t last_exact; // 0 means no constraint on the last digit

    template <class Leaf>
    void walk(Leaf&& leaf) const
    {
        std::vector<std::uint64_t> digits;
        digits.reserve(len);
        recurse(digits, BigInt(0), BigInt(1), BigInt(1), leaf);
    }

    template <class Leaf>
    void recurse(std::vector<std::uint64_t>& digits, const BigInt& q_prev, const BigInt& q_curr,
                 const BigInt& prod, Leaf& leaf) const
    {
        if (digits.size() == len) {
            leaf(digits, q_prev, q_curr, prod);
            return;
        }
        const std::uint64_t lo = digits.empty() ? 1 : digits.back();
        const bool last = digits.size() + 1 == len;
        std::uint64_t hi = kmax;
        std::uint64_t start = lo;
        if (last && last_exact != 0) {
            if (last_exact < lo) return;
            start = hi = last_exact;
        }
        const BigInt prev_digit = digits.empty() ? BigInt(0) : BigInt(static_cast<unsigned long>(digits.back()));
        const BigInt next_prod = digits.empty() ? prod : prod * prev_digit;
        for (std::uint64_t d = start; d <= hi; ++d) {
            BigInt q_next = BigInt(static_cast<unsigned long>(d)) * q_curr + prev_digit * q_prev;
            digits.push_back(d);
            recurse(digits, q_curr, q_next, next_prod, leaf);
            digits.pop_back();
        }
    }
};

Rational measure_from(const BigInt& q_prev, const BigInt& q_curr, const BigInt& prod)
{
    return make_rational(prod, q_curr * (q_curr + q_prev));
}

} // namespace

Rational conditional_given_last(std::uint64_t n, std::uint64_t j, std::uint64_t k, std::uint64_t budget)
{
    if (n < 2) throw std::invalid_argument("conditional_given_last needs n >= 2");
    if (j < 1 || k < j) throw std::invalid_argument("conditional_given_last needs 1 <= j <= k");
    const BigInt count = count_words({n - 1, j, LastDigitMode::Exact});
    if (count > BigInt(static_cast<unsigned long>(budget))) throw BudgetExceeded(count, budget);
    Rational joint = 0;
    Rational marginal = 0;
    const BigInt kb(static_cast<unsigned long>(k));
    const BigInt jb(static_cast<unsigned long>(j));
    CylinderWalker{n - 1, j, j}.walk([&](const std::vector<std::uint64_t>&, const BigInt& qp, const BigInt& qc,
                                         const BigInt& prod) {
        marginal += measure_from(qp, qc, prod);
        const BigInt q_next = kb * qc + jb * qp;
        joint += measure_from(qc, q_next, prod * jb);
    });
    return joint / marginal;
}

ProbInterval transition_bounds(const BigInt& j, const BigInt& k)
{
    if (j < 1 || k < j) throw std::invalid_argument("transition_bounds requires 1 <= j <= k");
    return {make_rational(j, k * (k + 2)), make_rational(j + 1, k * (k + 1))};
}

MarginalTable marginal_exact(std::uint64_t n, std::uint64_t kmax, std::uint64_t budget)
{
    if (n < 1 || kmax < 1) throw std::invalid_argument("marginal_exact needs n >= 1 and kmax >= 1");
    const BigInt count = count_words({n, kmax, LastDigitMode::AtMost});
    if (count > BigInt(static_cast<unsigned long>(budget))) throw BudgetExceeded(count, budget);
    std::vector<Rational> sums(kmax, Rational(0));
    BigInt visited = 0;
    CylinderWalker{n, kmax, 0}.walk([&](const std::vector<std::uint64_t>& digits, const BigInt& qp,
                                        const BigInt& qc, const BigInt& prod) {
        sums[digits.back() - 1] += measure_from(qp, qc, prod);
        ++visited;
    });
    MarginalTable table;
    table.n = n;
    table.cap = kmax;
    Rational total = 0;
    for (auto& s : sums) {
        total += s;
        table.entries.push_back(ProbInterval::point(s));
    }
    table.tail = ProbInterval::point(1 - total);
    table.cylinders_visited = visited;
    return table;
}

MarginalTable marginal_interval_dp(std::uint64_t n, std::uint64_t cap)
{
    if (n < 1 || cap < 1) throw std::invalid_argument("marginal_interval_dp needs n >= 1 and cap >= 1");
    const std::uint64_t K = cap;
    std::vector<Rational> lo(K), up(K);
    for (std::uint64_t k = 1; k <= K; ++k) {
        lo[k - 1] = up[k - 1] = make_rational(1, BigInt(static_cast<unsigned long>(k * (k + 1))));
    }
    Rational tail_lo = make_rational(1, BigInt(static_cast<unsigned long>(K + 1)));
    Rational tail_hi = tail_lo;

    for (std::uint64_t depth = 1; depth < n; ++depth) {
        std::vector<Rational> nlo(K, Rational(0)), nup(K, Rational(0));
        // Digits never decrease, so mass above K never returns to a tracked digit.
        for (std::uint64_t k = 1; k <= K; ++k) {
            const BigInt kb(static_cast<unsigned long>(k));
            for (std::uint64_t j = 1; j <= k; ++j) {
                const auto bounds = transition_bounds(BigInt(static_cast<unsigned long>(j)), kb);
                nlo[k - 1] += lo[j - 1] * bounds.lo;
                nup[k - 1] += up[j - 1] * bounds.hi;
            }
            if (nup[k - 1] > 1) nup[k - 1] = 1;
        }
        // Escape into digits > K: sum_{k>K} j/(k(k+2)) = (j/2)(1/(K+1) + 1/(K+2)),
        // sum_{k>K} (j+1)/(k(k+1)) = (j+1)/(K+1).
        const Rational lower_escape = Rational(1, 2) * (Rational(1, K + 1) + Rational(1, K + 2));
        for (std::uint64_t j = 1; j <= K; ++j) {
            tail_lo += lo[j - 1] * Rational(static_cast<unsigned long>(j)) * lower_escape;
            tail_hi += up[j - 1] * Rational(static_cast<unsigned long>(j + 1), static_cast<unsigned long>(K + 1));
        }
        lo = std::move(nlo);
        up = std::move(nup);
        Rational sum_lo = 0, sum_up = 0;
        for (std::uint64_t k = 0; k < K; ++k) {
            sum_lo += lo[k];
            sum_up += up[k];
        }
        // P(b > K) = 1 - P(b <= K).
        if (1 - sum_up > tail_lo) tail_lo = 1 - sum_up;
        if (1 - sum_lo < tail_hi) tail_hi = 1 - sum_lo;
        if (tail_lo < 0) tail_lo = 0;
        if (tail_hi > 1) tail_hi = 1;
    }

    MarginalTable table;
    table.n = n;
    table.cap = K;
    for (std::uint64_t k = 0; k < K; ++k) table.entries.push_back({lo[k], up[k]});
    table.tail = {tail_lo, tail_hi};
    return table;
}

DigitOneLaw prob_digit_one(std::uint64_t n)
{
    if (n < 1) throw std::invalid_argument("prob_digit_one needs n >= 1");
    BigInt q_prev = 1, q_curr = 1; // Q_0, Q_1 for the all-ones word
    for (std::uint64_t k = 2; k <= n; ++k) {
        BigInt next = q_curr + q_prev;
        q_prev = q_curr;
        q_curr = std::move(next);
    }
    DigitOneLaw law;
    law.q_n = q_curr;
    law.q_prev = q_prev;
    law.exact = make_rational(1, q_curr * (q_curr + q_prev));
    law.sandwich = {make_rational(1, 2 * q_curr * q_curr), make_rational(1, q_curr * q_curr)};
    return law;
}

Interval binet_continuant(std::uint64_t n, mpfr_prec_t prec)
{
    const Interval root5 = sqrt(Interval(5L, prec));
    const Interval two(2L, prec);
    const Interval phi = (Interval(1L, prec) + root5) / two;
    const Interval psi = (Interval(1L, prec) - root5) / two;
    Interval phi_pow(1L, prec), psi_pow(1L, prec);
    for (std::uint64_t i = 0; i <= n; ++i) {
        phi_pow *= phi;
        psi_pow *= psi;
    }
    return (phi_pow - psi_pow) / root5;
}

SeriesBoundsReport series_bounds_check(std::uint64_t j, const Rational& theta, std::uint64_t terms,
                                       mpfr_prec_t prec)
{
    if (j < 2) throw std::invalid_argument("series_bounds_check requires j >= 2");
    if (theta >= 1) throw std::domain_error("series diverges for theta >= 1");
    if (terms < 1) throw std::invalid_argument("series_bounds_check needs at least one term");

    const Interval th(theta, prec);
    const Interval one(1L, prec);
    const Interval one_minus = one - th;
    const BigInt jb(static_cast<unsigned long>(j));
    const Interval jv(jb, prec);
    // (k/j)^theta = k^theta * j^-theta
    const Interval j_neg_theta = interval_pow(jb, Rational(-theta), prec);

    Interval lower_sum(0L, prec), upper_sum(0L, prec);
    for (std::uint64_t k = j; k < j + terms; ++k) {
        const BigInt kb(static_cast<unsigned long>(k));
        const Interval ratio = interval_pow(kb, theta, prec) * j_neg_theta;
        const Interval kv(kb, prec);
        lower_sum += jv / (kv * (kv + Interval(2L, prec))) * ratio;
        upper_sum += (jv + one) / (kv * (kv + one)) * ratio;
    }

    // Tail k >= M: sum k^{theta-2} lies in [M^{theta-1}, (M-1)^{theta-1}] / (1-theta)
    // and k^theta/(k(k+c)) lies in [k^{theta-2} M/(M+c), k^{theta-2}].
    const std::uint64_t M = j + terms;
    const BigInt Mb(static_cast<unsigned long>(M));
    const Interval Mv(Mb, prec);
    const Interval int_lo = interval_pow(Mb, theta - 1, prec) / one_minus;
    const Interval int_hi = interval_pow(BigInt(static_cast<unsigned long>(M - 1)), theta - 1, prec) / one_minus;
    const Interval shrink2 = Mv / (Mv + Interval(2L, prec));
    const Interval shrink1 = Mv / (Mv + one);
    const Interval scale_lo = jv * j_neg_theta;           // j * j^-theta
    const Interval scale_up = (jv + one) * j_neg_theta;   // (j+1) * j^-theta
    lower_sum += Interval::from_bounds(scale_lo * shrink2 * int_lo, scale_lo * int_hi);
    upper_sum += Interval::from_bounds(scale_up * shrink1 * int_lo, scale_up * int_hi);

    SeriesBoundsReport report{false, false, lower_sum, Interval(0L, prec), upper_sum, Interval(0L, prec)};
    report.lower_bound = jv / (jv + Interval(2L, prec)) / one_minus;
    const Interval inv_j = one / jv;
    report.upper_bound = (one + inv_j) * pow(one - inv_j, th - one) / one_minus;
    report.lower_ok = report.lower_bound.certainly_leq(report.lower_series);
    report.upper_ok = report.upper_series.certainly_leq(report.upper_bound);
    return report;
}

} // namespace ecf
