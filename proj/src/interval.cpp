#include "ecf/interval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ecf {

namespace {

std::atomic<mpfr_prec_t> g_default_precision{Interval::kDefaultPrecision};

std::string format_mpfr(mpfr_srcptr value, int digits, mpfr_rnd_t rnd)
{
    if (mpfr_nan_p(value)) return "nan";
    if (mpfr_inf_p(value)) return mpfr_sgn(value) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(value)) return "0";
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*R*g", digits, rnd, value);
    return std::string(buf.data());
}

} // namespace

mpfr_prec_t Interval::default_precision() noexcept { return g_default_precision.load(); }

void Interval::set_default_precision(mpfr_prec_t bits)
{
    if (bits < MPFR_PREC_MIN || bits > 1 << 20) throw std::invalid_argument("unsupported precision");
    g_default_precision.store(bits);
}

Interval::Interval(Uninit, mpfr_prec_t prec) : prec_(prec)
{
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
}

Interval::Interval() : Interval(0L) {}

Interval::Interval(long value, mpfr_prec_t prec) : Interval(Uninit{}, prec)
{
    mpfr_set_si(lo_, value, MPFR_RNDD);
    mpfr_set_si(hi_, value, MPFR_RNDU);
}

Interval::Interval(const BigInt& value, mpfr_prec_t prec) : Interval(Uninit{}, prec)
{
    mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const Rational& value, mpfr_prec_t prec) : Interval(Uninit{}, prec)
{
    mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Rational& lo, const Rational& hi, mpfr_prec_t prec) : Interval(Uninit{}, prec)
{
    if (lo > hi) throw std::invalid_argument("interval with lo > hi");
    mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Interval Interval::from_double(double value, mpfr_prec_t prec)
{
    Interval out(Uninit{}, prec);
    mpfr_set_d(out.lo_, value, MPFR_RNDD);
    mpfr_set_d(out.hi_, value, MPFR_RNDU);
    return out;
}

Interval Interval::from_bounds(const Interval& lo_source, const Interval& hi_source)
{
    if (mpfr_greater_p(lo_source.lo_, hi_source.hi_)) throw std::invalid_argument("from_bounds with lo > hi");
    Interval out(Uninit{}, std::max(lo_source.prec_, hi_source.prec_));
    mpfr_set(out.lo_, lo_source.lo_, MPFR_RNDD);
    mpfr_set(out.hi_, hi_source.hi_, MPFR_RNDU);
    return out;
}

Interval Interval::lower_point() const
{
    Interval out(Uninit{}, prec_);
    mpfr_set(out.lo_, lo_, MPFR_RNDD);
    mpfr_set(out.hi_, lo_, MPFR_RNDU);
    return out;
}

Interval Interval::upper_point() const
{
    Interval out(Uninit{}, prec_);
    mpfr_set(out.lo_, hi_, MPFR_RNDD);
    mpfr_set(out.hi_, hi_, MPFR_RNDU);
    return out;
}

Interval::Interval(const Interval& other) : Interval(Uninit{}, other.prec_)
{
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(Uninit{}, other.prec_)
{
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other)
{
    if (this != &other) {
        prec_ = other.prec_;
        mpfr_set_prec(lo_, prec_);
        mpfr_set_prec(hi_, prec_);
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept
{
    std::swap(prec_, other.prec_);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
    return *this;
}

Interval::~Interval()
{
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

double Interval::lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid() const
{
    mpfr_t m;
    mpfr_init2(m, prec_ + 1);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    double out = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return out;
}

double Interval::width() const
{
    mpfr_t w;
    mpfr_init2(w, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double out = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return out;
}

Rational Interval::lower_rational() const
{
    Rational r;
    mpfr_get_q(r.get_mpq_t(), lo_);
    return r;
}

Rational Interval::upper_rational() const
{
    Rational r;
    mpfr_get_q(r.get_mpq_t(), hi_);
    return r;
}

bool Interval::contains(const Rational& value) const
{
    return mpfr_cmp_q(lo_, value.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, value.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval& other) const
{
    return mpfr_lessequal_p(lo_, other.lo_) && mpfr_greaterequal_p(hi_, other.hi_);
}

bool Interval::overlaps(const Interval& other) const
{
    return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

bool Interval::certainly_less(const Interval& other) const { return mpfr_less_p(hi_, other.lo_); }
bool Interval::certainly_leq(const Interval& other) const { return mpfr_lessequal_p(hi_, other.lo_); }
bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::certainly_negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

Interval Interval::operator-() const
{
    Interval out(Uninit{}, prec_);
    mpfr_neg(out.lo_, hi_, MPFR_RNDD);
    mpfr_neg(out.hi_, lo_, MPFR_RNDU);
    return out;
}

Interval& Interval::operator+=(const Interval& rhs)
{
    if (rhs.prec_ > prec_) {
        prec_ = rhs.prec_;
        mpfr_prec_round(lo_, prec_, MPFR_RNDD);
        mpfr_prec_round(hi_, prec_, MPFR_RNDU);
    }
    mpfr_add(lo_, lo_, rhs.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, rhs.hi_, MPFR_RNDU);
    return *this;
}

Interval& Interval::operator-=(const Interval& rhs)
{
    if (rhs.prec_ > prec_) {
        prec_ = rhs.prec_;
        mpfr_prec_round(lo_, prec_, MPFR_RNDD);
        mpfr_prec_round(hi_, prec_, MPFR_RNDU);
    }
    // rhs may alias *this; compute into temporaries first.
    Interval out(Uninit{}, prec_);
    mpfr_sub(out.lo_, lo_, rhs.hi_, MPFR_RNDD);
    mpfr_sub(out.hi_, hi_, rhs.lo_, MPFR_RNDU);
    *this = std::move(out);
    return *this;
}

Interval& Interval::operator*=(const Interval& rhs)
{
    const mpfr_prec_t prec = std::max(prec_, rhs.prec_);
    Interval out(Uninit{}, prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    const __mpfr_struct* as[2] = {lo_, hi_};
    const __mpfr_struct* bs[2] = {rhs.lo_, rhs.hi_};
    bool first = true;
    for (auto* a : as) {
        for (auto* b : bs) {
            mpfr_mul(t, a, b, MPFR_RNDD);
            if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
            mpfr_mul(t, a, b, MPFR_RNDU);
            if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
            first = false;
        }
    }
    mpfr_clear(t);
    *this = std::move(out);
    return *this;
}

Interval& Interval::operator/=(const Interval& rhs)
{
    if (rhs.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
    const mpfr_prec_t prec = std::max(prec_, rhs.prec_);
    Interval out(Uninit{}, prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    const __mpfr_struct* as[2] = {lo_, hi_};
    const __mpfr_struct* bs[2] = {rhs.lo_, rhs.hi_};
    bool first = true;
    for (auto* a : as) {
        for (auto* b : bs) {
            mpfr_div(t, a, b, MPFR_RNDD);
            if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
            mpfr_div(t, a, b, MPFR_RNDU);
            if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
            first = false;
        }
    }
    mpfr_clear(t);
    *this = std::move(out);
    return *this;
}

Interval hull(const Interval& a, const Interval& b)
{
    Interval out(Interval::Uninit{}, std::max(a.prec_, b.prec_));
    mpfr_min(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return out;
}

std::optional<Interval> intersect(const Interval& a, const Interval& b)
{
    if (!a.overlaps(b)) return std::nullopt;
    Interval out(Interval::Uninit{}, std::max(a.prec_, b.prec_));
    mpfr_max(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return out;
}

Interval min(const Interval& a, const Interval& b)
{
    Interval out(Interval::Uninit{}, std::max(a.prec_, b.prec_));
    mpfr_min(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return out;
}

Interval max(const Interval& a, const Interval& b)
{
    Interval out(Interval::Uninit{}, std::max(a.prec_, b.prec_));
    mpfr_max(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return out;
}

Interval sqrt(const Interval& x)
{
    if (mpfr_sgn(x.lo_) < 0) throw std::domain_error("sqrt of an interval with negative part");
    Interval out(Interval::Uninit{}, x.prec_);
    mpfr_sqrt(out.lo_, x.lo_, MPFR_RNDD);
    mpfr_sqrt(out.hi_, x.hi_, MPFR_RNDU);
    return out;
}

Interval log(const Interval& x)
{
    if (mpfr_sgn(x.lo_) <= 0) throw std::domain_error("log of an interval that is not strictly positive");
    Interval out(Interval::Uninit{}, x.prec_);
    mpfr_log(out.lo_, x.lo_, MPFR_RNDD);
    mpfr_log(out.hi_, x.hi_, MPFR_RNDU);
    return out;
}

Interval exp(const Interval& x)
{
    Interval out(Interval::Uninit{}, x.prec_);
    mpfr_exp(out.lo_, x.lo_, MPFR_RNDD);
    mpfr_exp(out.hi_, x.hi_, MPFR_RNDU);
    return out;
}

Interval abs(const Interval& x)
{
    if (mpfr_sgn(x.lo_) >= 0) return x;
    if (mpfr_sgn(x.hi_) <= 0) return -x;
    Interval out(Interval::Uninit{}, x.prec_);
    mpfr_set_zero(out.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, x.prec_);
    mpfr_neg(t, x.lo_, MPFR_RNDU);
    mpfr_max(out.hi_, t, x.hi_, MPFR_RNDU);
    mpfr_clear(t);
    return out;
}

std::string Interval::to_decimal(int digits) const
{
    mpfr_t m;
    mpfr_init2(m, prec_ + 1);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    std::string out = format_mpfr(m, digits, MPFR_RNDN);
    mpfr_clear(m);
    return out;
}

std::string Interval::lower_decimal(int digits) const { return format_mpfr(lo_, digits, MPFR_RNDD); }
std::string Interval::upper_decimal(int digits) const { return format_mpfr(hi_, digits, MPFR_RNDU); }

Interval interval_pow(const BigInt& base, const Rational& exponent, mpfr_prec_t prec)
{
    if (base < 1) throw std::domain_error("interval_pow requires base >= 1");
    if (base == 1 || exponent == 0) return Interval(1L, prec);
    if (exponent.get_den() == 1 && exponent.get_num().fits_slong_p()) {
        // Integer exponent: exact big-integer power when positive.
        long e = exponent.get_num().get_si();
        if (e > 0 && e < 4096) {
            BigInt p;
            mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
            return Interval(p, prec);
        }
        if (e < 0 && e > -4096) {
            BigInt p;
            mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(-e));
            return Interval(Rational(BigInt(1), p), prec);
        }
    }
    // Guard bits absorb the error amplification of exp(theta * log(base)).
    const mpfr_prec_t work = prec + 32;
    Interval result = exp(Interval(exponent, work) * log(Interval(base, work)));
    return result;
}

Interval interval_pow(const BigInt& base, const Interval& exponent)
{
    if (base < 1) throw std::domain_error("interval_pow requires base >= 1");
    if (base == 1) return Interval(1L, exponent.precision());
    return exp(exponent * log(Interval(base, exponent.precision() + 32)));
}

Interval pow(const Interval& x, const Interval& e) { return exp(e * log(x)); }

Interval interval_log(const Rational& x, mpfr_prec_t prec)
{
    if (x <= 0) throw std::domain_error("log of a nonpositive rational");
    if (x == 1) return Interval(0L, prec);
    return log(Interval(x, prec));
}

Interval interval_log(const Interval& x) { return log(x); }

const Interval& ExtendedReal::value() const
{
    if (!value_) throw std::logic_error("ExtendedReal is +inf");
    return *value_;
}

bool ExtendedReal::overlaps(const ExtendedReal& other) const
{
    if (is_infinite() || other.is_infinite()) return is_infinite() && other.is_infinite();
    return value_->overlaps(*other.value_);
}

bool ExtendedReal::certainly_greater(const ExtendedReal& other) const
{
    if (is_infinite()) return other.is_finite();
    if (other.is_infinite()) return false;
    return other.value_->certainly_less(*value_);
}

std::string ExtendedReal::to_string(int digits) const
{
    return is_infinite() ? std::string("+inf") : value_->to_decimal(digits);
}

} // namespace ecf
