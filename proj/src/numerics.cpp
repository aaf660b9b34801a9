#include "ecf/numerics.hpp"

#include <cmath>
#include <limits>

namespace ecf {

BudgetExceeded::BudgetExceeded(const BigInt& count, std::uint64_t budget)
    : std::runtime_error("enumeration of " + count.get_str() + " words exceeds budget " +
                         std::to_string(budget)),
      count_(count), budget_(budget)
{
}

namespace {

BigInt parse_integer(std::string_view text)
{
    if (text.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size()) throw std::invalid_argument("malformed integer: " + std::string(text));
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("malformed integer: " + std::string(text));
    }
    std::string digits(text[0] == '+' ? text.substr(1) : text);
    return BigInt(digits, 10);
}

} // namespace

Rational parse_rational(std::string_view text)
{
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(text.substr(0, slash));
        BigInt den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
        return make_rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole.front() == '-';
        if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
        if (whole.empty() && frac.empty()) throw std::invalid_argument("malformed number: " + std::string(text));
        BigInt w = whole.empty() ? BigInt(0) : parse_integer(whole);
        BigInt f = frac.empty() ? BigInt(0) : parse_integer(frac);
        if (!frac.empty() && (frac.front() == '-' || frac.front() == '+'))
            throw std::invalid_argument("malformed number: " + std::string(text));
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        Rational r = make_rational(w * scale + f, scale);
        return negative ? Rational(-r) : r;
    }
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& value)
{
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

Rational make_rational(const BigInt& num, const BigInt& den)
{
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational rational_from_double(double value)
{
    if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
    Rational r;
    mpq_set_d(r.get_mpq_t(), value);
    return r;
}

BigInt binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n) return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

double log_double(const BigInt& value)
{
    if (value <= 0) throw std::domain_error("log of nonpositive integer");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, value.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

} // namespace ecf
