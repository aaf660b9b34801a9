#include "ecf/expansion.hpp"

#include <stdexcept>

namespace ecf {

bool is_admissible(std::span<const BigInt> digits)
{
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < 1) return false;
        if (i > 0 && digits[i] < digits[i - 1]) return false;
    }
    return true;
}

DigitWord::DigitWord(std::vector<BigInt> digits) : digits_(std::move(digits))
{
    if (!is_admissible(digits_)) throw std::invalid_argument("digit word is not admissible");
}

DigitWord::DigitWord(std::initializer_list<unsigned long> digits)
{
    digits_.reserve(digits.size());
    for (unsigned long d : digits) digits_.emplace_back(d);
    if (!is_admissible(digits_)) throw std::invalid_argument("digit word is not admissible");
}

void DigitWord::push_back(BigInt digit)
{
    if (digit < 1 || (!digits_.empty() && digit < digits_.back()))
        throw std::invalid_argument("extension breaks admissibility");
    digits_.push_back(std::move(digit));
}

DigitWord DigitWord::extended(BigInt digit) const
{
    DigitWord out = *this;
    out.push_back(std::move(digit));
    return out;
}

DigitWord DigitWord::prefix(std::size_t length) const
{
    if (length > digits_.size()) throw std::out_of_range("prefix longer than word");
    DigitWord out;
    out.digits_.assign(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(length));
    return out;
}

EcfStep ecf_step(const Rational& x)
{
    if (x <= 0 || x > 1) throw std::domain_error("ecf_step requires 0 < x <= 1");
    // 1/x = den/num
    BigInt digit = x.get_den() / x.get_num();
    BigInt rem = x.get_den() - digit * x.get_num();
    return {digit, make_rational(rem, digit * x.get_num())};
}

EcfCursor::EcfCursor(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den))
{
    if (num_ <= 0 || num_ > den_) throw std::domain_error("EcfCursor requires 0 < x <= 1");
}

EcfCursor::EcfCursor(const Rational& x) : EcfCursor(x.get_num(), x.get_den()) {}

const BigInt& EcfCursor::next()
{
    // x = num/den; digit = floor(den/num); T_E x = (den - digit*num) / (digit*num).
    mpz_fdiv_qr(digit_.get_mpz_t(), rem_.get_mpz_t(), den_.get_mpz_t(), num_.get_mpz_t());
    mpz_mul(den_.get_mpz_t(), num_.get_mpz_t(), digit_.get_mpz_t());
    mpz_swap(num_.get_mpz_t(), rem_.get_mpz_t());
    return digit_;
}

CertifiedExpansion expand_rational(const Rational& x, std::size_t max_digits)
{
    if (max_digits < 1) throw std::invalid_argument("max_digits must be at least 1");
    if (x <= 0 || x > 1) throw std::domain_error("expand_rational requires 0 < x <= 1");
    EcfCursor cursor(x);
    std::vector<BigInt> digits;
    while (!cursor.done() && digits.size() < max_digits) digits.push_back(cursor.next());
    CertifiedExpansion out;
    out.truncated = !cursor.done();
    out.certified_count = digits.size();
    out.digits = DigitWord(std::move(digits));
    return out;
}

CertifiedExpansion expand_interval(const Rational& lo, const Rational& hi, std::size_t max_digits)
{
    if (max_digits < 1) throw std::invalid_argument("max_digits must be at least 1");
    if (lo <= 0 || hi > 1 || lo > hi) throw std::domain_error("expand_interval requires 0 < lo <= hi <= 1");
    if (lo == hi) return expand_rational(lo, max_digits);
    EcfCursor a(lo);
    EcfCursor b(hi);
    std::vector<BigInt> digits;
    bool agree = true;
    while (digits.size() < max_digits && !a.done() && !b.done()) {
        const BigInt& da = a.next();
        const BigInt& db = b.next();
        if (da != db) {
            agree = false;
            break;
        }
        digits.push_back(da);
    }
    CertifiedExpansion out;
    out.truncated = agree && digits.size() == max_digits && !a.done() && !b.done();
    out.certified_count = digits.size();
    out.digits = DigitWord(std::move(digits));
    return out;
}

Rational reconstruct(const DigitWord& word)
{
    if (word.empty()) throw std::invalid_argument("reconstruct of an empty word");
    // r <- b_n; r <- b_k + b_k / r for k = n-1..1; value = 1/r.
    Rational r(word.back());
    for (std::size_t k = word.size() - 1; k-- > 0;) {
        Rational b(word[k]);
        r = b + b / r;
    }
    return 1 / r;
}

std::vector<BigInt> continuants(const DigitWord& word)
{
    std::vector<BigInt> q;
    q.reserve(word.size() + 1);
    q.emplace_back(1);
    BigInt prev_prev = 0; // Q_{-1}
    BigInt prev_digit = 0; // b_0 multiplies Q_{-1} = 0
    for (std::size_t k = 0; k < word.size(); ++k) {
        BigInt next = word[k] * q.back() + prev_digit * prev_prev;
        prev_prev = q.back();
        prev_digit = word[k];
        q.push_back(std::move(next));
    }
    return q;
}

std::pair<Rational, Rational> cylinder_endpoints(const DigitWord& word)
{
    if (word.empty()) return {Rational(0), Rational(1)};
    Rational a = reconstruct(word);
    std::vector<BigInt> bumped(word.begin(), word.end());
    bumped.back() += 1;
    Rational b = reconstruct(DigitWord(std::move(bumped)));
    if (b < a) std::swap(a, b);
    return {a, b};
}

} // namespace ecf
