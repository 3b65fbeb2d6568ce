#include "rodrigues/rational.hpp"

#include <cctype>

#include "rodrigues/errors.hpp"

namespace rodrigues {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

BigRational parse_decimal(std::string_view s, std::string_view original) {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        bool neg = false;
        if (!exp_part.empty() && (exp_part[0] == '+' || exp_part[0] == '-')) {
            neg = exp_part[0] == '-';
            exp_part.remove_prefix(1);
        }
        if (!all_digits(exp_part) || exp_part.size() > 6)
            throw ParseError("bad exponent in number '" + std::string(original) + "'");
        exponent = std::stol(std::string(exp_part));
        if (neg) exponent = -exponent;
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || ip.size() + fp.size() == 0)
            throw ParseError("bad number '" + std::string(original) + "'");
        digits = std::string(ip) + std::string(fp);
        exponent -= static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) throw ParseError("bad number '" + std::string(original) + "'");
        digits = std::string(s);
    }
    BigRational q{BigInt(digits, 10)};
    BigInt ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent >= 0)
        q *= ten_pow;
    else
        q /= ten_pow;
    q.canonicalize();
    return q;
}

} // namespace

BigRational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s = trim(s.substr(1));
    }
    if (s.empty()) throw ParseError("empty number");
    BigRational q;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = trim(s.substr(0, slash)), den = trim(s.substr(slash + 1));
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("bad rational '" + std::string(text) + "'");
        BigInt d(std::string{den}, 10);
        if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        q = BigRational(BigInt(std::string{num}, 10), d);
        q.canonicalize();
    } else {
        q = parse_decimal(s, text);
    }
    if (negative) q = -q;
    return q;
}

std::string to_string(const BigRational& q) { return q.get_str(); }

double to_double(const BigRational& q) { return q.get_d(); }

BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

BigInt falling_factorial(long top, unsigned long count) {
    BigInt r = 1;
    for (unsigned long i = 0; i < count; ++i) r *= top - static_cast<long>(i);
    return r;
}

ExactComplex ExactComplex::inverse() const {
    BigRational n = norm();
    if (sgn(n) == 0) throw std::domain_error("inverse of zero");
    return {BigRational(re / n), BigRational(-im / n)};
}

ExactComplex& ExactComplex::operator+=(const ExactComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
}

ExactComplex& ExactComplex::operator-=(const ExactComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

ExactComplex& ExactComplex::operator*=(const ExactComplex& o) {
    if (sgn(im) == 0 && sgn(o.im) == 0) {
        re *= o.re;
        return *this;
    }
    BigRational r = re * o.re - im * o.im;
    BigRational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

std::string to_string(const ExactComplex& c) {
    if (sgn(c.im) == 0) return to_string(c.re);
    return to_string(c.re) + (sgn(c.im) < 0 ? "-" : "+") + to_string(BigRational(abs(c.im))) + "i";
}

} // namespace rodrigues
