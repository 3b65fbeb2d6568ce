#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rodrigues {

using BigInt = mpz_class;
using BigRational = mpq_class;

// Accepts "7", "-3/4", "+2" and finite decimals such as "0.25" or "-1.5e-3".
BigRational parse_rational(std::string_view text);
std::string to_string(const BigRational& q);
double to_double(const BigRational& q);

BigInt factorial(unsigned long n);
// top * (top-1) * ... * (top-count+1); empty product is 1.
BigInt falling_factorial(long top, unsigned long count);

// Exact Gaussian rational re + i*im.
struct ExactComplex {
    BigRational re;
    BigRational im;

    ExactComplex() = default;
    ExactComplex(BigRational r) : re(std::move(r)) {}
    ExactComplex(BigRational r, BigRational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    BigRational norm() const { return BigRational(re * re + im * im); }
    ExactComplex conj() const { return {re, BigRational(-im)}; }
    ExactComplex inverse() const;
    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

    ExactComplex& operator+=(const ExactComplex& o);
    ExactComplex& operator-=(const ExactComplex& o);
    ExactComplex& operator*=(const ExactComplex& o);

    friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
    friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
    friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) { return a * b.inverse(); }
    friend ExactComplex operator-(const ExactComplex& a) { return {BigRational(-a.re), BigRational(-a.im)}; }
    friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re == b.re && a.im == b.im; }
};

std::string to_string(const ExactComplex& c);

} // namespace rodrigues
