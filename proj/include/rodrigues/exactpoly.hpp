#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rodrigues/rational.hpp"

namespace rodrigues {

// Univariate polynomial with exact rational coefficients, lowest power first.
// The zero polynomial has no coefficients; otherwise the last one is nonzero.
class ExactPoly {
public:
    ExactPoly() = default;
    explicit ExactPoly(std::vector<BigRational> coeffs);
    ExactPoly(std::initializer_list<long> coeffs);

    static ExactPoly constant(const BigRational& c);
    static ExactPoly monomial(const BigRational& c, std::size_t power);
    // z - root
    static ExactPoly linear_factor(const BigRational& root);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<BigRational>& coeffs() const { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }
    // Coefficient of z^k, zero past the degree.
    BigRational coeff(std::size_t k) const;
    const BigRational& leading() const { return coeffs_.back(); }

    ExactPoly derivative(unsigned k = 1) const;
    BigRational operator()(const BigRational& z) const;
    ExactComplex operator()(const ExactComplex& z) const;
    // Coefficients of p(center + t) as a polynomial in t.
    std::vector<ExactComplex> taylor_shift(const ExactComplex& center) const;
    ExactPoly monic() const;
    // Multiply through by the lcm of the denominators and divide by the content,
    // giving a primitive integer polynomial with positive leading coefficient.
    ExactPoly primitive() const;

    ExactPoly& operator+=(const ExactPoly& o);
    ExactPoly& operator-=(const ExactPoly& o);
    ExactPoly& operator*=(const BigRational& c);

    friend ExactPoly operator+(ExactPoly a, const ExactPoly& b) { return a += b; }
    friend ExactPoly operator-(ExactPoly a, const ExactPoly& b) { return a -= b; }
    friend ExactPoly operator-(const ExactPoly& a);
    friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator*(ExactPoly a, const BigRational& c) { return a *= c; }
    friend ExactPoly operator*(const BigRational& c, ExactPoly a) { return a *= c; }
    friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim();
    std::vector<BigRational> coeffs_;
};

ExactPoly poly_pow(const ExactPoly& p, unsigned n);
ExactPoly derivative(const ExactPoly& p, unsigned k);
// Quotient and remainder; throws std::domain_error on division by zero.
std::pair<ExactPoly, ExactPoly> divmod(const ExactPoly& a, const ExactPoly& b);
// Monic gcd; gcd(0, 0) = 0.
ExactPoly gcd(const ExactPoly& a, const ExactPoly& b);
// p / gcd(p, p'), made monic.
ExactPoly squarefree_part(const ExactPoly& p);

// d^m/dz^m (P^n). The result is the zero polynomial when m > n deg P.
ExactPoly rodrigues_descendant(const ExactPoly& p, unsigned n, unsigned m);

// Text forms: "[-1, 0, 1]" (low to high) or an expression such as "z^2 - 1",
// "(z-1)*(2z+3/4)", "z^3 - 1/2*z". Variable may be written z or x.
ExactPoly parse_poly(std::string_view text);
std::string to_expression(const ExactPoly& p);
// {"coeffs": ["-1", "0", "1"]}
std::string to_json(const ExactPoly& p);

// Reduced quotient num/den with monic denominator.
class ExactRatFun {
public:
    ExactRatFun(ExactPoly num, ExactPoly den = ExactPoly{1});

    const ExactPoly& num() const { return num_; }
    const ExactPoly& den() const { return den_; }

    ExactRatFun derivative() const;

    friend ExactRatFun operator*(const ExactRatFun& a, const ExactRatFun& b);
    friend ExactRatFun operator+(const ExactRatFun& a, const ExactRatFun& b);
    friend bool operator==(const ExactRatFun& a, const ExactRatFun& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void normalize();
    ExactPoly num_;
    ExactPoly den_;
};

ExactRatFun ratfun_pow(const ExactRatFun& f, unsigned n);
ExactRatFun ratfun_descendant(const ExactRatFun& f, unsigned n, unsigned m);

} // namespace rodrigues
