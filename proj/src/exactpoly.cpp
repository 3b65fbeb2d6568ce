#include "rodrigues/exactpoly.hpp"

#include <stdexcept>

namespace rodrigues {

namespace {

// Common denominator of the coefficients.
BigInt denominator_lcm(const std::vector<BigRational>& c) {
    BigInt l = 1;
    for (const auto& q : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    return l;
}

std::vector<BigInt> scaled_integers(const std::vector<BigRational>& c, const BigInt& l) {
    std::vector<BigInt> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        mpz_divexact(out[i].get_mpz_t(), l.get_mpz_t(), c[i].get_den_mpz_t());
        out[i] *= c[i].get_num();
    }
    return out;
}

} // namespace

ExactPoly::ExactPoly(std::vector<BigRational> coeffs) : coeffs_(std::move(coeffs)) {
    for (auto& q : coeffs_) q.canonicalize();
    trim();
}

ExactPoly::ExactPoly(std::initializer_list<long> coeffs) {
    coeffs_.reserve(coeffs.size());
    for (long c : coeffs) coeffs_.emplace_back(c);
    trim();
}

ExactPoly ExactPoly::constant(const BigRational& c) { return ExactPoly(std::vector<BigRational>{c}); }

ExactPoly ExactPoly::monomial(const BigRational& c, std::size_t power) {
    std::vector<BigRational> v(power + 1);
    v[power] = c;
    return ExactPoly(std::move(v));
}

ExactPoly ExactPoly::linear_factor(const BigRational& root) {
    return ExactPoly(std::vector<BigRational>{BigRational(-root), BigRational(1)});
}

void ExactPoly::trim() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

BigRational ExactPoly::coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : BigRational(0); }

ExactPoly ExactPoly::derivative(unsigned k) const {
    if (k == 0) return *this;
    if (coeffs_.size() <= k) return {};
    std::vector<BigRational> out(coeffs_.size() - k);
    for (std::size_t i = k; i < coeffs_.size(); ++i)
        out[i - k] = coeffs_[i] * BigRational(falling_factorial(static_cast<long>(i), k));
    return ExactPoly(std::move(out));
}

BigRational ExactPoly::operator()(const BigRational& z) const {
    BigRational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

ExactComplex ExactPoly::operator()(const ExactComplex& z) const {
    ExactComplex acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= z;
        acc.re += *it;
    }
    return acc;
}

std::vector<ExactComplex> ExactPoly::taylor_shift(const ExactComplex& center) const {
    std::vector<ExactComplex> c(coeffs_.begin(), coeffs_.end());
    const std::size_t n = c.size();
    // Repeated synthetic division by (z - center).
    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t i = n - 1; i > k; --i) c[i - 1] += c[i] * center;
    return c;
}

ExactPoly ExactPoly::monic() const {
    if (is_zero()) return {};
    ExactPoly r = *this;
    BigRational inv = 1 / leading();
    return r *= inv;
}

ExactPoly ExactPoly::primitive() const {
    if (is_zero()) return {};
    BigInt l = denominator_lcm(coeffs_);
    std::vector<BigInt> ints = scaled_integers(coeffs_, l);
    BigInt g = 0;
    for (const auto& v : ints) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (sgn(ints.back()) < 0) g = -g;
    std::vector<BigRational> out(ints.size());
    for (std::size_t i = 0; i < ints.size(); ++i) {
        mpz_divexact(ints[i].get_mpz_t(), ints[i].get_mpz_t(), g.get_mpz_t());
        out[i] = BigRational(ints[i]);
    }
    return ExactPoly(std::move(out));
}

ExactPoly& ExactPoly::operator+=(const ExactPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
}

ExactPoly& ExactPoly::operator-=(const ExactPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
}

ExactPoly& ExactPoly::operator*=(const BigRational& c) {
    if (sgn(c) == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& q : coeffs_) q *= c;
    return *this;
}

ExactPoly operator-(const ExactPoly& a) {
    ExactPoly r = a;
    return r *= BigRational(-1);
}

// Schoolbook product on integer images; rationals only at the end.
ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    BigInt la = denominator_lcm(a.coeffs_), lb = denominator_lcm(b.coeffs_);
    std::vector<BigInt> ia = scaled_integers(a.coeffs_, la), ib = scaled_integers(b.coeffs_, lb);
    std::vector<BigInt> prod(ia.size() + ib.size() - 1);
    for (std::size_t i = 0; i < ia.size(); ++i) {
        if (sgn(ia[i]) == 0) continue;
        for (std::size_t j = 0; j < ib.size(); ++j)
            mpz_addmul(prod[i + j].get_mpz_t(), ia[i].get_mpz_t(), ib[j].get_mpz_t());
    }
    BigInt den = la * lb;
    std::vector<BigRational> out(prod.size());
    for (std::size_t k = 0; k < prod.size(); ++k) out[k] = BigRational(prod[k], den);
    return ExactPoly(std::move(out));
}

ExactPoly poly_pow(const ExactPoly& p, unsigned n) {
    ExactPoly result{1};
    ExactPoly base = p;
    while (n > 0) {
        if (n & 1u) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

ExactPoly derivative(const ExactPoly& p, unsigned k) { return p.derivative(k); }

std::pair<ExactPoly, ExactPoly> divmod(const ExactPoly& a, const ExactPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {ExactPoly{}, a};
    std::vector<BigRational> rem = a.coeffs();
    const std::size_t db = static_cast<std::size_t>(b.degree());
    std::vector<BigRational> quo(rem.size() - db);
    BigRational inv_lead = 1 / b.leading();
    for (std::size_t k = quo.size(); k-- > 0;) {
        BigRational q = rem[k + db] * inv_lead;
        if (sgn(q) != 0) {
            for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= q * b.coeffs()[j];
        }
        quo[k] = std::move(q);
    }
    rem.resize(db);
    return {ExactPoly(std::move(quo)), ExactPoly(std::move(rem))};
}

ExactPoly gcd(const ExactPoly& a, const ExactPoly& b) {
    ExactPoly x = a.primitive(), y = b.primitive();
    while (!y.is_zero()) {
        ExactPoly r = divmod(x, y).second.primitive();
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

ExactPoly squarefree_part(const ExactPoly& p) {
    if (p.degree() < 1) return p.monic();
    return divmod(p, gcd(p, p.derivative())).first.monic();
}

ExactPoly rodrigues_descendant(const ExactPoly& p, unsigned n, unsigned m) {
    return poly_pow(p, n).derivative(m);
}

std::string to_expression(const ExactPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int k = p.degree(); k >= 0; --k) {
        const BigRational& c = p.coeffs()[static_cast<std::size_t>(k)];
        if (sgn(c) == 0) continue;
        BigRational mag = abs(c);
        if (out.empty())
            out += sgn(c) < 0 ? "-" : "";
        else
            out += sgn(c) < 0 ? " - " : " + ";
        bool unit = mag == 1;
        if (!unit || k == 0) out += to_string(mag);
        if (k > 0) {
            if (!unit) out += "*";
            out += "z";
            if (k > 1) out += "^" + std::to_string(k);
        }
    }
    return out;
}

std::string to_json(const ExactPoly& p) {
    std::string out = "{\"coeffs\": [";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ", ";
        out += "\"" + to_string(p.coeffs()[i]) + "\"";
    }
    return out + "]}";
}

ExactRatFun::ExactRatFun(ExactPoly num, ExactPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    normalize();
}

void ExactRatFun::normalize() {
    if (num_.is_zero()) {
        den_ = ExactPoly{1};
        return;
    }
    ExactPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = divmod(num_, g).first;
        den_ = divmod(den_, g).first;
    }
    BigRational lead = den_.leading();
    if (lead != 1) {
        BigRational inv = 1 / lead;
        num_ *= inv;
        den_ *= inv;
    }
}

ExactRatFun ExactRatFun::derivative() const {
    return ExactRatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

ExactRatFun operator*(const ExactRatFun& a, const ExactRatFun& b) {
    return ExactRatFun(a.num_ * b.num_, a.den_ * b.den_);
}

ExactRatFun operator+(const ExactRatFun& a, const ExactRatFun& b) {
    return ExactRatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

ExactRatFun ratfun_pow(const ExactRatFun& f, unsigned n) {
    return ExactRatFun(poly_pow(f.num(), n), poly_pow(f.den(), n));
}

ExactRatFun ratfun_descendant(const ExactRatFun& f, unsigned n, unsigned m) {
    ExactRatFun g = ratfun_pow(f, n);
    for (unsigned k = 0; k < m; ++k) g = g.derivative();
    return g;
}

} // namespace rodrigues
