#include "rodrigues/mpeval.hpp"

#include <cmath>
#include <limits>

namespace rodrigues {

MpPolyEvaluator::MpPolyEvaluator(const ExactPoly& p, mpfr_prec_t precision) : prec_(precision) {
    coeffs_.resize(p.size());
    abs_coeffs_.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        mpfr_init2(&coeffs_[i], prec_);
        mpfr_init2(&abs_coeffs_[i], prec_);
        mpfr_set_q(&coeffs_[i], p.coeffs()[i].get_mpq_t(), MPFR_RNDN);
        mpfr_abs(&abs_coeffs_[i], &coeffs_[i], MPFR_RNDU);
    }
    for (mpfr_ptr v : {x_, y_, pr_, pi_, dr_, di_, t1_, t2_, err_, az_, mod_p_, mod_d_}) mpfr_init2(v, prec_);
}

MpPolyEvaluator::~MpPolyEvaluator() {
    for (auto& c : coeffs_) mpfr_clear(&c);
    for (auto& c : abs_coeffs_) mpfr_clear(&c);
    for (mpfr_ptr v : {x_, y_, pr_, pi_, dr_, di_, t1_, t2_, err_, az_, mod_p_, mod_d_}) mpfr_clear(v);
}

void MpPolyEvaluator::horner(std::complex<double> z) {
    mpfr_set_d(x_, z.real(), MPFR_RNDN);
    mpfr_set_d(y_, z.imag(), MPFR_RNDN);
    mpfr_hypot(az_, x_, y_, MPFR_RNDU);
    for (mpfr_ptr v : {pr_, pi_, dr_, di_, err_}) mpfr_set_zero(v, 1);
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        // p' <- p' z + p
        mpfr_mul(t1_, dr_, x_, MPFR_RNDN);
        mpfr_fms(t1_, di_, y_, t1_, MPFR_RNDN);
        mpfr_neg(t1_, t1_, MPFR_RNDN);
        mpfr_mul(t2_, dr_, y_, MPFR_RNDN);
        mpfr_fma(t2_, di_, x_, t2_, MPFR_RNDN);
        mpfr_add(dr_, t1_, pr_, MPFR_RNDN);
        mpfr_add(di_, t2_, pi_, MPFR_RNDN);
        // p <- p z + a_k
        mpfr_mul(t1_, pr_, x_, MPFR_RNDN);
        mpfr_fms(t1_, pi_, y_, t1_, MPFR_RNDN);
        mpfr_neg(t1_, t1_, MPFR_RNDN);
        mpfr_mul(t2_, pr_, y_, MPFR_RNDN);
        mpfr_fma(t2_, pi_, x_, t2_, MPFR_RNDN);
        mpfr_add(pr_, t1_, &coeffs_[k], MPFR_RNDN);
        mpfr_set(pi_, t2_, MPFR_RNDN);
        // sum |a_k| |z|^k
        mpfr_mul(err_, err_, az_, MPFR_RNDU);
        mpfr_add(err_, err_, &abs_coeffs_[k], MPFR_RNDU);
    }
    // Complex Horner loses a few ulps per step; inflate generously.
    mpfr_mul_ui(err_, err_, 4 * coeffs_.size() + 4, MPFR_RNDU);
    mpfr_mul_2si(err_, err_, -static_cast<long>(prec_), MPFR_RNDU);
    mpfr_hypot(mod_p_, pr_, pi_, MPFR_RNDN);
    mpfr_hypot(mod_d_, dr_, di_, MPFR_RNDN);
}

MpPolyEvaluator::NewtonData MpPolyEvaluator::newton(std::complex<double> z) {
    horner(z);
    NewtonData out{};
    out.at_noise = mpfr_cmp(mod_p_, err_) <= 0;
    if (mpfr_zero_p(mod_d_)) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        out.correction = {nan, nan};
        out.bound = std::numeric_limits<double>::infinity();
        return out;
    }
    mpfr_max(t1_, mod_p_, err_, MPFR_RNDN);
    mpfr_div(t1_, t1_, mod_d_, MPFR_RNDU);
    out.bound = mpfr_get_d(t1_, MPFR_RNDU);
    // p/p' = p conj(p') / |p'|^2
    mpfr_sqr(az_, mod_d_, MPFR_RNDN);
    mpfr_mul(t1_, pr_, dr_, MPFR_RNDN);
    mpfr_fma(t1_, pi_, di_, t1_, MPFR_RNDN);
    mpfr_div(t1_, t1_, az_, MPFR_RNDN);
    mpfr_mul(t2_, pr_, di_, MPFR_RNDN);
    mpfr_fms(t2_, pi_, dr_, t2_, MPFR_RNDN);
    mpfr_div(t2_, t2_, az_, MPFR_RNDN);
    out.correction = {mpfr_get_d(t1_, MPFR_RNDN), mpfr_get_d(t2_, MPFR_RNDN)};
    return out;
}

MpPolyEvaluator::LogDerivative MpPolyEvaluator::log_derivative(std::complex<double> z) {
    horner(z);
    LogDerivative out{};
    mpfr_mul_2si(t1_, err_, 40, MPFR_RNDU);
    out.reliable = mpfr_cmp(mod_p_, t1_) > 0;
    if (mpfr_zero_p(mod_p_)) {
        double inf = std::numeric_limits<double>::infinity();
        out.value = {inf, inf};
        out.reliable = false;
        return out;
    }
    // p'/p = p' conj(p) / |p|^2
    mpfr_sqr(az_, mod_p_, MPFR_RNDN);
    mpfr_mul(t1_, dr_, pr_, MPFR_RNDN);
    mpfr_fma(t1_, di_, pi_, t1_, MPFR_RNDN);
    mpfr_div(t1_, t1_, az_, MPFR_RNDN);
    mpfr_mul(t2_, dr_, pi_, MPFR_RNDN);
    mpfr_fms(t2_, di_, pr_, t2_, MPFR_RNDN);
    mpfr_div(t2_, t2_, az_, MPFR_RNDN);
    out.value = {mpfr_get_d(t1_, MPFR_RNDN), mpfr_get_d(t2_, MPFR_RNDN)};
    return out;
}

std::complex<double> MpPolyEvaluator::value(std::complex<double> z) {
    horner(z);
    return {mpfr_get_d(pr_, MPFR_RNDN), mpfr_get_d(pi_, MPFR_RNDN)};
}

double MpPolyEvaluator::log_abs(std::complex<double> z, bool* reliable) {
    horner(z);
    mpfr_mul_2si(t1_, err_, 40, MPFR_RNDU);
    if (reliable) *reliable = mpfr_cmp(mod_p_, t1_) > 0;
    if (mpfr_zero_p(mod_p_)) return -std::numeric_limits<double>::infinity();
    mpfr_log(t1_, mod_p_, MPFR_RNDN);
    return mpfr_get_d(t1_, MPFR_RNDN);
}

} // namespace rodrigues
