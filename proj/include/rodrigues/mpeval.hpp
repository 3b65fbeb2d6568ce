#pragma once

#include <complex>
#include <vector>

#include <mpfr.h>

#include "rodrigues/exactpoly.hpp"

namespace rodrigues {

// Evaluates an exact polynomial at complex points in MPFR arithmetic of a
// fixed precision, together with a running bound on the rounding error.
// One instance is not safe to share between threads; make one per worker.
class MpPolyEvaluator {
public:
    MpPolyEvaluator(const ExactPoly& p, mpfr_prec_t precision);
    ~MpPolyEvaluator();
    MpPolyEvaluator(const MpPolyEvaluator&) = delete;
    MpPolyEvaluator& operator=(const MpPolyEvaluator&) = delete;

    struct NewtonData {
        std::complex<double> correction;  // p/p'
        double bound;                     // max(|p|, noise) / |p'|
        bool at_noise;                    // |p| is below the rounding error bound
    };

    NewtonData newton(std::complex<double> z);

    struct LogDerivative {
        std::complex<double> value;  // p'/p
        bool reliable;               // |p| exceeds the rounding bound by a wide margin
    };
    LogDerivative log_derivative(std::complex<double> z);

    std::complex<double> value(std::complex<double> z);

    // log|p(z)|, or -inf when p(z) is indistinguishable from zero.
    double log_abs(std::complex<double> z, bool* reliable = nullptr);

    mpfr_prec_t precision() const { return prec_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

private:
    // Leaves p in pr_/pi_, p' in dr_/di_, error estimate in err_.
    void horner(std::complex<double> z);

    mpfr_prec_t prec_;
    std::vector<__mpfr_struct> coeffs_;
    std::vector<__mpfr_struct> abs_coeffs_;
    mpfr_t x_, y_, pr_, pi_, dr_, di_, t1_, t2_, err_, az_, mod_p_, mod_d_;
};

} // namespace rodrigues
