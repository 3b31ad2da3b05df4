#pragma once

#include <complex>

namespace jacobi {

using cplx = std::complex<double>;

struct PrecisionConfig {
    double series_tol = 1e-16;
    int max_terms = 200000;
    // Argument where script-J switches from the ascending series to the
    // Hankel asymptotic expansion.
    double asymptotic_crossover = 18.0;

    void validate() const;
};

const PrecisionConfig& default_precision();

namespace specfun {

// Gamma function on the complex plane (Lanczos, reflection for Re z < 1/2).
cplx gamma_complex(cplx z);

// log Gamma(z), any branch; safe for large |Im z| where Gamma itself
// under- or overflows.  Use exp(lgamma_complex(z)) for ratios.
cplx lgamma_complex(cplx z);

// Gauss hypergeometric 2F1(a, b; c; z) for real z < 1.  z in [0, 1) is summed
// directly, z < 0 goes through the Pfaff transformation.
cplx hyp2f1(cplx a, cplx b, cplx c, double z,
            const PrecisionConfig& prec = default_precision());

// Plain power series, no transformation.  Requires |z| < 1.
cplx hyp2f1_series(cplx a, cplx b, cplx c, double z,
                   const PrecisionConfig& prec = default_precision());

// x^{-alpha} J_alpha(x), alpha >= -1/2, x >= 0.
double bessel_script_J(double alpha, double x,
                       const PrecisionConfig& prec = default_precision());
double bessel_script_J_series(double alpha, double x,
                              const PrecisionConfig& prec = default_precision());
double bessel_script_J_asymptotic(double alpha, double x);

}  // namespace specfun
}  // namespace jacobi
