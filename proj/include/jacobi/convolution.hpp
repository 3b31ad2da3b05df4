#pragma once

#include <functional>

#include "jacobi/transform.hpp"

namespace jacobi {

struct KernelEvaluation {
    double s = 0, t = 0, u = 0;
    double value = 0;
    bool in_support = false;
};

KernelEvaluation kernel_K(const JacobiParameters& p, double s, double t, double u);

// int f(z) K(x, y, z) dmu(z) over the support interval (|x - y|, x + y).
cplx translate_at(const JacobiParameters& p, const std::function<cplx(double)>& f, double x, double y);

SampledRadialFunction translate(const JacobiParameters& p, const SampledRadialFunction& f, double x);

constexpr std::size_t kDefaultConvolutionBudget = 400;

SampledRadialFunction convolve(const JacobiParameters& p, const SampledRadialFunction& f,
                               const SampledRadialFunction& g, std::size_t budget = kDefaultConvolutionBudget);

struct YoungReport {
    double p = 1, q = 1, r = 1;
    double lhs = 0;  // |f * g|_r
    double rhs = 0;  // |f|_p |g|_q
    double ratio = 0;
};

// Exponents may be infinity. Throws ParameterError when 1/p + 1/q - 1 is
// outside [0, 1].
double young_exponent(double p, double q);
YoungReport young_check(const JacobiParameters& params, const SampledRadialFunction& f,
                        const SampledRadialFunction& g, double p, double q);

}  // namespace jacobi
