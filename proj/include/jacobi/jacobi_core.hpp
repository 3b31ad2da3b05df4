#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jacobi/specfun.hpp"

namespace jacobi {

struct JacobiParameters {
    double alpha = 1.2;
    double beta = 0.3;
    double rho = 2.5;
    // Set when alpha <= 1/2; only reachable through make(..., true).
    bool relaxed = false;

    static JacobiParameters make(double alpha, double beta, bool allow_relaxed = false);
    static JacobiParameters preset(const std::string& name);
    static std::vector<std::string> preset_names();
};

// lambda inside the strip |Im lambda| < rho.
bool in_strip(const JacobiParameters& p, cplx lambda);

double weight_density(const JacobiParameters& p, double t);
double log_weight_density(const JacobiParameters& p, double t);

cplx c_function(const JacobiParameters& p, cplx lambda);
cplx log_c_function(const JacobiParameters& p, cplx lambda);
// d(lambda) = |c(lambda)|^{-2} for real lambda != 0.
double plancherel_density(const JacobiParameters& p, double lambda);

struct HarishChandraSeries {
    cplx lambda;
    std::vector<cplx> coefficients;
    int truncation_K = 0;
};

HarishChandraSeries harish_chandra_coefficients(const JacobiParameters& p, cplx lambda, int k_max);

// c(l) e^{(il-rho)t} sum_k Gamma_k(l) e^{-2kt} + (l -> -l), truncated at k_max.
cplx harish_chandra_phi(const JacobiParameters& p, cplx lambda, double t, int k_max);

enum class PhiMethod { automatic, series, harish_chandra };

// Jacobi function evaluator bound to one lambda. Caches c(+-lambda) and the
// Harish-Chandra coefficients, so evaluating along a radial grid is cheap.
class PhiEvaluator {
public:
    PhiEvaluator(const JacobiParameters& p, cplx lambda,
                 const PrecisionConfig& prec = default_precision());
    ~PhiEvaluator();
    PhiEvaluator(PhiEvaluator&&) noexcept;
    PhiEvaluator& operator=(PhiEvaluator&&) noexcept;

    cplx operator()(double t) const;
    cplx evaluate(double t, PhiMethod method) const;
    PhiMethod method_for(double t) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

cplx jacobi_phi(const JacobiParameters& p, cplx lambda, double t,
                const PrecisionConfig& prec = default_precision());
// Hypergeometric series only (Pfaff form); slow for large t.
cplx jacobi_phi_series(const JacobiParameters& p, cplx lambda, double t,
                       const PrecisionConfig& prec = default_precision());

double laplacian_residual(const JacobiParameters& p, cplx lambda, double t, double h);

struct CAsymptoticsRow {
    double lambda = 0;
    double density = 0;             // d(lambda)
    double density_ratio = 0;       // d(lambda) / lambda^{2 alpha + 1}
    double derivative_scaled = 0;   // d'(lambda) (1 + lambda)^{-2 alpha}
    double log_derivative_scaled = 0;  // lambda |c'(lambda) / c(lambda)|
    double inv_abs_c_minus = 0;     // |c(-lambda)|^{-1}
};

std::vector<CAsymptoticsRow> c_asymptotics_report(const JacobiParameters& p,
                                                  const std::vector<double>& lambdas);

struct PowerFit {
    double coefficient = 0;
    double exponent = 0;
};

// Least squares fit of log y = log a + b log x.
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct GangolliFit {
    double C = 0;
    double d = 0;
    double raw_slope = 0;
    int samples = 0;
};

GangolliFit gangolli_fit(const JacobiParameters& p, int k_max, const std::vector<cplx>& lambdas);

struct LocalExpansion {
    double value = 0;
    double error = 0;  // jacobi_phi - value
};

constexpr double kDefaultR0 = 1.1;
constexpr double kDefaultR1 = 1.22;

double local_expansion_a1(const JacobiParameters& p, double t);
double local_expansion_constant(const JacobiParameters& p);

LocalExpansion bessel_local_expansion(const JacobiParameters& p, double lambda, double t,
                                      int terms, double R0 = kDefaultR0);

struct ExpansionSample {
    double lambda = 0;
    double t = 0;
    double error = 0;  // |phi - two-term expansion|
};

struct ExpansionStudy {
    std::vector<ExpansionSample> t_samples;       // fixed lambda, |lambda t| <= 1
    std::vector<ExpansionSample> lambda_samples;  // fixed t, binned maxima in lambda
    PowerFit t_fit;
    PowerFit lambda_fit;
    bool exact = false;  // residual at roundoff everywhere, no fit
};

// Residual of the two-term local expansion: t-power at lambda_small over
// [t_lo, t_hi], and the decay envelope in lambda at t_large over [l_lo, l_hi].
ExpansionStudy expansion_error_study(const JacobiParameters& p, double lambda_small = 1.0, double t_lo = 0.05,
                                     double t_hi = 0.5, double t_large = 0.5, double l_lo = 10.0,
                                     double l_hi = 200.0);

}  // namespace jacobi
