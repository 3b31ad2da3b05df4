#include "jacobi/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "jacobi/errors.hpp"

namespace jacobi {

void PrecisionConfig::validate() const {
    if (!(series_tol > 0.0 && series_tol < 1e-6))
        throw ParameterError("series_tol must lie in (0, 1e-6)");
    if (max_terms < 64) throw ParameterError("max_terms must be at least 64");
    if (!(asymptotic_crossover > 0.0))
        throw ParameterError("asymptotic_crossover must be positive");
}

const PrecisionConfig& default_precision() {
    static const PrecisionConfig config{};
    return config;
}

namespace specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleTol = 1e-14;

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nan(cplx z) { return std::isnan(z.real()) || std::isnan(z.imag()); }

bool near_nonpositive_integer(cplx z) {
    if (std::abs(z.imag()) > kPoleTol) return false;
    const double n = std::round(z.real());
    return n <= 0.0 && std::abs(z.real() - n) <= kPoleTol;
}

// Series part of the Lanczos approximation; z already shifted by -1.
cplx lanczos_sum(cplx z) {
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + double(i));
    return x;
}

// log sin(pi z) without overflow for large |Im z|.
cplx log_sin_pi(cplx z) {
    const double n = std::round(z.real());
    const cplx w = z - n;
    const cplx parity(0.0, kPi * n);  // log((-1)^n), any branch
    const cplx i(0.0, 1.0);
    if (w.imag() > 20.0) {
        return -i * kPi * w + std::log(cplx(0.0, 0.5) * (1.0 - std::exp(2.0 * i * kPi * w))) + parity;
    }
    if (w.imag() < -20.0) {
        return i * kPi * w + std::log(cplx(0.0, -0.5) * (1.0 - std::exp(-2.0 * i * kPi * w))) + parity;
    }
    return std::log(std::sin(kPi * w)) + parity;
}

cplx sin_pi(cplx z) {
    const double n = std::round(z.real());
    const cplx s = std::sin(kPi * (z - n));
    return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

}  // namespace

cplx gamma_complex(cplx z) {
    if (is_nan(z)) throw DomainError("gamma_complex: NaN argument");
    if (near_nonpositive_integer(z))
        throw PoleError("gamma_complex: pole at nonpositive integer " + std::to_string(z.real()));
    if (z.real() < 0.5) return kPi / (sin_pi(z) * gamma_complex(1.0 - z));
    const cplx zm = z - 1.0;
    const cplx t = zm + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, zm + 0.5) * std::exp(-t) * lanczos_sum(zm);
}

cplx lgamma_complex(cplx z) {
    if (is_nan(z)) throw DomainError("lgamma_complex: NaN argument");
    if (near_nonpositive_integer(z))
        throw PoleError("lgamma_complex: pole at nonpositive integer " + std::to_string(z.real()));
    if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - lgamma_complex(1.0 - z);
    const cplx zm = z - 1.0;
    const cplx t = zm + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(lanczos_sum(zm));
}

cplx hyp2f1_series(cplx a, cplx b, cplx c, double z, const PrecisionConfig& prec) {
    using lcplx = std::complex<long double>;
    if (is_nan(a) || is_nan(b) || is_nan(c) || std::isnan(z)) throw DomainError("hyp2f1: NaN argument");
    if (near_nonpositive_integer(c)) throw ParameterError("hyp2f1: c is a nonpositive integer");
    if (!(std::abs(z) < 1.0)) throw DomainError("hyp2f1_series: requires |z| < 1");

    const lcplx la(a.real(), a.imag()), lb(b.real(), b.imag()), lc(c.real(), c.imag());
    lcplx term = 1.0L;
    lcplx sum = 1.0L;
    int small_in_a_row = 0;
    for (int k = 0; k < prec.max_terms; ++k) {
        const long double kk = k;
        term *= (la + kk) * (lb + kk) / ((lc + kk) * (kk + 1.0L)) * static_cast<long double>(z);
        if (term == lcplx(0.0L)) return {double(sum.real()), double(sum.imag())};
        sum += term;
        if (std::abs(term) <= prec.series_tol * std::abs(sum)) {
            if (++small_in_a_row >= 2) return {double(sum.real()), double(sum.imag())};
        } else {
            small_in_a_row = 0;
        }
    }
    throw ConvergenceError("hyp2f1: series did not converge within max_terms");
}

cplx hyp2f1(cplx a, cplx b, cplx c, double z, const PrecisionConfig& prec) {
    if (is_nan(a) || is_nan(b) || is_nan(c) || std::isnan(z)) throw DomainError("hyp2f1: NaN argument");
    if (near_nonpositive_integer(c)) throw ParameterError("hyp2f1: c is a nonpositive integer");
    if (z >= 1.0) throw DomainError("hyp2f1: z must be < 1");
    if (z >= 0.0) return hyp2f1_series(a, b, c, z, prec);
    // Keep a terminating parameter in front so the transformed series terminates too.
    if (near_nonpositive_integer(b) && !near_nonpositive_integer(a)) std::swap(a, b);
    const double w = z / (z - 1.0);
    return std::exp(-a * std::log(1.0 - z)) * hyp2f1_series(a, c - b, c, w, prec);
}

double bessel_script_J_series(double alpha, double x, const PrecisionConfig& prec) {
    const long double q = -0.25L * static_cast<long double>(x) * x;
    const long double a = alpha;
    long double term = 1.0L / std::tgamma(a + 1.0L);
    long double sum = term;
    for (int k = 0; k < prec.max_terms; ++k) {
        term *= q / ((k + 1.0L) * (k + a + 1.0L));
        sum += term;
        if (k > x && std::abs(term) <= 1e-19L * std::abs(sum)) break;
        if (term == 0.0L) break;
    }
    return static_cast<double>(sum * std::pow(2.0L, -a));
}

double bessel_script_J_asymptotic(double alpha, double x) {
    // Hankel expansion J_nu(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi).
    const double mu = 4.0 * alpha * alpha;
    double p = 1.0, q = 0.0;
    double ak = 1.0;  // a_k(nu) / x^k
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        ak *= (mu - odd * odd) / (k * 8.0 * x);
        const double mag = std::abs(ak);
        if (mag > last) break;  // asymptotic series started to diverge
        const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
        if (k % 2 == 0) p += sign * ak; else q += sign * ak;
        last = mag;
        if (mag < 1e-17) break;
    }
    const double chi = x - (0.5 * alpha + 0.25) * kPi;
    const double j = std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
    return j * std::pow(x, -alpha);
}

double bessel_script_J(double alpha, double x, const PrecisionConfig& prec) {
    if (std::isnan(alpha) || std::isnan(x)) throw DomainError("bessel_script_J: NaN argument");
    if (alpha < -0.5) throw DomainError("bessel_script_J: alpha must be >= -1/2");
    if (x < 0.0) throw DomainError("bessel_script_J: x must be >= 0");
    if (x <= prec.asymptotic_crossover) return bessel_script_J_series(alpha, x, prec);
    return bessel_script_J_asymptotic(alpha, x);
}

}  // namespace specfun
}  // namespace jacobi
