#include "jacobi/jacobi_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jacobi/errors.hpp"
#include "jacobi/quadrature.hpp"

namespace jacobi {
namespace {

constexpr cplx kI(0.0, 1.0);
constexpr double kLn2 = std::numbers::ln2;
// Below this |lambda| the Harish-Chandra path cancels catastrophically and
// phi is interpolated from two nearby even samples instead.
constexpr double kSmallLambda = 1e-4;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool nonpositive_integer(cplx z, double tol = 1e-14) {
    if (std::abs(z.imag()) > tol) return false;
    const double n = std::round(z.real());
    return n <= 0.0 && std::abs(z.real() - n) <= tol;
}

void check_lambda(cplx lambda) {
    if (std::isnan(lambda.real()) || std::isnan(lambda.imag()))
        throw DomainError("lambda is NaN");
}

// Running state of the Harish-Chandra recurrence
//   Gamma_n = -1/(2n(n - i l)) sum_{m=1}^n a_m (i l - rho - 2(n-m)) Gamma_{n-m},
//   a_m = (2 alpha + 1) + (2 beta + 1)(-1)^m,
// kept O(1) per step with two parity-split running sums.
struct HCRecurrence {
    cplx il;
    cplx mu;
    double A = 0, B = 0;
    cplx P{0.0}, Q{0.0};
    std::vector<cplx> g{cplx(1.0)};

    HCRecurrence(const JacobiParameters& p, cplx lambda)
        : il(kI * lambda), mu(kI * lambda - p.rho), A(2 * p.alpha + 1), B(2 * p.beta + 1) {}

    void extend_to(int k_max) {
        for (int n = static_cast<int>(g.size()); n <= k_max; ++n) {
            const int j = n - 1;
            const cplx w = (mu - 2.0 * j) * g[j];
            P += w;
            Q += (j % 2 == 0) ? w : -w;
            const cplx lead = double(n) - il;
            if (std::abs(lead) < 1e-10)
                throw PoleError("harish_chandra_coefficients: exceptional lambda = -i*" + std::to_string(n));
            const cplx s = A * P + B * ((n % 2 == 0) ? Q : -Q);
            const cplx gn = -s / (2.0 * n * lead);
            if (!(std::abs(gn) <= 1e100)) throw OverflowError("harish_chandra_coefficients: |Gamma_k| > 1e100");
            g.push_back(gn);
        }
    }
};

// sum_k Gamma_k x^k with lazily extended coefficients.
cplx hc_sum(HCRecurrence& rec, double x) {
    constexpr int kCap = 20000;
    cplx sum = 0.0;
    double xk = 1.0;
    int quiet = 0;
    for (int k = 0; k < kCap; ++k) {
        if (k >= static_cast<int>(rec.g.size())) rec.extend_to(std::min(kCap, 2 * k + 16));
        const cplx term = rec.g[k] * xk;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++quiet >= 3 && k >= 4) return sum;
        } else {
            quiet = 0;
        }
        xk *= x;
        if (xk == 0.0) return sum;
    }
    throw ConvergenceError("Harish-Chandra series did not converge");
}

double one_over_t_minus_coth(double s) {
    if (s < 0.05) {
        const double s2 = s * s;
        return s * (-1.0 / 3.0 + s2 * (1.0 / 45.0 + s2 * (-2.0 / 945.0 + s2 / 4725.0)));
    }
    return 1.0 / s - 1.0 / std::tanh(s);
}

double one_over_t_minus_coth_over_t(double s) {
    if (s < 0.05) {
        const double s2 = s * s;
        return -1.0 / 3.0 + s2 * (1.0 / 45.0 + s2 * (-2.0 / 945.0 + s2 / 4725.0));
    }
    return (1.0 / s - 1.0 / std::tanh(s)) / s;
}

}  // namespace

JacobiParameters JacobiParameters::make(double alpha, double beta, bool allow_relaxed) {
    if (std::isnan(alpha) || std::isnan(beta)) throw DomainError("parameters must not be NaN");
    if (!(alpha > beta)) throw ParameterError("alpha must exceed beta");
    JacobiParameters p;
    p.alpha = alpha;
    p.beta = beta;
    p.rho = alpha + beta + 1.0;
    p.relaxed = !(alpha > 0.5) || !(beta > -0.5);
    if (p.relaxed && (!allow_relaxed || alpha < 0.5 || beta < -0.5))
        throw ParameterError("need alpha > 1/2 and beta > -1/2 (equality only in relaxed mode)");
    return p;
}

JacobiParameters JacobiParameters::preset(const std::string& name) {
    if (name == "h3") return make(0.5, -0.5, true);
    if (name == "generic") return make(1.2, 0.3);
    if (name == "damek-ricci-like") return make(1.5, 0.5);
    throw ParameterError("unknown preset '" + name + "'");
}

std::vector<std::string> JacobiParameters::preset_names() {
    return {"h3", "generic", "damek-ricci-like"};
}

bool in_strip(const JacobiParameters& p, cplx lambda) { return std::abs(lambda.imag()) < p.rho; }

double log_weight_density(const JacobiParameters& p, double t) {
    if (!(t > 0.0)) throw DomainError("weight_density: t must be > 0");
    return (2 * p.alpha + 1) * std::log(2.0 * std::sinh(t)) + (2 * p.beta + 1) * std::log(2.0 * std::cosh(t));
}

double weight_density(const JacobiParameters& p, double t) {
    if (!(t > 0.0)) throw DomainError("weight_density: t must be > 0");
    return std::pow(2.0 * std::sinh(t), 2 * p.alpha + 1) * std::pow(2.0 * std::cosh(t), 2 * p.beta + 1);
}

cplx log_c_function(const JacobiParameters& p, cplx lambda) {
    check_lambda(lambda);
    const cplx il = kI * lambda;
    if (nonpositive_integer(il)) throw PoleError("c_function: pole of Gamma(i lambda)");
    const cplx d1 = 0.5 * (p.rho + il);
    const cplx d2 = d1 - p.beta;
    if (nonpositive_integer(d1) || nonpositive_integer(d2))
        throw PoleError("c_function: zero of c (denominator pole)");
    return (p.rho - il) * kLn2 + specfun::lgamma_complex(il) + specfun::lgamma_complex(p.alpha + 1.0) -
           specfun::lgamma_complex(d1) - specfun::lgamma_complex(d2);
}

cplx c_function(const JacobiParameters& p, cplx lambda) {
    check_lambda(lambda);
    const cplx il = kI * lambda;
    if (nonpositive_integer(il)) throw PoleError("c_function: pole of Gamma(i lambda)");
    const cplx d1 = 0.5 * (p.rho + il);
    if (nonpositive_integer(d1) || nonpositive_integer(d1 - p.beta)) return 0.0;
    return std::exp(log_c_function(p, lambda));
}

double plancherel_density(const JacobiParameters& p, double lambda) {
    return std::exp(-2.0 * log_c_function(p, lambda).real());
}

HarishChandraSeries harish_chandra_coefficients(const JacobiParameters& p, cplx lambda, int k_max) {
    check_lambda(lambda);
    if (k_max < 0) throw DomainError("harish_chandra_coefficients: k_max must be >= 0");
    HCRecurrence rec(p, lambda);
    rec.extend_to(k_max);
    HarishChandraSeries out;
    out.lambda = lambda;
    out.coefficients = rec.g;
    out.truncation_K = k_max;
    return out;
}

cplx harish_chandra_phi(const JacobiParameters& p, cplx lambda, double t, int k_max) {
    if (!(t > 0.0)) throw DomainError("harish_chandra_phi: t must be > 0");
    const double x = std::exp(-2.0 * t);
    cplx total = 0.0;
    for (int sign : {1, -1}) {
        const cplx l = double(sign) * lambda;
        const auto hc = harish_chandra_coefficients(p, l, k_max);
        cplx s = 0.0;
        for (int k = k_max; k >= 0; --k) s = s * x + hc.coefficients[k];
        total += c_function(p, l) * std::exp((kI * l - p.rho) * t) * s;
    }
    return total;
}

cplx jacobi_phi_series(const JacobiParameters& p, cplx lambda, double t, const PrecisionConfig& prec) {
    check_lambda(lambda);
    if (std::isnan(t) || t < 0.0) throw DomainError("jacobi_phi: t must be >= 0");
    if (t == 0.0) return 1.0;
    const cplx il = kI * lambda;
    const double s = std::sinh(t);
    return specfun::hyp2f1(0.5 * (p.rho - il), 0.5 * (p.rho + il), p.alpha + 1.0, -s * s, prec);
}

struct PhiEvaluator::Impl {
    JacobiParameters p;
    cplx lambda;
    PrecisionConfig prec;
    bool real = false;
    bool terminating = false;
    bool small = false;
    // Harish-Chandra data, built on first use.
    mutable bool hc_ready = false;
    mutable bool hc_usable = true;
    mutable cplx c_plus, c_minus;
    mutable std::unique_ptr<HCRecurrence> rec_plus, rec_minus;
    mutable std::unique_ptr<PhiEvaluator> near1, near2;

    bool prepare_hc() const {
        if (hc_ready) return hc_usable;
        hc_ready = true;
        try {
            c_plus = c_function(p, lambda);
            rec_plus = std::make_unique<HCRecurrence>(p, lambda);
            if (!real) {
                c_minus = c_function(p, -lambda);
                rec_minus = std::make_unique<HCRecurrence>(p, -lambda);
                // the recurrence for either sign may hit the exceptional set
                rec_plus->extend_to(64);
                rec_minus->extend_to(64);
            } else {
                rec_plus->extend_to(64);
            }
            hc_usable = finite(c_plus) && (real || finite(c_minus));
        } catch (const Error&) {
            hc_usable = false;
        }
        return hc_usable;
    }

    cplx harish_chandra(double t) const {
        if (small) {
            constexpr double l1 = kSmallLambda, l2 = 2 * kSmallLambda;
            if (!near1) {
                near1 = std::make_unique<PhiEvaluator>(p, cplx(l1), prec);
                near2 = std::make_unique<PhiEvaluator>(p, cplx(l2), prec);
            }
            const cplx f1 = near1->evaluate(t, PhiMethod::harish_chandra);
            const cplx f2 = near2->evaluate(t, PhiMethod::harish_chandra);
            return f1 + (lambda * lambda - l1 * l1) * (f2 - f1) / (l2 * l2 - l1 * l1);
        }
        if (!prepare_hc()) throw DomainError("Harish-Chandra expansion unavailable at this lambda");
        const double x = std::exp(-2.0 * t);
        const cplx first = c_plus * std::exp((kI * lambda - p.rho) * t) * hc_sum(*rec_plus, x);
        if (real) return 2.0 * first.real();
        return first + c_minus * std::exp((-kI * lambda - p.rho) * t) * hc_sum(*rec_minus, x);
    }
};

PhiEvaluator::PhiEvaluator(const JacobiParameters& p, cplx lambda, const PrecisionConfig& prec)
    : impl_(std::make_unique<Impl>()) {
    check_lambda(lambda);
    impl_->p = p;
    impl_->lambda = lambda;
    impl_->prec = prec;
    impl_->real = lambda.imag() == 0.0;
    const cplx il = kI * lambda;
    impl_->terminating = nonpositive_integer(0.5 * (p.rho - il)) || nonpositive_integer(0.5 * (p.rho + il));
    impl_->small = std::abs(lambda) < kSmallLambda;
}

PhiEvaluator::~PhiEvaluator() = default;
PhiEvaluator::PhiEvaluator(PhiEvaluator&&) noexcept = default;
PhiEvaluator& PhiEvaluator::operator=(PhiEvaluator&&) noexcept = default;

PhiMethod PhiEvaluator::method_for(double t) const {
    const auto& m = *impl_;
    if (m.terminating || t == 0.0) return PhiMethod::series;
    const double th = std::tanh(t);
    if (th * th <= 0.8 && std::abs(m.lambda) * th <= 8.0) return PhiMethod::series;
    return PhiMethod::harish_chandra;
}

cplx PhiEvaluator::evaluate(double t, PhiMethod method) const {
    if (std::isnan(t) || t < 0.0) throw DomainError("jacobi_phi: t must be >= 0");
    if (t == 0.0) return 1.0;
    if (method == PhiMethod::automatic) method = method_for(t);
    if (method == PhiMethod::series) return jacobi_phi_series(impl_->p, impl_->lambda, t, impl_->prec);
    return impl_->harish_chandra(t);
}

cplx PhiEvaluator::operator()(double t) const {
    const PhiMethod method = method_for(t);
    if (method == PhiMethod::series || impl_->real) return evaluate(t, method);
    try {
        const cplx v = evaluate(t, method);
        if (finite(v)) return v;
    } catch (const Error&) {
    }
    return evaluate(t, PhiMethod::series);
}

cplx jacobi_phi(const JacobiParameters& p, cplx lambda, double t, const PrecisionConfig& prec) {
    return PhiEvaluator(p, lambda, prec)(t);
}

double laplacian_residual(const JacobiParameters& p, cplx lambda, double t, double h) {
    if (!(h > 0.0) || !(t > 2.0 * h)) throw DomainError("laplacian_residual: requires t > 2h > 0");
    PhiEvaluator ev(p, lambda);
    // all stencil points on the same evaluation path as the centre
    const PhiMethod m = ev.method_for(t);
    const cplx fm2 = ev.evaluate(t - 2 * h, m), fm1 = ev.evaluate(t - h, m), f0 = ev.evaluate(t, m);
    const cplx fp1 = ev.evaluate(t + h, m), fp2 = ev.evaluate(t + 2 * h, m);
    const cplx d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    const cplx d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    const double drift = (2 * p.alpha + 1) / std::tanh(t) + (2 * p.beta + 1) * std::tanh(t);
    return std::abs(d2 + drift * d1 + (lambda * lambda + p.rho * p.rho) * f0);
}

std::vector<CAsymptoticsRow> c_asymptotics_report(const JacobiParameters& p, const std::vector<double>& lambdas) {
    std::vector<CAsymptoticsRow> rows;
    for (double l : lambdas) {
        if (!(l > 0.0)) throw DomainError("c_asymptotics_report: lambda must be positive");
        const double h = 1e-4 * l;
        CAsymptoticsRow r;
        r.lambda = l;
        r.density = plancherel_density(p, l);
        r.density_ratio = r.density / std::pow(l, 2 * p.alpha + 1);
        r.derivative_scaled = (plancherel_density(p, l + h) - plancherel_density(p, l - h)) / (2 * h) *
                              std::pow(1.0 + l, -2 * p.alpha);
        const cplx dlog = (log_c_function(p, l + h) - log_c_function(p, l - h)) / (2 * h);
        r.log_derivative_scaled = l * std::abs(dlog);
        r.inv_abs_c_minus = std::exp(-log_c_function(p, -l).real());
        rows.push_back(r);
    }
    return rows;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_power_law: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_power_law: data must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw DomainError("fit_power_law: degenerate abscissae");
    PowerFit f;
    f.exponent = (n * sxy - sx * sy) / denom;
    f.coefficient = std::exp((sy - f.exponent * sx) / n);
    return f;
}

GangolliFit gangolli_fit(const JacobiParameters& p, int k_max, const std::vector<cplx>& lambdas) {
    if (k_max < 16) throw DomainError("gangolli_fit: k_max must be >= 16");
    if (lambdas.empty()) throw DomainError("gangolli_fit: empty lambda set");
    std::vector<double> xs, ys;
    for (cplx l : lambdas) {
        const auto hc = harish_chandra_coefficients(p, l, k_max);
        for (int k = 0; k <= k_max; ++k) {
            const double a = std::abs(hc.coefficients[k]);
            if (a > 0.0) {
                xs.push_back(1.0 + k);
                ys.push_back(a);
            }
        }
    }
    GangolliFit g;
    g.samples = static_cast<int>(xs.size());
    g.raw_slope = fit_power_law(xs, ys).exponent;
    g.d = std::max(0.0, g.raw_slope);
    for (std::size_t i = 0; i < xs.size(); ++i) g.C = std::max(g.C, ys[i] / std::pow(xs[i], g.d));
    return g;
}

double local_expansion_constant(const JacobiParameters& p) {
    return std::exp((p.rho + p.alpha) * kLn2 + std::lgamma(p.alpha + 1.0));
}

double local_expansion_a1(const JacobiParameters& p, double t) {
    if (std::isnan(t) || t < 0.0) throw DomainError("local_expansion_a1: t must be >= 0");
    const double ah = p.alpha + 0.5, bh = p.beta + 0.5;
    if (t == 0.0) {
        const double gamma = ah / 3.0 + bh;
        return -0.5 * p.rho * p.rho + (p.alpha + 1.0) * gamma;
    }
    // (t a_1)' = -Q/2 with Q = rho^2 + g' - g^2 + (2 alpha + 1) g / t and
    // g = (alpha + 1/2)(1/t - coth t) - (beta + 1/2) tanh t.
    auto g = [&](double s) { return ah * one_over_t_minus_coth(s) - bh * std::tanh(s); };
    auto g_over_s = [&](double s) { return ah * one_over_t_minus_coth_over_t(s) - bh * std::tanh(s) / s; };
    const auto rule = quad::gauss_legendre(48, 0.0, t);
    double rest = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double s = rule.x[i];
        const double gs = g(s);
        rest += rule.w[i] * (gs * gs - (2 * p.alpha + 1) * g_over_s(s));
    }
    const double integral = p.rho * p.rho * t + g(t) - rest;
    return -integral / (2.0 * t);
}

LocalExpansion bessel_local_expansion(const JacobiParameters& p, double lambda, double t, int terms, double R0) {
    if (std::isnan(lambda) || std::isnan(t)) throw DomainError("bessel_local_expansion: NaN argument");
    if (!(t > 0.0) || t > R0) throw DomainError("bessel_local_expansion: t must lie in (0, R0]");
    if (terms != 1 && terms != 2) throw ParameterError("bessel_local_expansion: terms must be 1 or 2");
    const double x = std::abs(lambda) * t;
    const double prefactor =
        local_expansion_constant(p) * std::exp((p.alpha + 0.5) * std::log(t) - 0.5 * log_weight_density(p, t));
    double sum = specfun::bessel_script_J(p.alpha, x);
    if (terms == 2) sum += local_expansion_a1(p, t) * t * t * specfun::bessel_script_J(p.alpha + 1.0, x);
    LocalExpansion out;
    out.value = prefactor * sum;
    out.error = jacobi_phi(p, lambda, t).real() - out.value;
    return out;
}

ExpansionStudy expansion_error_study(const JacobiParameters& p, double lambda_small, double t_lo, double t_hi,
                                     double t_large, double l_lo, double l_hi) {
    if (!(t_lo > 0.0 && t_hi > t_lo && lambda_small > 0.0 && lambda_small * t_hi <= 1.0))
        throw DomainError("expansion_error_study: small-argument window needs |lambda t| <= 1");
    if (!(t_large > 0.0 && l_lo * t_large >= 1.0 && l_hi > l_lo))
        throw DomainError("expansion_error_study: large-argument window needs |lambda t| >= 1");
    ExpansionStudy s;
    constexpr int kT = 12, kBins = 10, kPerBin = 40;
    for (int i = 0; i < kT; ++i) {
        const double t = t_lo * std::pow(t_hi / t_lo, double(i) / (kT - 1));
        s.t_samples.push_back({lambda_small, t, std::abs(bessel_local_expansion(p, lambda_small, t, 2).error)});
    }
    for (int b = 0; b < kBins; ++b) {
        ExpansionSample best{0.0, t_large, -1.0};
        for (int i = 0; i < kPerBin; ++i) {
            const double l = l_lo * std::pow(l_hi / l_lo, double(b * kPerBin + i) / (kBins * kPerBin - 1));
            const double e = std::abs(bessel_local_expansion(p, l, t_large, 2).error);
            if (e > best.error) best = {l, t_large, e};
        }
        s.lambda_samples.push_back(best);
    }
    double worst = 0.0;
    for (const auto& v : s.t_samples) worst = std::max(worst, v.error);
    for (const auto& v : s.lambda_samples) worst = std::max(worst, v.error);
    if (worst < 1e-13) {
        s.exact = true;
        return s;
    }
    auto fit = [](const std::vector<ExpansionSample>& v, bool by_t) {
        std::vector<double> x, y;
        for (const auto& e : v)
            if (e.error > 0.0) {
                x.push_back(by_t ? e.t : e.lambda);
                y.push_back(e.error);
            }
        return fit_power_law(x, y);
    };
    s.t_fit = fit(s.t_samples, true);
    s.lambda_fit = fit(s.lambda_samples, false);
    return s;
}

}  // namespace jacobi
