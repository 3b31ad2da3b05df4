#include "jacobi/convolution.hpp"

#include <cmath>
#include <numbers>

#include "jacobi/errors.hpp"
#include "jacobi/quadrature.hpp"

namespace jacobi {
namespace {

constexpr int kKernelNodes = 64;

// 2F1(a, b; c; z) for real parameters and 0 <= z < 1/2.
double hyp2f1_real(double a, double b, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 10000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
    }
    throw ConvergenceError("kernel_K: hypergeometric series did not converge");
}

double log_kernel_constant(const JacobiParameters& p) {
    return -2.0 * p.rho * std::numbers::ln2 + std::lgamma(p.alpha + 1.0) - 0.5 * std::log(std::numbers::pi) -
           std::lgamma(p.alpha + 0.5);
}

struct KernelCtx {
    JacobiParameters p;
    double log_const;
    explicit KernelCtx(const JacobiParameters& q) : p(q), log_const(log_kernel_constant(q)) {}

    // K(s, t, u) inside the support; the caller guarantees |s - t| < u < s + t.
    double inside(double s, double t, double u) const {
        const double cs = std::cosh(s), ct = std::cosh(t), cu = std::cosh(u);
        const double ccc = cs * ct * cu;
        // 1 - B from the factorisation (cosh(s+t) - cosh u)(cosh u - cosh(s-t)).
        const double prod = std::sinh(0.5 * (s + t + u)) * std::sinh(0.5 * (s + t - u)) *
                            std::sinh(0.5 * (u + s - t)) * std::sinh(0.5 * (u - s + t));
        const double one_minus_b = 2.0 * prod / ccc;
        const double one_plus_b = (2.0 * ccc + cs * cs + ct * ct + cu * cu - 1.0) / (2.0 * ccc);
        if (!(one_minus_b > 0.0)) return 0.0;
        const double log_pref = log_const + (p.alpha - p.beta - 1.0) * std::log(ccc) -
                                2.0 * p.alpha * std::log(std::sinh(s) * std::sinh(t) * std::sinh(u));
        const double shape = (p.alpha == 0.5) ? 1.0 : std::pow(one_minus_b * one_plus_b, p.alpha - 0.5);
        const double f = hyp2f1_real(p.alpha + p.beta, p.alpha - p.beta, p.alpha + 0.5, 0.5 * one_minus_b);
        return std::exp(log_pref) * shape * f;
    }
};

// Nodes and weights on (a, b) clustered at both ends by the quintic smoothstep.
void support_rule(double a, double b, double* z, double* w) {
    const auto& ref = quad::gauss_legendre(kKernelNodes);
    for (int k = 0; k < kKernelNodes; ++k) {
        const double tau = 0.5 * (ref.x[k] + 1.0);
        z[k] = a + (b - a) * quad::smoothstep(tau);
        w[k] = 0.5 * ref.w[k] * (b - a) * quad::smoothstep_derivative(tau);
    }
}

cplx translate_impl(const KernelCtx& ctx, const std::function<cplx(double)>& f, double x, double y) {
    const double a = std::abs(x - y), b = x + y;
    if (!(b > a)) return 0.0;
    double z[kKernelNodes], w[kKernelNodes];
    support_rule(a, b, z, w);
    cplx sum = 0.0;
    for (int k = 0; k < kKernelNodes; ++k) {
        if (!(z[k] > a && z[k] < b) || w[k] == 0.0) continue;
        const cplx fz = f(z[k]);
        if (fz == cplx(0.0)) continue;
        sum += fz * ctx.inside(x, y, z[k]) * weight_density(ctx.p, z[k]) * w[k];
    }
    return sum;
}

}  // namespace

KernelEvaluation kernel_K(const JacobiParameters& p, double s, double t, double u) {
    if (!(s > 0.0 && t > 0.0 && u > 0.0)) throw DomainError("kernel_K: arguments must be positive");
    KernelEvaluation e{s, t, u, 0.0, false};
    e.in_support = std::abs(s - t) < u && u < s + t;
    if (e.in_support) e.value = KernelCtx(p).inside(s, t, u);
    return e;
}

cplx translate_at(const JacobiParameters& p, const std::function<cplx(double)>& f, double x, double y) {
    if (!(x > 0.0 && y > 0.0)) throw DomainError("translate: x and y must be positive");
    return translate_impl(KernelCtx(p), f, x, y);
}

SampledRadialFunction translate(const JacobiParameters& p, const SampledRadialFunction& f, double x) {
    if (!(x > 0.0)) throw DomainError("translate: x must be positive");
    const KernelCtx ctx(p);
    const RadialInterpolator interp(f);
    const std::function<cplx(double)> fz = [&](double z) { return interp(z); };
    SampledRadialFunction out{f.grid, std::vector<cplx>(f.grid->size())};
    for (std::size_t i = 0; i < f.grid->size(); ++i) out.values[i] = translate_impl(ctx, fz, x, f.grid->nodes[i]);
    return out;
}

SampledRadialFunction convolve(const JacobiParameters& p, const SampledRadialFunction& f,
                               const SampledRadialFunction& g, std::size_t budget) {
    if (f.grid->id != g.grid->id) throw DomainError("convolve: f and g must share a grid");
    const auto& grid = *f.grid;
    if (grid.size() > budget)
        throw BudgetError("convolve: " + std::to_string(grid.size()) + " nodes exceed the budget of " +
                          std::to_string(budget));
    const KernelCtx ctx(p);
    const RadialInterpolator interp(g);
    const std::function<cplx(double)> gz = [&](double z) { return interp(z); };
    double fmax = 0.0;
    for (auto v : f.values) fmax = std::max(fmax, std::abs(v));
    SampledRadialFunction out{f.grid, std::vector<cplx>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.nodes[i];
        cplx sum = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (std::abs(f.values[k]) < 1e-18 * fmax) continue;
            sum += f.values[k] * translate_impl(ctx, gz, x, grid.nodes[k]) * grid.mu_weights[k];
        }
        out.values[i] = sum;
    }
    return out;
}

double young_exponent(double p, double q) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw ParameterError("young: exponents must be >= 1");
    const double inv = (std::isinf(p) ? 0.0 : 1.0 / p) + (std::isinf(q) ? 0.0 : 1.0 / q) - 1.0;
    if (inv < -1e-12 || inv > 1.0 + 1e-12) throw ParameterError("young: no valid r for these exponents");
    if (inv <= 1e-12) return std::numeric_limits<double>::infinity();
    return 1.0 / inv;
}

YoungReport young_check(const JacobiParameters& params, const SampledRadialFunction& f,
                        const SampledRadialFunction& g, double p, double q) {
    YoungReport rep;
    rep.p = p;
    rep.q = q;
    rep.r = young_exponent(p, q);
    rep.lhs = lp_norm(convolve(params, f, g), rep.r);
    rep.rhs = lp_norm(f, p) * lp_norm(g, q);
    if (rep.rhs == 0.0) throw DomainError("young_check: zero input");
    rep.ratio = rep.lhs / rep.rhs;
    return rep;
}

}  // namespace jacobi
