#include "jacobi/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "jacobi/errors.hpp"
#include "jacobi/expression.hpp"
#include "jacobi/quadrature.hpp"

namespace jacobi {
namespace {

constexpr cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool nonpositive_integer(cplx z) {
    if (std::abs(z.imag()) > 1e-14) return false;
    const double n = std::round(z.real());
    return n <= 0.0 && std::abs(z.real() - n) <= 1e-14;
}

// Polynomial through (eps_i, v_i) evaluated at 0; `prev` receives the
// estimate from all but the last point.
cplx neville_at_zero(const std::vector<double>& eps, const std::vector<cplx>& v, cplx* prev = nullptr) {
    const std::size_t n = eps.size();
    std::vector<std::vector<cplx>> T(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) {
        T[i][0] = v[i];
        for (std::size_t j = 1; j <= i; ++j)
            T[i][j] = (eps[i] * T[i - 1][j - 1] - eps[i - j] * T[i][j - 1]) / (eps[i] - eps[i - j]);
    }
    if (prev) *prev = n >= 2 ? T[n - 2][n - 2] : T[0][0];
    return T[n - 1][n - 1];
}

double uniform(std::mt19937_64& rng, double a, double b) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct DeltaShape {
    int n1, n2;
    double f1, f2;
    explicit DeltaShape(const JacobiParameters& p) {
        n1 = static_cast<int>(std::floor(2.0 * p.alpha + 1.0));
        n2 = static_cast<int>(std::floor(2.0 * p.beta + 1.0));
        f1 = 2.0 * p.alpha + 1.0 - n1;
        f2 = 2.0 * p.beta + 1.0 - n2;
    }
    // (1 - x)^{f1} (1 + x)^{f2} at x = e^{-2t}, t > 0
    double delta(double t) const {
        const double one_minus = -std::expm1(-2.0 * t);
        return std::pow(one_minus, f1) * std::pow(1.0 + std::exp(-2.0 * t), f2);
    }
    std::vector<double> coefficients() const {
        std::vector<double> c(n1 + n2 + 1, 0.0);
        for (int a = 0; a <= n1; ++a)
            for (int b = 0; b <= n2; ++b) c[a + b] += binomial(n1, a) * (a % 2 ? -1.0 : 1.0) * binomial(n2, b);
        return c;
    }
};

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
    return x;
}

SampledRadialFunction even_bumps(const RadialGridPtr& grid, const std::vector<std::array<double, 3>>& bumps,
                                 double freq) {
    return sample(grid, [&](double t) {
        double s = 0.0;
        for (const auto& b : bumps) {
            const double inv = 1.0 / (2.0 * b[1] * b[1]);
            s += b[2] * (std::exp(-(t - b[0]) * (t - b[0]) * inv) + std::exp(-(t + b[0]) * (t + b[0]) * inv));
        }
        return cplx(s * std::cos(freq * t));
    });
}

double ratio_or_skip(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

cplx omega(const JacobiParameters& p, cplx lambda) {
    const cplx base = lambda * lambda + 4.0 * p.rho * p.rho;
    if (base.imag() == 0.0 && base.real() <= 0.0) throw DomainError("omega: base on the branch cut");
    return std::exp((p.alpha + 0.25) * std::log(base));
}

cplx inverse_c_minus(const JacobiParameters& p, cplx lambda) {
    if (!finite(lambda)) throw DomainError("inverse_c_minus: lambda is not finite");
    const cplx z = -kI * lambda;
    if (nonpositive_integer(z)) return 0.0;
    const cplx d1 = 0.5 * (p.rho + z);
    const cplx d2 = d1 - p.beta;
    if (nonpositive_integer(d1) || nonpositive_integer(d2)) throw PoleError("c(-lambda)^{-1}: pole");
    return std::exp(specfun::lgamma_complex(d1) + specfun::lgamma_complex(d2) - (p.rho - z) * std::numbers::ln2 -
                    specfun::lgamma_complex(z) - specfun::lgamma_complex(p.alpha + 1.0));
}

cplx w_function(const JacobiParameters& p, cplx lambda) {
    return std::exp(-std::log(omega(p, lambda)) - log_c_function(p, lambda));
}

const char* to_string(DecayClass d) { return d == DecayClass::rapidly_decreasing ? "rapidly-decreasing" : "bounded"; }

DecayClass decay_class_from_string(const std::string& s) {
    if (s == "rapidly-decreasing") return DecayClass::rapidly_decreasing;
    if (s == "bounded") return DecayClass::bounded;
    throw ParameterError("unknown decay class '" + s + "'");
}

MultiplierSpec multiplier_from_expression(const JacobiParameters& p, const std::string& expression,
                                          const std::string& label, DecayClass decay) {
    MultiplierSpec m;
    m.evaluate = compile_expression(expression, p);
    m.decay = decay;
    m.label = label;
    m.expression = expression;
    m.even = evenness_defect(m) <= kEvennessTolerance;
    return m;
}

MultiplierSpec constant_multiplier(double value, const std::string& label) {
    MultiplierSpec m;
    m.evaluate = [value](cplx) { return cplx(value); };
    m.label = label;
    m.expression = fmt("%.17g", value);
    m.decay = value == 0.0 ? DecayClass::rapidly_decreasing : DecayClass::bounded;
    return m;
}

double evenness_defect(const MultiplierSpec& m, double Lambda, int samples) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double l = Lambda * (i + 0.5) / samples;
        const cplx a = m(l), b = m(-l);
        if (!finite(a) || !finite(b)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    return worst;
}

double strip_sup(const JacobiParameters& p, const std::function<cplx(cplx)>& g, double Lambda) {
    double sup = 0.0;
    const int nx = static_cast<int>(std::ceil(8.0 * Lambda));
    for (int j = -10; j <= 10; ++j) {
        const double y = 0.999 * p.rho * j / 10.0;
        for (int i = -nx; i <= nx; ++i) {
            const cplx v = g(cplx(Lambda * i / nx, y));
            if (!finite(v)) return std::numeric_limits<double>::infinity();
            sup = std::max(sup, std::abs(v));
        }
    }
    return sup;
}

cplx modified_multiplier(const JacobiParameters& p, const MultiplierSpec& m, cplx lambda) {
    const cplx v = m(lambda);
    if (v == cplx(0.0)) return 0.0;
    return v * inverse_c_minus(p, lambda);
}

std::vector<double> default_approach_ladder() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

cplx boundary_value(const std::function<cplx(cplx)>& g, double x, double height, const std::vector<double>& ladder,
                    double* gap) {
    if (height == 0.0) {
        if (gap) *gap = 0.0;
        return g(cplx(x, 0.0));
    }
    if (ladder.size() < 3) throw DomainError("boundary_value: ladder needs three or more steps");
    std::vector<double> eps;
    std::vector<cplx> v;
    cplx best;
    double d = 0.0;
    // walk down the ladder until two successive extrapolants agree
    for (double e : ladder) {
        eps.push_back(e);
        v.push_back(g(cplx(x, height - e)));
        if (!finite(v.back())) throw ConvergenceError("boundary_value: non-finite sample");
        if (eps.size() < 3) continue;
        cplx prev;
        best = neville_at_zero(eps, v, &prev);
        d = std::abs(best - prev) / std::max(1.0, std::abs(best));
        if (d < kTraceTolerance) break;
    }
    if (gap) *gap = d;
    if (!(d < kTraceTolerance))
        throw ConvergenceError("boundary_value: no nontangential limit at x = " + fmt("%.6g", x));
    return best;
}

BoundaryTrace boundary_trace(const std::function<cplx(cplx)>& g, double height, const std::vector<double>& nodes,
                             const std::vector<double>& ladder) {
    BoundaryTrace out;
    out.height = height;
    out.nodes = nodes;
    out.approach = ladder;
    for (std::size_t k = 1; k < ladder.size(); ++k)
        if (!(ladder[k] < ladder[k - 1] && ladder[k] > 0.0))
            throw DomainError("boundary_trace: ladder must be positive and decreasing");
    for (double x : nodes) {
        double gap = 0.0;
        out.samples.push_back(boundary_value(g, x, height, ladder, &gap));
        out.cauchy_gap = std::max(out.cauchy_gap, gap);
    }
    return out;
}

CutoffPair CutoffPair::make(double R0) {
    if (!(R0 > 1.0 && R0 < std::sqrt(kPi / 2.0))) throw ParameterError("R0 must lie in (1, sqrt(pi/2))");
    CutoffPair c;
    c.R0 = R0;
    return c;
}

double CutoffPair::psi(double t) const {
    const double a = std::sqrt(R0);
    return 1.0 - quad::smoothstep((std::abs(t) - a) / (R0 - a));
}

double CutoffPair::phi(double lambda) const {
    const double a = 1.0 / R0;
    return 1.0 - quad::smoothstep((std::abs(lambda) - a) / a);
}

SampledRadialFunction kernel_from_multiplier(const JacobiParameters& p, const MultiplierSpec& m,
                                             const RadialGridPtr& rgrid, const SpectralGridPtr& sgrid) {
    if (m.decay != DecayClass::rapidly_decreasing)
        throw DecayError("kernel_from_multiplier: multiplier is not rapidly decreasing; heat-regularize first");
    return inverse_transform(p, sample(sgrid, [&](double l) { return m(l); }), rgrid);
}

MultiplierSpec heat_regularize(const JacobiParameters& p, const MultiplierSpec& m, double s) {
    if (!(s > 0.0)) throw DomainError("heat_regularize: s must be > 0");
    MultiplierSpec out = m;
    const double rho2 = p.rho * p.rho;
    auto inner = m.evaluate;
    out.evaluate = [inner, s, rho2](cplx l) { return inner(l) * std::exp(-s * (l * l + rho2)); };
    out.decay = DecayClass::rapidly_decreasing;
    out.label = m.label + fmt("@s=%g", s);
    if (!m.expression.empty()) out.expression = "(" + m.expression + ")*exp(-" + fmt("%.17g", s) + "*(lambda^2+rho^2))";
    return out;
}

KernelSplit split_kernel(const JacobiParameters& p, const SampledRadialFunction& k, const CutoffPair& cutoffs) {
    if (!(k.grid->params.alpha == p.alpha && k.grid->params.beta == p.beta))
        throw DomainError("split_kernel: grid parameters differ");
    if (!(k.grid->T_max >= cutoffs.R0 + 0.5)) throw DomainError("split_kernel: grid does not extend past R0 with margin");
    KernelSplit out{{k.grid, k.values}, {k.grid, k.values}};
    for (std::size_t i = 0; i < k.values.size(); ++i) {
        const double w = cutoffs.psi(k.grid->nodes[i]);
        out.local.values[i] = w * k.values[i];
        out.global.values[i] = k.values[i] - out.local.values[i];
    }
    return out;
}

DeltaExpansion delta_expansion(const JacobiParameters& p, double t) {
    if (!(t > 0.0)) throw DomainError("delta_expansion: t must be > 0");
    const DeltaShape sh(p);
    DeltaExpansion out;
    out.n_alpha = sh.n1;
    out.n_beta = sh.n2;
    out.frac_alpha = sh.f1;
    out.frac_beta = sh.f2;
    out.coefficients = sh.coefficients();
    out.J = static_cast<int>(out.coefficients.size()) - 1;
    out.delta_factor = sh.delta(t);
    const double x = std::exp(-2.0 * t);
    double s = 0.0;
    for (int j = out.J; j >= 0; --j) s = s * x + out.coefficients[j];
    out.reconstruction = std::exp(2.0 * p.rho * t) * out.delta_factor * s;
    out.exact = weight_density(p, t);
    return out;
}

double a_plus(const JacobiParameters& p, const CutoffPair& cutoffs, int ell, double t) {
    if (t <= 0.0) return 0.0;
    const double w = 1.0 - cutoffs.psi(t);
    if (w == 0.0) return 0.0;
    return w * std::exp(-2.0 * ell * t) * DeltaShape(p).delta(t);
}

double a_minus(const JacobiParameters& p, const CutoffPair& cutoffs, int ell, double t) {
    if (t > 0.0) return 0.0;
    const double w = 1.0 - cutoffs.psi(t);
    if (w == 0.0) return 0.0;
    return w * std::exp(2.0 * ell * t) * DeltaShape(p).delta(-t);
}

double a_minus_sup(const JacobiParameters& p, const CutoffPair& cutoffs, int ell) {
    const double a = std::sqrt(cutoffs.R0);
    double sup = 0.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
        const double t = -(a + (cutoffs.R0 + 10.0 - a) * i / n);
        sup = std::max(sup, std::abs(a_minus(p, cutoffs, ell, t)));
    }
    return sup;
}

LineQuadrature line_quadrature(const JacobiParameters& p, const MultiplierSpec& m, double panel_width) {
    if (!(panel_width > 0.0)) throw DomainError("line_quadrature: panel width must be > 0");
    auto M = [&](double x) { return std::abs(modified_multiplier(p, m, x)); };
    double L = 50.0;
    for (;;) {
        double peak = 0.0;
        for (int i = 0; i <= 2000; ++i) peak = std::max(peak, M(-L + 2.0 * L * i / 2000));
        const double edge = std::max(M(L), M(-L));
        if (peak == 0.0 || edge <= 1e-14 * peak) break;
        L *= 2.0;
        if (L > 800.0) throw DecayError("line_quadrature: M does not decay along the real line");
    }
    const int panels = static_cast<int>(std::ceil(2.0 * L / panel_width));
    std::vector<double> edges(panels + 1);
    for (int i = 0; i <= panels; ++i) edges[i] = -L + 2.0 * L * i / panels;
    const auto r = quad::composite_gauss_legendre(edges, 8);
    return {r.x, r.w, L};
}

GlobalPieces hc_global_pieces(const JacobiParameters& p, const MultiplierSpec& m, int ell_max,
                              const std::vector<double>& t_nodes, const SpectralGridPtr& sgrid,
                              const CutoffPair& cutoffs) {
    if (m.decay != DecayClass::rapidly_decreasing) throw DecayError("hc_global_pieces: m must be rapidly decreasing");
    if (ell_max < 0) throw DomainError("hc_global_pieces: ell_max must be >= 0");
    for (double t : t_nodes)
        if (!(t >= std::sqrt(cutoffs.R0) && t <= 40.0)) throw DomainError("hc_global_pieces: t outside [sqrt(R0), 40]");

    GlobalPieces g;
    g.t = t_nodes;
    g.ell_max = ell_max;
    g.c = DeltaShape(p).coefficients();
    g.J = static_cast<int>(g.c.size()) - 1;
    const std::size_t nt = t_nodes.size();

    const auto lq = line_quadrature(p, m);
    const std::size_t nq = lq.x.size();
    std::vector<cplx> Mw(nq);
    std::vector<std::vector<cplx>> gam(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        Mw[q] = modified_multiplier(p, m, lq.x[q]) * lq.w[q];
        if (Mw[q] != cplx(0.0)) gam[q] = harish_chandra_coefficients(p, lq.x[q], ell_max).coefficients;
    }

    g.b_plus.assign(ell_max + 1, std::vector<cplx>(nt));
    g.b_minus.assign(ell_max + 1, std::vector<cplx>(nt));
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = t_nodes[i];
        for (std::size_t q = 0; q < nq; ++q) {
            if (Mw[q] == cplx(0.0)) continue;
            const cplx ep = Mw[q] * std::exp((kI * lq.x[q] + p.rho) * t);
            const cplx em = Mw[q] * std::exp(-(kI * lq.x[q] + p.rho) * t);
            for (int k = 0; k <= ell_max; ++k) {
                g.b_plus[k][i] += ep * gam[q][k];
                g.b_minus[k][i] += em * gam[q][k];
            }
        }
    }

    g.a_plus.assign(ell_max + 1, std::vector<double>(nt));
    g.a_minus.assign(ell_max + 1, std::vector<double>(nt));
    g.K.assign(ell_max + 1, std::vector<std::vector<cplx>>(g.J + 1, std::vector<cplx>(nt)));
    for (int l = 0; l <= ell_max; ++l) {
        for (std::size_t i = 0; i < nt; ++i) {
            g.a_plus[l][i] = a_plus(p, cutoffs, l, t_nodes[i]);
            g.a_minus[l][i] = a_minus(p, cutoffs, l, t_nodes[i]);
            for (int j = 0; j <= std::min(g.J, l); ++j)
                g.K[l][j][i] = g.a_minus[l][i] * g.b_minus[l - j][i] + g.a_plus[l][i] * g.b_plus[l - j][i];
        }
    }

    // k(t) by spectral quadrature against phi, an independent path.
    const auto& sg = *sgrid;
    std::vector<cplx> mv(sg.size());
    double peak = 0.0, tail = 0.0;
    for (std::size_t j = 0; j < sg.size(); ++j) {
        mv[j] = m(sg.nodes[j]);
        peak = std::max(peak, std::abs(mv[j]));
        if (j + static_cast<std::size_t>(sg.order) >= sg.size()) tail = std::max(tail, std::abs(mv[j]));
    }
    if (peak > 0.0 && !(tail < kDecayTolerance * peak)) throw DecayError("hc_global_pieces: m does not decay on the spectral grid");
    std::vector<cplx> k(nt, 0.0);
    for (std::size_t j = 0; j < sg.size(); ++j) {
        if (mv[j] == cplx(0.0)) continue;
        PhiEvaluator ev(p, sg.nodes[j]);
        for (std::size_t i = 0; i < nt; ++i) k[i] += mv[j] * ev(t_nodes[i]) * sg.nu_weights[j];
    }
    g.target.resize(nt);
    for (std::size_t i = 0; i < nt; ++i)
        g.target[i] = (1.0 - cutoffs.psi(t_nodes[i])) * k[i] * weight_density(p, t_nodes[i]);

    g.max_rel_error = truncated_reconstruction_error(g, ell_max);
    g.reconstruction.assign(nt, 0.0);
    g.rel_error.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        for (int l = 0; l <= ell_max; ++l)
            for (int j = 0; j <= g.J; ++j) g.reconstruction[i] += g.c[j] * g.K[l][j][i];
        g.reconstruction[i] /= 2.0 * kPi;
        g.rel_error[i] = std::abs(g.reconstruction[i] - g.target[i]) / std::abs(g.target[i]);
    }
    g.within_tolerance = g.max_rel_error < kReconstructionTolerance;
    return g;
}

double truncated_reconstruction_error(const GlobalPieces& g, int L) {
    if (L < 0 || L > g.ell_max) throw DomainError("truncated_reconstruction_error: L out of range");
    double worst = 0.0;
    for (std::size_t i = 0; i < g.t.size(); ++i) {
        cplx s = 0.0;
        for (int l = 0; l <= L; ++l)
            for (int j = 0; j <= g.J; ++j) s += g.c[j] * g.K[l][j][i];
        s /= 2.0 * kPi;
        const double d = std::abs(g.target[i]);
        worst = std::max(worst, d > 0.0 ? std::abs(s - g.target[i]) / d : std::abs(s));
    }
    return worst;
}

EtaCheck eta_recombination(const JacobiParameters& p, const MultiplierSpec& m, const std::vector<double>& t_nodes,
                           const CutoffPair& cutoffs) {
    if (m.decay != DecayClass::rapidly_decreasing) throw DecayError("eta_recombination: m must be rapidly decreasing");
    const auto lq = line_quadrature(p, m);
    const std::size_t nq = lq.x.size();
    auto Mfun = [&](cplx l) { return modified_multiplier(p, m, l); };
    std::vector<cplx> M(nq), H(nq), Mr(nq), Hr(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        const double x = lq.x[q];
        M[q] = Mfun(x);
        H[q] = Mfun(-x);
        Mr[q] = boundary_value(Mfun, x, p.rho);
        Hr[q] = boundary_value(Mfun, -x, p.rho);
    }
    EtaCheck out;
    out.t = t_nodes;
    for (double t : t_nodes) {
        cplx FM = 0, FH = 0, FMr = 0, FHr = 0, bp = 0, bm = 0;
        for (std::size_t q = 0; q < nq; ++q) {
            const cplx e = std::exp(kI * lq.x[q] * t) * lq.w[q];
            FM += M[q] * e;
            FH += H[q] * e;
            FMr += Mr[q] * e;
            FHr += Hr[q] * e;
            bp += M[q] * lq.w[q] * std::exp((kI * lq.x[q] + p.rho) * t);
            bm += M[q] * lq.w[q] * std::exp(-(kI * lq.x[q] + p.rho) * t);
        }
        const double ap = a_plus(p, cutoffs, 0, t), am = a_minus(p, cutoffs, 0, t);
        const double eta_p = (ap - 1.0) * std::exp(p.rho * t);
        const double eta_m = (am - 1.0) * std::exp(-p.rho * t);
        const cplx direct = am * bm + ap * bp;
        const cplx rec = FMr + eta_p * FM + FHr + eta_m * FH;
        const double scale = std::max({std::abs(direct), std::abs(FMr), std::abs(eta_p * FM), std::abs(FHr),
                                       std::abs(eta_m * FH)});
        out.direct.push_back(direct);
        out.recombined.push_back(rec);
        out.max_rel_defect = std::max(out.max_rel_defect, scale > 0.0 ? std::abs(direct - rec) / scale : 0.0);
    }
    return out;
}

ContourShift contour_shift_check(const JacobiParameters& p, const MultiplierSpec& m, int k, double t, int sign) {
    if (m.decay != DecayClass::rapidly_decreasing) throw DecayError("contour_shift_check: m must be rapidly decreasing");
    if (!(t > 0.0)) throw DomainError("contour_shift_check: t must be > 0");
    if (k < 0) throw DomainError("contour_shift_check: k must be >= 0");
    if (sign != 1 && sign != -1) throw DomainError("contour_shift_check: sign must be +1 or -1");
    auto F = [&](cplx l) {
        const cplx Mv = modified_multiplier(p, m, l);
        if (Mv == cplx(0.0)) return cplx(0.0);
        const cplx e = std::exp(double(sign) * (kI * l + p.rho) * t);
        if (e == cplx(0.0)) return cplx(0.0);
        return Mv * harish_chandra_coefficients(p, l, k).coefficients[k] * e;
    };
    const auto lq = line_quadrature(p, m);
    ContourShift out;
    out.k = k;
    out.t = t;
    out.sign = sign;
    for (std::size_t q = 0; q < lq.x.size(); ++q) out.direct += F(lq.x[q]) * lq.w[q];
    const auto& gl = quad::gauss_legendre(32);
    for (std::size_t r = 0; r < out.R.size(); ++r) {
        const double R = out.R[r];
        const double y = p.rho * (1.0 - 1.0 / R);
        const double half = std::min(R, lq.L);
        const int panels = static_cast<int>(std::ceil(2.0 * half / 0.125));
        std::vector<double> edges(panels + 1);
        for (int i = 0; i <= panels; ++i) edges[i] = -half + 2.0 * half * i / panels;
        const auto rr = quad::composite_gauss_legendre(edges, 8);
        cplx s = 0.0;
        for (std::size_t q = 0; q < rr.x.size(); ++q) s += F(cplx(rr.x[q], y)) * rr.w[q];
        out.shifted[r] = s;
        cplx e = 0.0;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
            const double yy = 0.5 * y * (gl.x[q] + 1.0);
            e += (F(cplx(R, yy)) - F(cplx(-R, yy))) * (0.5 * y * gl.w[q]);
        }
        out.edge[r] = std::abs(kI * e);
    }
    for (std::size_t r = 1; r < out.R.size(); ++r)
        if (out.edge[r] > out.edge[r - 1] && out.edge[r] > 1e-300)
            throw ConvergenceError("contour_shift_check: vertical edge contributions do not vanish");
    out.defect = std::abs(out.direct - out.shifted.back());
    return out;
}

HormanderReport hormander_check(const std::function<cplx(double)>& g, double Lambda_min, double Lambda_max,
                                int samples, double rel_step) {
    if (!(Lambda_min > 0.0 && Lambda_max > Lambda_min) || samples < 2 || !(rel_step > 0.0))
        throw DomainError("hormander_check: invalid range");
    HormanderReport r;
    r.step = rel_step;
    r.noise_warning = rel_step < kNoiseStepThreshold;
    for (double l : log_spaced(Lambda_min, Lambda_max, samples)) {
        const double h = rel_step * l;
        const cplx a = g(l - h), b = g(l), c = g(l + h);
        r.sup_g = std::max(r.sup_g, std::abs(b));
        r.sup_lg1 = std::max(r.sup_lg1, l * std::abs((c - a) / (2.0 * h)));
        r.sup_l2g2 = std::max(r.sup_l2g2, l * l * std::abs((c - 2.0 * b + a) / (h * h)));
    }
    return r;
}

cplx p_s_function(const JacobiParameters& p, const CutoffPair& cutoffs, double lambda) {
    const double w = 1.0 - cutoffs.phi(lambda);
    if (w == 0.0) return 0.0;
    return w * std::exp(-(p.alpha + 0.5) * std::log(std::abs(lambda)) - log_c_function(p, lambda));
}

WSlopes w_slope_fit(const JacobiParameters& p, double lo, double hi, int samples) {
    if (!(lo >= 1.0 && hi > lo) || samples < 3) throw DomainError("w_slope_fit: invalid range");
    WSlopes out;
    out.lo = lo;
    out.hi = hi;
    std::vector<double> x = log_spaced(lo, hi, samples), w, dw;
    for (double l : x) {
        const double h = 1e-3 * l;
        w.push_back(std::abs(w_function(p, l)));
        dw.push_back(std::abs((w_function(p, l + h) - w_function(p, l - h)) / (2.0 * h)));
    }
    out.w = fit_power_law(x, w);
    out.dw = fit_power_law(x, dw);
    return out;
}

MihlinProxy mihlin_proxy_norm(const std::function<cplx(double)>& g, double Lambda_max, bool both_sides,
                              int per_octave, double rel_step) {
    if (!(Lambda_max > 1.0) || per_octave < 1 || !(rel_step > 0.0)) throw DomainError("mihlin_proxy_norm: invalid range");
    MihlinProxy r;
    r.noise_warning = rel_step < kNoiseStepThreshold;
    const int K = static_cast<int>(std::ceil(std::log2(Lambda_max) * per_octave));
    for (int k = -K; k <= K; ++k) {
        const double l = std::exp2(double(k) / per_octave);
        for (double s : {1.0, -1.0}) {
            if (s < 0.0 && !both_sides) continue;
            const double x = s * l, h = rel_step * l;
            const cplx v = g(x);
            const cplx d = (g(x + h) - g(x - h)) / (2.0 * h);
            if (!finite(v) || !finite(d)) {
                r.sup_g = r.sup_lg = r.value = std::numeric_limits<double>::infinity();
                return r;
            }
            r.sup_g = std::max(r.sup_g, std::abs(v));
            r.sup_lg = std::max(r.sup_lg, l * std::abs(d));
        }
    }
    r.value = r.sup_g + r.sup_lg;
    return r;
}

OperatorApplication apply_multiplier_operator(const JacobiParameters& p, const MultiplierSpec& m,
                                              const SampledRadialFunction& f, double pexp,
                                              const SpectralGridPtr& sgrid) {
    auto fh = jacobi_transform(p, f, sgrid);
    for (std::size_t j = 0; j < fh.values.size(); ++j) fh.values[j] *= m(sgrid->nodes[j]);
    OperatorApplication out;
    out.Tf = inverse_transform(p, fh, f.grid);
    out.norm_f = lp_norm(f, pexp);
    out.norm_Tf = lp_norm(out.Tf, pexp);
    out.ratio = ratio_or_skip(out.norm_Tf, out.norm_f);
    return out;
}

OperatorNormEstimate estimate_operator_norm(const JacobiParameters& p, const MultiplierSpec& m, double pexp,
                                            int trials, std::uint64_t seed, const RadialGridPtr& rgrid,
                                            const SpectralGridPtr& sgrid) {
    if (trials < 1) throw DomainError("estimate_operator_norm: trials must be >= 1");
    if (!(pexp > 1.0) || std::isinf(pexp)) throw DomainError("estimate_operator_norm: p must lie in (1, inf)");
    OperatorNormEstimate est;
    est.p = pexp;
    est.trials = trials;
    est.seed = seed;
    std::mt19937_64 rng(seed);
    const double rho2 = p.rho * p.rho;
    for (int trial = 0; trial < trials; ++trial) {
        double ratio = 0.0;
        std::string what;
        const int kind = trial % 3;
        try {
            if (kind == 1) {
                const double x = uniform(rng, 0.2, 3.0), s = uniform(rng, 0.05, 0.5);
                what = fmt("heat(x=%.6g, s=%.6g)", x, s);
                SampledSpectralFunction fh{sgrid, std::vector<cplx>(sgrid->size())};
                for (std::size_t j = 0; j < sgrid->size(); ++j) {
                    const double l = sgrid->nodes[j];
                    fh.values[j] = jacobi_phi(p, l, x) * std::exp(-s * (l * l + rho2));
                }
                const auto f = inverse_transform(p, fh, rgrid);
                for (std::size_t j = 0; j < sgrid->size(); ++j) fh.values[j] *= m(sgrid->nodes[j]);
                const auto Tf = inverse_transform(p, fh, rgrid);
                ratio = ratio_or_skip(lp_norm(Tf, pexp), lp_norm(f, pexp));
            } else {
                std::vector<std::array<double, 3>> bumps;
                double freq = 0.0;
                if (kind == 0) {
                    const int n = 1 + static_cast<int>(uniform(rng, 0.0, 4.0));
                    for (int b = 0; b < n; ++b) {
                        const double c = uniform(rng, 0.0, 4.0), sg = uniform(rng, 0.2, 0.5);
                        bumps.push_back({c, sg, uniform(rng, -1.0, 1.0)});
                    }
                    what = "bumps(n=" + std::to_string(n);
                    for (const auto& b : bumps) what += fmt("; c=%.6g s=%.6g a=%.6g", b[0], b[1], b[2]);
                    what += ")";
                } else {
                    const double c = uniform(rng, 0.0, 4.0), sg = uniform(rng, 0.2, 0.5);
                    freq = uniform(rng, 0.0, 15.0);
                    bumps.push_back({c, sg, 1.0});
                    what = fmt("modulated(c=%.6g, s=%.6g, w=%.6g)", c, sg, freq);
                }
                ratio = apply_multiplier_operator(p, m, even_bumps(rgrid, bumps, freq), pexp, sgrid).ratio;
            }
        } catch (const DecayError&) {
            ++est.skipped;
            continue;
        }
        if (ratio > est.lower_bound) {
            est.lower_bound = ratio;
            est.witness = what;
        }
    }
    return est;
}

HeatLadder heat_ladder(const JacobiParameters& p, const MultiplierSpec& m, double pexp, int trials,
                       std::uint64_t seed, const RadialGridPtr& rgrid, const SpectralGridPtr& sgrid,
                       const std::vector<double>& s_values) {
    if (s_values.size() < 2) throw DomainError("heat_ladder: needs two or more steps");
    HeatLadder out;
    out.s = s_values;
    for (double s : s_values)
        out.estimates.push_back(
            estimate_operator_norm(p, heat_regularize(p, m, s), pexp, trials, seed, rgrid, sgrid).lower_bound);
    out.unregularized = estimate_operator_norm(p, m, pexp, trials, seed, rgrid, sgrid).lower_bound;
    // log E(s) is close to linear in s since the regularizer is exp(-s(l^2 + rho^2));
    // extrapolate it through the two smallest steps.
    std::vector<std::size_t> idx(out.s.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return out.s[a] < out.s[b]; });
    const std::vector<double> xs{out.s[idx[0]], out.s[idx[1]]};
    const std::vector<cplx> ys{std::log(out.estimates[idx[0]]), std::log(out.estimates[idx[1]])};
    out.extrapolated = std::exp(neville_at_zero(xs, ys).real());
    out.rel_gap = std::abs(out.extrapolated - out.unregularized) / out.unregularized;
    out.monotone = true;
    for (std::size_t i = 1; i < out.s.size(); ++i)
        if ((out.s[i] < out.s[i - 1]) != (out.estimates[i] >= out.estimates[i - 1])) out.monotone = false;
    return out;
}

std::vector<MultiplierSpec> standard_family(const JacobiParameters& p) {
    const std::pair<const char*, const char*> members[] = {
        {"gauss-0.05", "exp(-0.05*lambda^2)/omega(lambda)"},
        {"gauss-0.1", "exp(-0.1*lambda^2)/omega(lambda)"},
        {"gauss-0.2", "exp(-0.2*lambda^2)/omega(lambda)"},
        {"gauss-cos", "exp(-0.1*lambda^2)*cos(lambda)/omega(lambda)"},
        {"gauss-rational", "exp(-0.1*lambda^2)*(lambda^2+1)/(lambda^2+4*rho^2)/omega(lambda)"},
    };
    std::vector<MultiplierSpec> out;
    for (const auto& [label, expr] : members)
        out.push_back(multiplier_from_expression(p, expr, label, DecayClass::rapidly_decreasing));
    return out;
}

ProbeResult theorem_ratio_experiment(const JacobiParameters& p, const std::vector<MultiplierSpec>& family,
                                     const ProbeOptions& opts) {
    opts.grids.validate();
    opts.refined.validate();
    const auto rg = make_radial_grid(p, opts.grids.T_max, opts.grids.radial_panels, opts.grids.radial_order);
    const auto sg = make_spectral_grid(p, opts.grids.Lambda_max, opts.grids.spectral_panels, opts.grids.spectral_order);
    const auto rg2 = make_radial_grid(p, opts.refined.T_max, opts.refined.radial_panels, opts.refined.radial_order);
    const auto sg2 =
        make_spectral_grid(p, opts.refined.Lambda_max, opts.refined.spectral_panels, opts.refined.spectral_order);

    ProbeResult res;
    for (const auto& m : family) {
        ProbeRow row;
        row.experiment = opts.experiment;
        row.member = m.label;
        row.p = opts.p;
        row.flags.push_back("proxy=mihlin-surrogate");
        if (!m.even || evenness_defect(m) > kEvennessTolerance) {
            row.flags.push_back("not-even");
            row.included = false;
        }
        auto wm = [&](cplx l) { return omega(p, l) * m(l); };
        if (row.included && !std::isfinite(strip_sup(p, wm))) {
            row.flags.push_back("unbounded-on-strip");
            row.included = false;
        }
        if (row.included) {
            try {
                row.proxy_norm =
                    mihlin_proxy_norm([&](double x) { return boundary_value(wm, x, p.rho); }, opts.proxy_Lambda, true)
                        .value;
            } catch (const ConvergenceError&) {
                row.flags.push_back("no-boundary-trace");
                row.included = false;
            }
        }
        if (row.included) {
            row.lower_bound = estimate_operator_norm(p, m, opts.p, opts.trials, opts.seed, rg, sg).lower_bound;
            row.refined_lower_bound = estimate_operator_norm(p, m, opts.p, opts.trials, opts.seed, rg2, sg2).lower_bound;
            row.ratio = row.lower_bound / row.proxy_norm;
            row.refined_ratio = row.refined_lower_bound / row.proxy_norm;
            row.stable = std::abs(row.refined_ratio - row.ratio) <= opts.stability_tolerance * row.ratio;
            for (double l : sg->nodes) row.sup_m = std::max(row.sup_m, std::abs(m(l)));
            if (opts.p == 2.0 && row.lower_bound > row.sup_m + 1e-6) row.flags.push_back("plancherel-ceiling-exceeded");
            if (!row.stable) row.flags.push_back("refinement-unstable");
            if (!std::isfinite(row.ratio) || !(row.ratio > 0.0)) {
                row.flags.push_back("non-finite");
                res.all_finite = false;
            }
            res.all_stable = res.all_stable && row.stable;
            if (std::isfinite(row.ratio)) res.max_ratio = std::max(res.max_ratio, row.ratio);
        }
        res.rows.push_back(row);
    }
    return res;
}

}  // namespace jacobi
