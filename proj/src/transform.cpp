#include "jacobi/transform.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <list>
#include <mutex>
#include <numbers>
#include <thread>

#include "jacobi/errors.hpp"
#include "jacobi/quadrature.hpp"

namespace jacobi {
namespace {

std::uint64_t next_grid_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter++;
}

double max_abs(const std::vector<cplx>& v, std::size_t from = 0) {
    double m = 0.0;
    for (std::size_t i = from; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

// Values in the last panel must be negligible against the global maximum.
void check_decay(const std::vector<cplx>& values, std::size_t tail_start, const char* what) {
    const double peak = max_abs(values);
    if (peak == 0.0) return;
    const double tail = max_abs(values, tail_start);
    if (!(tail < kDecayTolerance * peak))
        throw DecayError(std::string(what) + ": samples do not decay (tail/max = " + std::to_string(tail / peak) +
                         ")");
}

std::size_t tail_start(std::size_t n, int order) {
    const std::size_t k = static_cast<std::size_t>(std::max(order, 1));
    return n > k ? n - k : 0;
}

// Fornberg finite-difference weights for derivatives 0..2 at z.
void fornberg_weights(double z, const double* x, int n, double c[3][16]) {
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < n; ++j) c[k][j] = 0.0;
    double c1 = 1.0, c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, 2);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
}

void require_same_params(const JacobiParameters& a, const JacobiParameters& b) {
    if (a.alpha != b.alpha || a.beta != b.beta)
        throw ParameterError("grid was built for different Jacobi parameters");
}

}  // namespace

void GridConfig::validate() const {
    if (!(T_max > 0.0) || !(Lambda_max > 0.0)) throw ParameterError("grid extents must be positive");
    if (radial_panels < 2 || spectral_panels < 2) throw ParameterError("need at least two panels per grid");
    if (radial_order < 2 || radial_order > 32 || spectral_order < 2 || spectral_order > 32)
        throw ParameterError("panel order must lie in [2, 32]");
}

RadialGridPtr make_radial_grid(const JacobiParameters& p, double T_max, int panels, int order, RadialScheme scheme) {
    if (!(T_max > 0.0) || panels < 2 || order < 1) throw ParameterError("make_radial_grid: invalid grid parameters");
    auto g = std::make_shared<RadialGrid>();
    g->params = p;
    g->T_max = T_max;
    g->order = order;
    g->scheme = scheme;
    g->id = next_grid_id();
    if (scheme == RadialScheme::graded_gauss) {
        // A quarter of the panels graded quadratically on (0, T_max/10], the
        // rest uniform.
        const int near = std::max(1, (panels + 3) / 4);
        const int far = std::max(1, panels - near);
        const double t1 = T_max / 10.0;
        g->edges.push_back(0.0);
        for (int k = 1; k <= near; ++k) {
            const double u = double(k) / near;
            g->edges.push_back(t1 * u * u);
        }
        for (int k = 1; k <= far; ++k) g->edges.push_back(t1 + (T_max - t1) * double(k) / far);
        g->edges.back() = T_max;
        const auto rule = quad::composite_gauss_legendre(g->edges, order);
        g->nodes = rule.x;
        g->base_weights = rule.w;
    } else {
        const int n = panels * order;
        const double h = T_max / n;
        for (int i = 1; i <= n; ++i) {
            g->nodes.push_back(h * i);
            g->base_weights.push_back(i == n ? 0.5 * h : h);
        }
    }
    for (std::size_t i = 0; i < g->nodes.size(); ++i)
        g->mu_weights.push_back(g->base_weights[i] * weight_density(p, g->nodes[i]));
    return g;
}

SpectralGridPtr make_spectral_grid(const JacobiParameters& p, double Lambda_max, int panels, int order) {
    if (!(Lambda_max > 0.0) || panels < 1 || order < 1)
        throw ParameterError("make_spectral_grid: invalid grid parameters");
    auto g = std::make_shared<SpectralGrid>();
    g->params = p;
    g->Lambda_max = Lambda_max;
    g->order = order;
    g->id = next_grid_id();
    for (int k = 0; k <= panels; ++k) g->edges.push_back(Lambda_max * double(k) / panels);
    const auto rule = quad::composite_gauss_legendre(g->edges, order);
    g->nodes = rule.x;
    g->base_weights = rule.w;
    for (std::size_t j = 0; j < g->nodes.size(); ++j)
        g->nu_weights.push_back(g->base_weights[j] * plancherel_density(p, g->nodes[j]) / (2.0 * std::numbers::pi));
    return g;
}

SampledRadialFunction sample(RadialGridPtr grid, const std::function<cplx(double)>& f) {
    SampledRadialFunction out{grid, {}};
    out.values.reserve(grid->size());
    for (double t : grid->nodes) out.values.push_back(f(t));
    return out;
}

SampledSpectralFunction sample(SpectralGridPtr grid, const std::function<cplx(double)>& g) {
    SampledSpectralFunction out{grid, {}};
    out.values.reserve(grid->size());
    for (double l : grid->nodes) out.values.push_back(g(l));
    return out;
}

PhiMatrix::PhiMatrix(RadialGridPtr rgrid, SpectralGridPtr sgrid)
    : rows_(sgrid->size()), cols_(rgrid->size()), data_(rows_ * cols_) {
    require_same_params(rgrid->params, sgrid->params);
    const JacobiParameters p = rgrid->params;
    auto fill_rows = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t j = begin; j < rows_; j += stride) {
            PhiEvaluator ev(p, sgrid->nodes[j]);
            double* r = data_.data() + j * cols_;
            for (std::size_t i = 0; i < cols_; ++i) r[i] = ev(rgrid->nodes[i]).real();
        }
    };
    const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    if (workers == 1) {
        fill_rows(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(fill_rows, w, workers);
        for (auto& th : pool) th.join();
    }
}

namespace {
std::mutex cache_mu;
std::list<std::pair<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<const PhiMatrix>>> cache;
constexpr std::size_t kCacheSize = 6;
}  // namespace

std::shared_ptr<const PhiMatrix> phi_matrix(const RadialGridPtr& rgrid, const SpectralGridPtr& sgrid) {
    const auto key = std::make_pair(rgrid->id, sgrid->id);
    {
        std::lock_guard<std::mutex> lock(cache_mu);
        for (auto it = cache.begin(); it != cache.end(); ++it) {
            if (it->first == key) {
                cache.splice(cache.begin(), cache, it);
                return cache.front().second;
            }
        }
    }
    auto m = std::make_shared<const PhiMatrix>(rgrid, sgrid);
    std::lock_guard<std::mutex> lock(cache_mu);
    cache.emplace_front(key, m);
    while (cache.size() > kCacheSize) cache.pop_back();
    return m;
}

void clear_phi_cache() {
    std::lock_guard<std::mutex> lock(cache_mu);
    cache.clear();
}

SampledSpectralFunction jacobi_transform(const JacobiParameters& p, const SampledRadialFunction& f,
                                         const SpectralGridPtr& sgrid) {
    const auto& rg = *f.grid;
    require_same_params(p, rg.params);
    require_same_params(p, sgrid->params);
    if (f.values.size() != rg.size()) throw DomainError("jacobi_transform: sample count does not match grid");
    check_decay(f.values, tail_start(rg.size(), rg.order), "jacobi_transform");
    const auto phi = phi_matrix(f.grid, sgrid);
    std::vector<cplx> fw(rg.size());
    for (std::size_t i = 0; i < rg.size(); ++i) fw[i] = f.values[i] * rg.mu_weights[i];
    SampledSpectralFunction out{sgrid, std::vector<cplx>(sgrid->size())};
    for (std::size_t j = 0; j < sgrid->size(); ++j) {
        const double* r = phi->row(j);
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < rg.size(); ++i) {
            re += r[i] * fw[i].real();
            im += r[i] * fw[i].imag();
        }
        out.values[j] = {re, im};
    }
    return out;
}

std::vector<cplx> jacobi_transform_at(const JacobiParameters& p, const SampledRadialFunction& f,
                                      const std::vector<cplx>& lambdas) {
    const auto& rg = *f.grid;
    require_same_params(p, rg.params);
    check_decay(f.values, tail_start(rg.size(), rg.order), "jacobi_transform");
    std::vector<cplx> out;
    for (cplx l : lambdas) {
        PhiEvaluator ev(p, l);
        cplx s = 0.0;
        for (std::size_t i = 0; i < rg.size(); ++i) s += f.values[i] * ev(rg.nodes[i]) * rg.mu_weights[i];
        out.push_back(s);
    }
    return out;
}

SampledRadialFunction inverse_transform(const JacobiParameters& p, const SampledSpectralFunction& g,
                                        const RadialGridPtr& rgrid) {
    const auto& sg = *g.grid;
    require_same_params(p, sg.params);
    require_same_params(p, rgrid->params);
    if (g.values.size() != sg.size()) throw DomainError("inverse_transform: sample count does not match grid");
    check_decay(g.values, tail_start(sg.size(), sg.order), "inverse_transform");
    const auto phi = phi_matrix(rgrid, g.grid);
    std::vector<double> re(rgrid->size(), 0.0), im(rgrid->size(), 0.0);
    for (std::size_t j = 0; j < sg.size(); ++j) {
        const cplx gw = g.values[j] * sg.nu_weights[j];
        if (gw == cplx(0.0)) continue;
        const double* r = phi->row(j);
        for (std::size_t i = 0; i < rgrid->size(); ++i) {
            re[i] += r[i] * gw.real();
            im[i] += r[i] * gw.imag();
        }
    }
    SampledRadialFunction out{rgrid, std::vector<cplx>(rgrid->size())};
    for (std::size_t i = 0; i < rgrid->size(); ++i) out.values[i] = {re[i], im[i]};
    return out;
}

double l2_norm(const SampledRadialFunction& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) s += std::norm(f.values[i]) * f.grid->mu_weights[i];
    return std::sqrt(s);
}

double l2_norm(const SampledSpectralFunction& g) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.values.size(); ++j) s += std::norm(g.values[j]) * g.grid->nu_weights[j];
    return std::sqrt(s);
}

double lp_norm(const SampledRadialFunction& f, double p) {
    if (std::isinf(p)) return max_abs(f.values);
    if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        s += std::pow(std::abs(f.values[i]), p) * f.grid->mu_weights[i];
    return std::pow(s, 1.0 / p);
}

double plancherel_defect(const JacobiParameters& p, const SampledRadialFunction& f, const SpectralGridPtr& sgrid) {
    const double nf = l2_norm(f);
    if (nf == 0.0) throw DomainError("plancherel_defect: zero function");
    const double ng = l2_norm(jacobi_transform(p, f, sgrid));
    return std::abs(nf - ng) / nf;
}

double relative_l2_error(const SampledRadialFunction& f, const SampledRadialFunction& g) {
    if (f.grid != g.grid && f.grid->id != g.grid->id) throw DomainError("relative_l2_error: different grids");
    SampledRadialFunction d{f.grid, f.values};
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= g.values[i];
    const double ng = l2_norm(g);
    if (ng == 0.0) throw DomainError("relative_l2_error: reference is zero");
    return l2_norm(d) / ng;
}

SampledSpectralFunction heat_multiplier(const SpectralGridPtr& sgrid, double s) {
    if (!(s > 0.0)) throw DomainError("heat multiplier: s must be > 0");
    const double rho = sgrid->params.rho;
    return sample(sgrid, [&](double l) { return cplx(std::exp(-s * (l * l + rho * rho))); });
}

SampledRadialFunction heat_kernel(const JacobiParameters& p, double s, const RadialGridPtr& rgrid,
                                  const SpectralGridPtr& sgrid) {
    if (!(s > 0.0)) throw DomainError("heat_kernel: s must be > 0");
    return inverse_transform(p, heat_multiplier(sgrid, s), rgrid);
}

SampledRadialFunction apply_laplacian(const JacobiParameters& p, const SampledRadialFunction& f) {
    const auto& g = *f.grid;
    const std::size_t n = g.size();
    if (n < 16) throw DomainError("apply_laplacian: grid too coarse (fewer than 16 nodes)");
    // even extension: mirrored nodes first, then the grid
    std::vector<double> x(2 * n);
    std::vector<cplx> v(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        x[n - 1 - i] = -g.nodes[i];
        v[n - 1 - i] = f.values[i];
        x[n + i] = g.nodes[i];
        v[n + i] = f.values[i];
    }
    constexpr int kStencil = 9;
    SampledRadialFunction out{f.grid, std::vector<cplx>(n)};
    double c[3][16];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t centre = n + i;
        std::size_t lo = centre, hi = centre;  // inclusive window
        while (hi - lo + 1 < kStencil) {
            const bool can_left = lo > 0, can_right = hi + 1 < 2 * n;
            if (can_left && (!can_right || x[centre] - x[lo - 1] <= x[hi + 1] - x[centre]))
                --lo;
            else
                ++hi;
        }
        const double t = g.nodes[i];
        fornberg_weights(t, x.data() + lo, kStencil, c);
        cplx d1 = 0.0, d2 = 0.0;
        for (int k = 0; k < kStencil; ++k) {
            d1 += c[1][k] * v[lo + k];
            d2 += c[2][k] * v[lo + k];
        }
        const double drift = (2 * p.alpha + 1) / std::tanh(t) + (2 * p.beta + 1) * std::tanh(t);
        out.values[i] = d2 + drift * d1;
    }
    return out;
}

RadialInterpolator::RadialInterpolator(const SampledRadialFunction& f) : grid_(f.grid), values_(f.values) {
    if (grid_->scheme == RadialScheme::graded_gauss) {
        const auto& ref = quad::gauss_legendre(grid_->order);
        const int n = grid_->order;
        bary_.resize(n);
        for (int k = 0; k < n; ++k) {
            double prod = 1.0;
            for (int m = 0; m < n; ++m)
                if (m != k) prod *= ref.x[k] - ref.x[m];
            bary_[k] = 1.0 / prod;
        }
    }
}

cplx RadialInterpolator::operator()(double t) const {
    t = std::abs(t);
    const auto& g = *grid_;
    if (t > g.T_max) return 0.0;
    if (g.scheme == RadialScheme::graded_gauss) {
        const auto it = std::upper_bound(g.edges.begin(), g.edges.end(), t);
        std::size_t panel = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - g.edges.begin()) - 1));
        panel = std::min(panel, g.edges.size() - 2);
        const std::size_t base = panel * g.order;
        cplx num = 0.0;
        double den = 0.0;
        for (int k = 0; k < g.order; ++k) {
            const double d = t - g.nodes[base + k];
            if (d == 0.0) return values_[base + k];
            const double w = bary_[k] / d;
            num += w * values_[base + k];
            den += w;
        }
        return num / den;
    }
    // uniform grid: local cubic Lagrange
    const double h = g.nodes[1] - g.nodes[0];
    const long n = static_cast<long>(g.size());
    long i0 = static_cast<long>(std::floor(t / h)) - 2;  // node index of t = h(i+1)
    i0 = std::clamp(i0, 0L, n - 4);
    cplx s = 0.0;
    for (int k = 0; k < 4; ++k) {
        double w = 1.0;
        for (int m = 0; m < 4; ++m)
            if (m != k) w *= (t - g.nodes[i0 + m]) / (g.nodes[i0 + k] - g.nodes[i0 + m]);
        s += w * values_[i0 + k];
    }
    return s;
}

}  // namespace jacobi
