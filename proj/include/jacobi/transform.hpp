#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "jacobi/jacobi_core.hpp"

namespace jacobi {

enum class RadialScheme { graded_gauss, uniform_trapezoid };

struct RadialGrid {
    JacobiParameters params;
    std::vector<double> nodes;
    std::vector<double> base_weights;  // for dt
    std::vector<double> mu_weights;    // for dmu = Delta(t) dt
    std::vector<double> edges;         // panel edges (graded-gauss only)
    int order = 0;
    double T_max = 0;
    RadialScheme scheme = RadialScheme::graded_gauss;
    std::uint64_t id = 0;

    std::size_t size() const { return nodes.size(); }
};

struct SpectralGrid {
    JacobiParameters params;
    std::vector<double> nodes;
    std::vector<double> base_weights;  // for dlambda
    std::vector<double> nu_weights;    // for dnu = (2 pi)^{-1} |c|^{-2} dlambda
    std::vector<double> edges;
    int order = 0;
    double Lambda_max = 0;
    std::uint64_t id = 0;

    std::size_t size() const { return nodes.size(); }
};

using RadialGridPtr = std::shared_ptr<const RadialGrid>;
using SpectralGridPtr = std::shared_ptr<const SpectralGrid>;

struct GridConfig {
    double T_max = 20.0;
    int radial_panels = 200;
    int radial_order = 8;
    double Lambda_max = 50.0;
    int spectral_panels = 150;
    int spectral_order = 8;

    void validate() const;
};

RadialGridPtr make_radial_grid(const JacobiParameters& p, double T_max = 20.0, int panels = 200, int order = 8,
                               RadialScheme scheme = RadialScheme::graded_gauss);
SpectralGridPtr make_spectral_grid(const JacobiParameters& p, double Lambda_max = 50.0, int panels = 150,
                                   int order = 8);

struct SampledRadialFunction {
    RadialGridPtr grid;
    std::vector<cplx> values;
};

struct SampledSpectralFunction {
    SpectralGridPtr grid;
    std::vector<cplx> values;
};

SampledRadialFunction sample(RadialGridPtr grid, const std::function<cplx(double)>& f);
SampledSpectralFunction sample(SpectralGridPtr grid, const std::function<cplx(double)>& g);

// phi_{lambda_j}(t_i), real for real lambda; rows are spectral nodes.
class PhiMatrix {
public:
    PhiMatrix(RadialGridPtr rgrid, SpectralGridPtr sgrid);
    double operator()(std::size_t j, std::size_t i) const { return data_[j * cols_ + i]; }
    const double* row(std::size_t j) const { return data_.data() + j * cols_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

// Cached per (radial grid, spectral grid) pair.
std::shared_ptr<const PhiMatrix> phi_matrix(const RadialGridPtr& rgrid, const SpectralGridPtr& sgrid);
void clear_phi_cache();

constexpr double kDecayTolerance = 1e-10;

// f^(lambda) = int f phi_lambda dmu on the spectral nodes.
SampledSpectralFunction jacobi_transform(const JacobiParameters& p, const SampledRadialFunction& f,
                                         const SpectralGridPtr& sgrid);
// Same quadrature at arbitrary (possibly complex) lambda, evaluating phi directly.
std::vector<cplx> jacobi_transform_at(const JacobiParameters& p, const SampledRadialFunction& f,
                                      const std::vector<cplx>& lambdas);
// f(t) = int g phi_lambda(t) dnu on the radial nodes.
SampledRadialFunction inverse_transform(const JacobiParameters& p, const SampledSpectralFunction& g,
                                        const RadialGridPtr& rgrid);

double l2_norm(const SampledRadialFunction& f);
double l2_norm(const SampledSpectralFunction& g);
// L^p(dmu) norm; p = infinity gives the max over nodes.
double lp_norm(const SampledRadialFunction& f, double p);

double plancherel_defect(const JacobiParameters& p, const SampledRadialFunction& f, const SpectralGridPtr& sgrid);
// relative L^2(dmu) distance |f - g| / |g|
double relative_l2_error(const SampledRadialFunction& f, const SampledRadialFunction& g);

SampledSpectralFunction heat_multiplier(const SpectralGridPtr& sgrid, double s);
SampledRadialFunction heat_kernel(const JacobiParameters& p, double s, const RadialGridPtr& rgrid,
                                  const SpectralGridPtr& sgrid);

// L f = f'' + ((2 alpha + 1) coth t + (2 beta + 1) tanh t) f' by finite
// differences over the nearest nodes of the even extension.
SampledRadialFunction apply_laplacian(const JacobiParameters& p, const SampledRadialFunction& f);

// Panelwise Lagrange interpolation of samples on a graded-gauss grid;
// zero beyond T_max.
class RadialInterpolator {
public:
    explicit RadialInterpolator(const SampledRadialFunction& f);
    cplx operator()(double t) const;

private:
    RadialGridPtr grid_;
    std::vector<cplx> values_;
    std::vector<double> bary_;  // barycentric weights of the reference nodes
};

}  // namespace jacobi
