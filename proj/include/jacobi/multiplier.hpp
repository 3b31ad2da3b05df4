#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jacobi/transform.hpp"

namespace jacobi {

// (lambda^2 + 4 rho^2)^{alpha + 1/4}, principal branch.
cplx omega(const JacobiParameters& p, cplx lambda);
// c(-lambda)^{-1}; vanishes where Gamma(-i lambda) has a pole.
cplx inverse_c_minus(const JacobiParameters& p, cplx lambda);
// 1 / (omega(lambda) c(lambda))
cplx w_function(const JacobiParameters& p, cplx lambda);

enum class DecayClass { rapidly_decreasing, bounded };

const char* to_string(DecayClass d);
DecayClass decay_class_from_string(const std::string& s);

struct MultiplierSpec {
    std::function<cplx(cplx)> evaluate;
    bool even = true;
    DecayClass decay = DecayClass::bounded;
    std::string label;
    std::string expression;  // source text when compiled from a manifest

    cplx operator()(cplx lambda) const { return evaluate(lambda); }
};

MultiplierSpec multiplier_from_expression(const JacobiParameters& p, const std::string& expression,
                                          const std::string& label, DecayClass decay);
MultiplierSpec constant_multiplier(double value, const std::string& label = "const");

// max |m(l) - m(-l)| / max(1, |m(l)|) over a real grid on [0, Lambda].
double evenness_defect(const MultiplierSpec& m, double Lambda = 50.0, int samples = 400);
constexpr double kEvennessTolerance = 1e-12;

// sup |g| over a lattice in |Re| <= Lambda, |Im| <= 0.999 rho.
double strip_sup(const JacobiParameters& p, const std::function<cplx(cplx)>& g, double Lambda = 50.0);

cplx modified_multiplier(const JacobiParameters& p, const MultiplierSpec& m, cplx lambda);

struct BoundaryTrace {
    double height = 0;
    std::vector<double> nodes;
    std::vector<cplx> samples;
    std::vector<double> approach;  // decreasing epsilon ladder
    double cauchy_gap = 0;         // worst |T_full - T_previous| / max(1, |T_full|)
};

std::vector<double> default_approach_ladder();
constexpr double kTraceTolerance = 1e-8;

// Limit of g(x + i(height - eps)) as eps -> 0, by Neville extrapolation over
// a prefix of the ladder (at least three steps). Steps are added until two
// successive diagonal estimates agree to kTraceTolerance; ConvergenceError if
// the ladder runs out first.
cplx boundary_value(const std::function<cplx(cplx)>& g, double x, double height,
                    const std::vector<double>& ladder = default_approach_ladder(), double* gap = nullptr);
BoundaryTrace boundary_trace(const std::function<cplx(cplx)>& g, double height, const std::vector<double>& nodes,
                             const std::vector<double>& ladder = default_approach_ladder());

struct CutoffPair {
    double R0 = kDefaultR0;

    static CutoffPair make(double R0 = kDefaultR0);
    // 1 on |t| <= sqrt(R0), 0 on |t| >= R0
    double psi(double t) const;
    // 1 on |lambda| <= 1/R0, 0 on |lambda| >= 2/R0
    double phi(double lambda) const;
};

SampledRadialFunction kernel_from_multiplier(const JacobiParameters& p, const MultiplierSpec& m,
                                             const RadialGridPtr& rgrid, const SpectralGridPtr& sgrid);
// m(lambda) exp(-s (lambda^2 + rho^2))
MultiplierSpec heat_regularize(const JacobiParameters& p, const MultiplierSpec& m, double s);

struct KernelSplit {
    SampledRadialFunction local;   // psi k
    SampledRadialFunction global;  // (1 - psi) k
};

KernelSplit split_kernel(const JacobiParameters& p, const SampledRadialFunction& k, const CutoffPair& cutoffs);

struct DeltaExpansion {
    int J = 0;  // number of coefficients minus one
    int n_alpha = 0, n_beta = 0;
    double frac_alpha = 0, frac_beta = 0;
    std::vector<double> coefficients;
    double delta_factor = 0;
    double reconstruction = 0;
    double exact = 0;
};

// Delta(t) = e^{2 rho t} sum_j c_j delta(t) e^{-2jt} with integer parts of
// 2 alpha + 1 and 2 beta + 1 expanded binomially.
DeltaExpansion delta_expansion(const JacobiParameters& p, double t);

// a_l^+(t) and a_l^-(t)
double a_plus(const JacobiParameters& p, const CutoffPair& cutoffs, int ell, double t);
double a_minus(const JacobiParameters& p, const CutoffPair& cutoffs, int ell, double t);
// sup over t <= 0 of |a_l^-|
double a_minus_sup(const JacobiParameters& p, const CutoffPair& cutoffs, int ell);

// Real-line quadrature for the lambda integrals of the global analysis.
struct LineQuadrature {
    std::vector<double> x, w;
    double L = 0;
};

LineQuadrature line_quadrature(const JacobiParameters& p, const MultiplierSpec& m, double panel_width = 0.125);

struct GlobalPieces {
    std::vector<double> t;
    int ell_max = 0;
    int J = 0;
    std::vector<double> c;                          // Delta expansion coefficients
    std::vector<std::vector<double>> a_plus;        // [l][i]
    std::vector<std::vector<double>> a_minus;       // [l][i]
    std::vector<std::vector<cplx>> b_plus;          // [k][i]
    std::vector<std::vector<cplx>> b_minus;         // [k][i]
    std::vector<std::vector<std::vector<cplx>>> K;  // [l][j][i]
    std::vector<cplx> target;                       // (1 - psi) k Delta
    std::vector<cplx> reconstruction;
    std::vector<double> rel_error;
    double max_rel_error = 0;
    bool within_tolerance = false;
};

constexpr double kReconstructionTolerance = 1e-4;

GlobalPieces hc_global_pieces(const JacobiParameters& p, const MultiplierSpec& m, int ell_max,
                              const std::vector<double>& t_nodes, const SpectralGridPtr& sgrid,
                              const CutoffPair& cutoffs = CutoffPair::make());
// Worst relative error of the reconstruction truncated at l <= L.
double truncated_reconstruction_error(const GlobalPieces& g, int L);

struct EtaCheck {
    std::vector<double> t;
    std::vector<cplx> direct;      // a_0^- b_0^- + a_0^+ b_0^+
    std::vector<cplx> recombined;  // F(M_rho) + eta_+ F(M) + F(H_rho) + eta_- F(H)
    double max_rel_defect = 0;
};

EtaCheck eta_recombination(const JacobiParameters& p, const MultiplierSpec& m, const std::vector<double>& t_nodes,
                           const CutoffPair& cutoffs = CutoffPair::make());

struct ContourShift {
    int k = 0;
    double t = 0;
    int sign = 1;
    cplx direct;
    std::array<double, 3> R{10.0, 100.0, 1000.0};
    std::array<cplx, 3> shifted;  // integral along Im lambda = rho (1 - 1/R)
    std::array<double, 3> edge;   // |vertical side contributions|
    double defect = 0;
};

ContourShift contour_shift_check(const JacobiParameters& p, const MultiplierSpec& m, int k, double t, int sign = 1);

struct HormanderReport {
    double sup_g = 0;
    double sup_lg1 = 0;  // sup |lambda g'|
    double sup_l2g2 = 0; // sup |lambda^2 g''|
    double step = 0;
    bool noise_warning = false;
};

constexpr double kNoiseStepThreshold = 1e-6;

HormanderReport hormander_check(const std::function<cplx(double)>& g, double Lambda_min = 1.0,
                                double Lambda_max = 400.0, int samples = 400, double rel_step = 1e-3);

// (1 - Phi(lambda)) |lambda|^{-s} c(lambda)^{-1} with s = alpha + 1/2
cplx p_s_function(const JacobiParameters& p, const CutoffPair& cutoffs, double lambda);

struct WSlopes {
    PowerFit w;
    PowerFit dw;
    double lo = 0, hi = 0;
};

WSlopes w_slope_fit(const JacobiParameters& p, double lo = 40.0, double hi = 400.0, int samples = 60);

struct MihlinProxy {
    double value = 0;
    double sup_g = 0;
    double sup_lg = 0;
    bool noise_warning = false;
};

// sup |g| + sup |lambda g'| over a dyadic grid in [1/Lambda, Lambda]; with
// both_sides the negative half-line is included. Upper-bound surrogate for
// the M_p(R) norm, not the norm itself.
MihlinProxy mihlin_proxy_norm(const std::function<cplx(double)>& g, double Lambda_max, bool both_sides = false,
                              int per_octave = 16, double rel_step = 1e-4);

struct OperatorApplication {
    SampledRadialFunction Tf;
    double norm_f = 0, norm_Tf = 0, ratio = 0;
};

OperatorApplication apply_multiplier_operator(const JacobiParameters& p, const MultiplierSpec& m,
                                              const SampledRadialFunction& f, double pexp,
                                              const SpectralGridPtr& sgrid);

struct OperatorNormEstimate {
    double p = 2;
    double lower_bound = 0;
    int trials = 0;
    int skipped = 0;
    std::uint64_t seed = 0;
    std::string witness;
};

OperatorNormEstimate estimate_operator_norm(const JacobiParameters& p, const MultiplierSpec& m, double pexp,
                                            int trials, std::uint64_t seed, const RadialGridPtr& rgrid,
                                            const SpectralGridPtr& sgrid);

struct HeatLadder {
    std::vector<double> s;
    std::vector<double> estimates;
    double extrapolated = 0;
    double unregularized = 0;
    double rel_gap = 0;
    bool monotone = false;
};

HeatLadder heat_ladder(const JacobiParameters& p, const MultiplierSpec& m, double pexp, int trials,
                       std::uint64_t seed, const RadialGridPtr& rgrid, const SpectralGridPtr& sgrid,
                       const std::vector<double>& s_values = {0.1, 0.05, 0.025});

std::vector<MultiplierSpec> standard_family(const JacobiParameters& p);

struct ProbeOptions {
    double p = 2.0;
    std::uint64_t seed = 1;
    int trials = 24;
    GridConfig grids;
    GridConfig refined{20.0, 300, 8, 50.0, 225, 8};
    double proxy_Lambda = 100.0;
    double stability_tolerance = 0.1;
    std::string experiment = "theorem-ratio";
};

struct ProbeRow {
    std::string experiment;
    std::string member;
    double p = 2;
    double lower_bound = 0;
    double proxy_norm = 0;
    double ratio = 0;
    double refined_lower_bound = 0;
    double refined_ratio = 0;
    double sup_m = 0;
    std::vector<std::string> flags;
    bool included = true;
    bool stable = true;
};

struct ProbeResult {
    std::vector<ProbeRow> rows;
    double max_ratio = 0;
    bool all_finite = true;
    bool all_stable = true;
    bool ok() const { return all_finite && all_stable; }
};

ProbeResult theorem_ratio_experiment(const JacobiParameters& p, const std::vector<MultiplierSpec>& family,
                                     const ProbeOptions& opts);

}  // namespace jacobi
