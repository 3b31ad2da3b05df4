#include <cmath>
#include <random>

#include "doctest.h"
#include "jacobi/convolution.hpp"
#include "jacobi/errors.hpp"
#include "support.hpp"

using namespace jacobi;
using namespace testsupport;

namespace {

const JacobiParameters generic = JacobiParameters::preset("generic");

// Kernel with its 2F1 factor written as the Euler integral in y.
double kernel_oracle(const JacobiParameters& p, double s, double t, double u) {
    const double a = p.alpha, b = p.beta;
    const double cs = std::cosh(s), ct = std::cosh(t), cu = std::cosh(u);
    const double B = (cs * cs + ct * ct + cu * cu - 1.0) / (2.0 * cs * ct * cu);
    if (!(std::abs(B) < 1.0)) return 0.0;
    const double z = 0.5 * (1.0 - B);
    const double integral = tanh_sinh(
        [&](double y) { return std::pow(y, a - b - 1.0) * std::pow(1.0 - y, b - 0.5) * std::pow(1.0 - z * y, -(a + b)); },
        0.0, 1.0);
    const double c = std::exp(-2.0 * p.rho * std::log(2.0) + std::lgamma(a + 1.0) - 0.5 * std::log(std::numbers::pi) -
                              std::lgamma(a - b) - std::lgamma(b + 0.5));
    return c * std::pow(cs * ct * cu, a - b - 1.0) / std::pow(std::sinh(s) * std::sinh(t) * std::sinh(u), 2 * a) *
           std::pow(1.0 - B * B, a - 0.5) * integral;
}

RadialGridPtr conv_grid(const JacobiParameters& p) { return make_radial_grid(p, 10.0, 50, 8); }

}  // namespace

TEST_CASE("kernel support and symmetry") {
    CHECK(kernel_K(generic, 0.5, 0.7, 1.3).value == 0.0);
    CHECK_FALSE(kernel_K(generic, 0.5, 0.7, 1.3).in_support);
    CHECK_FALSE(kernel_K(generic, 0.5, 2.7, 1.3).in_support);
    const double k = kernel_K(generic, 0.8, 1.1, 1.5).value;
    CHECK(k > 0);
    CHECK(kernel_K(generic, 1.1, 0.8, 1.5).value == doctest::Approx(k).epsilon(1e-13));
    CHECK(kernel_K(generic, 1.5, 1.1, 0.8).value == doctest::Approx(k).epsilon(1e-13));
    CHECK_THROWS_AS(kernel_K(generic, 0.0, 1.0, 1.0), DomainError);
    int outside = 0, nonzero = 0;
    for (int i = 1; i <= 100; ++i)
        for (int j = 1; j <= 100; ++j) {
            const double s = 0.05 * i, t = 0.05 * j, u = 0.037 * (i + j) + 0.011;
            const auto e = kernel_K(generic, s, t, u);
            if (!e.in_support) {
                ++outside;
                nonzero += e.value != 0.0;
            }
        }
    CHECK(outside > 0);
    CHECK(nonzero == 0);
}

TEST_CASE("kernel against the Euler-integral oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.2, 3.0), V(0.0, 1.0);
    for (const auto& p : {generic, JacobiParameters::preset("damek-ricci-like")}) {
        for (int n = 0; n < 20; ++n) {
            const double s = U(rng), t = U(rng);
            const double u = std::abs(s - t) + (s + t - std::abs(s - t)) * (0.02 + 0.96 * V(rng));
            const double ref = kernel_oracle(p, s, t, u);
            CHECK(std::abs(kernel_K(p, s, t, u).value - ref) <= 1e-9 * std::abs(ref));
        }
    }
}

TEST_CASE("kernel mass and product formula") {
    CHECK(std::abs(translate_at(generic, [](double) { return cplx(1); }, 1.0, 1.4) - 1.0) < 1e-5);
    for (double l : {1.0, 3.0, 7.0})
        for (double x : {0.5, 1.2, 2.0})
            for (double y : {0.5, 1.2, 2.0}) {
                const cplx lhs = jacobi_phi(generic, l, x) * jacobi_phi(generic, l, y);
                const cplx rhs = translate_at(generic, [&](double z) { return jacobi_phi(generic, l, z); }, x, y);
                CHECK(std::abs(lhs - rhs) < 1e-5 * std::abs(lhs));
            }
}

TEST_CASE("translation tends to the identity") {
    const auto r = conv_grid(generic);
    const auto f = sample(r, bump({2.0, 0.3, false}));
    CHECK(relative_l2_error(translate(generic, f, 1e-3), f) < 1e-3);
}

TEST_CASE("convolution laws") {
    const auto r = conv_grid(generic);
    const auto s = make_spectral_grid(generic, 50.0, 150, 8);
    const auto f = sample(r, bump({1.5, 0.3, false})), g = sample(r, bump({0.0, 0.4, false}));
    const auto fg = convolve(generic, f, g), gf = convolve(generic, g, f);
    SampledRadialFunction d{r, {}};
    for (std::size_t i = 0; i < r->size(); ++i) d.values.push_back(fg.values[i] - gf.values[i]);
    CHECK(l2_norm(d) < 1e-6 * l2_norm(fg));

    const auto t1 = jacobi_transform(generic, fg, s), t2 = jacobi_transform(generic, f, s),
               t3 = jacobi_transform(generic, g, s);
    double num = 0, den = 0;
    for (std::size_t j = 0; j < s->size(); ++j) {
        num += std::norm(t1.values[j] - t2.values[j] * t3.values[j]) * s->nu_weights[j];
        den += std::norm(t2.values[j] * t3.values[j]) * s->nu_weights[j];
    }
    CHECK(std::sqrt(num / den) < 1e-4);
}

TEST_CASE("heat semigroup through convolution") {
    const auto r = conv_grid(generic);
    const auto s = make_spectral_grid(generic);
    const auto h = convolve(generic, heat_kernel(generic, 0.3, r, s), heat_kernel(generic, 0.5, r, s));
    CHECK(relative_l2_error(h, heat_kernel(generic, 0.8, r, s)) < 1e-4);
}

TEST_CASE("Young inequality") {
    const auto r = conv_grid(generic);
    const auto s = make_spectral_grid(generic);
    const auto f = sample(r, bump({1.5, 0.3, false})), g = sample(r, bump({2.5, 0.25, false}));
    CHECK(young_check(generic, f, g, 1, 1).ratio <= 1.001);
    CHECK(young_check(generic, f, g, 2, 1).ratio <= 1.001);
    const auto h = heat_kernel(generic, 0.5, r, s);
    const auto rep = young_check(generic, h, h, 2, 2);
    CHECK(std::isinf(rep.r));
    CHECK(rep.ratio <= 1.001);
    CHECK(std::isinf(young_exponent(2, 2)));
    CHECK(young_exponent(2, 1) == doctest::Approx(2.0));
    CHECK_THROWS_AS(young_exponent(0.5, 1), ParameterError);
    CHECK_THROWS_AS(young_exponent(INFINITY, INFINITY), ParameterError);
}

TEST_CASE("convolution budget") {
    const auto r = make_radial_grid(generic);
    const auto f = sample(r, bump({1.5, 0.3, false}));
    CHECK_THROWS_AS(convolve(generic, f, f), BudgetError);
}
