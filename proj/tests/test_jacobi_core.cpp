#include <cmath>
#include <numbers>

#include "doctest.h"
#include "jacobi/errors.hpp"
#include "jacobi/jacobi_core.hpp"

using namespace jacobi;
using std::numbers::pi;

namespace {

const JacobiParameters h3 = JacobiParameters::preset("h3");
const JacobiParameters generic = JacobiParameters::preset("generic");

double h3_phi(double l, double t) { return std::sin(l * t) / (l * std::sinh(t)); }

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(JacobiParameters::make(0.5, -0.5), ParameterError);
    CHECK_NOTHROW(JacobiParameters::make(0.5, -0.5, true));
    CHECK_THROWS_AS(JacobiParameters::make(1.0, 1.2), ParameterError);
    CHECK_THROWS_AS(JacobiParameters::make(1.0, -0.7, true), ParameterError);
    CHECK_THROWS_AS(JacobiParameters::preset("nope"), ParameterError);
    CHECK(generic.rho == doctest::Approx(2.5));
    CHECK(h3.relaxed);
    CHECK_FALSE(generic.relaxed);
}

TEST_CASE("weight density") {
    for (double t : {0.01, 0.5, 3.0}) CHECK(weight_density(h3, t) == doctest::Approx(4 * std::sinh(t) * std::sinh(t)).epsilon(1e-14));
    const double t = 1e-6;
    CHECK(weight_density(generic, t) / std::pow(t, 2 * generic.alpha + 1) ==
          doctest::Approx(std::pow(2.0, 2 * generic.alpha + 1) * std::pow(2.0, 2 * generic.beta + 1)).epsilon(1e-9));
    CHECK_THROWS_AS(weight_density(generic, 0.0), DomainError);
    CHECK(log_weight_density(generic, 7.0) == doctest::Approx(std::log(weight_density(generic, 7.0))).epsilon(1e-14));
}

TEST_CASE("phi normalization, evenness and trivial eigenvalue") {
    for (double l : {0.0, 0.7, 5.0, 40.0}) CHECK(std::abs(jacobi_phi(generic, l, 0.0) - 1.0) < 1e-12);
    for (double t : {0.1, 1.0, 5.0, 15.0}) {
        CHECK(std::abs(jacobi_phi(generic, cplx(0, generic.rho), t) - 1.0) < 1e-12);
        for (double l : {0.3, 2.0, 9.0}) {
            const cplx a = jacobi_phi(generic, l, t), b = jacobi_phi(generic, -l, t);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("closed form at (1/2, -1/2)") {
    CHECK(std::abs(jacobi_phi(h3, 2.0, 1.0) - std::sin(2.0) / (2.0 * std::sinh(1.0))) < 1e-12);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const double l = 0.1 + 0.2 * i, t = 0.05 + 0.16 * i;
        worst = std::max(worst, std::abs(jacobi_phi(h3, l, t) - h3_phi(l, t)));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("quadratic transformation links (a, -1/2) and (a, a)") {
    // phi^{(a,-1/2)}_{l/2}(t) = phi^{(a,a)}_l(t/2)
    const auto p1 = JacobiParameters::make(1.2, -0.5, true);
    const auto p2 = JacobiParameters::make(1.2, 1.2 - 1e-13);
    for (double l : {0.5, 3.0, 12.0})
        for (double t : {0.3, 2.0, 7.0}) {
            const cplx a = jacobi_phi(p1, l / 2, t), b = jacobi_phi(p2, l, t / 2);
            CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)) + 1e-14);
        }
}

TEST_CASE("ODE residual on the lattice") {
    double worst = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) {
            const double l = 2.5 * i, t = 0.2 + 3.8 * j / 3.0;
            worst = std::max(worst, laplacian_residual(generic, l, t, 1e-4));
        }
    CHECK(worst < 1e-6);
    CHECK(laplacian_residual(h3, 3.0, 0.7, 1e-4) < 1e-6);
    CHECK(laplacian_residual(generic, 5.0, 1.5, 1e-4) < 1e-6);
    CHECK(laplacian_residual(generic, cplx(0, generic.rho), 1.0, 1e-4) < 1e-9);
    CHECK_THROWS_AS(laplacian_residual(generic, 1.0, 1e-4, 1e-4), DomainError);
}

TEST_CASE("c function") {
    for (double l : {0.1, 1.0, 7.0, 300.0}) {
        CHECK(std::abs(c_function(h3, l) - 1.0 / cplx(0, l)) < 1e-10 / l);
        CHECK(plancherel_density(h3, l) == doctest::Approx(l * l).epsilon(1e-10));
        const cplx c = c_function(generic, l);
        CHECK(std::abs(c_function(generic, -l) - std::conj(c)) < 1e-12 * std::abs(c));
        CHECK(std::abs(c * c_function(generic, -l) - std::norm(c)) < 1e-12 * std::norm(c));
    }
    CHECK_THROWS_AS(c_function(generic, 0.0), PoleError);
    CHECK_THROWS_AS(c_function(generic, cplx(0, 1.0)), PoleError);
}

TEST_CASE("c asymptotics") {
    for (const auto& p : {generic, JacobiParameters::preset("damek-ricci-like")}) {
        const auto rows = c_asymptotics_report(p, {200.0, 400.0});
        CHECK(std::abs(rows[0].density_ratio / rows[1].density_ratio - 1.0) < 0.02);
        std::vector<double> x, y;
        for (double l = 50; l <= 400; l *= 1.1) {
            x.push_back(l);
            y.push_back(1.0 / std::abs(c_function(p, -l)));
        }
        CHECK(std::abs(fit_power_law(x, y).exponent - (p.alpha + 0.5)) < 0.05);
    }
    const auto rows = c_asymptotics_report(h3, {1.0, 10.0, 100.0});
    for (const auto& r : rows) CHECK(r.density_ratio == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Harish-Chandra series") {
    const auto hc = harish_chandra_coefficients(generic, 3.0, 20);
    CHECK(hc.coefficients[0] == cplx(1.0));
    CHECK(hc.truncation_K == 20);
    CHECK(std::abs(harish_chandra_phi(h3, 2.0, 3.0, 40) - h3_phi(2.0, 3.0)) < 1e-8);
    CHECK(std::abs(harish_chandra_phi(generic, 4.0, 3.0, 40) - jacobi_phi_series(generic, 4.0, 3.0)) < 1e-8);
    // the plain series needs many terms once tanh^2 t is close to 1
    PrecisionConfig long_series;
    long_series.max_terms = 5000000;
    double worst = 0;
    for (double l = 1.0; l <= 10.0; l += 1.5)
        for (double t : {2.0, 3.0, 5.0}) {
            const cplx s = jacobi_phi_series(generic, l, t, long_series);
            worst = std::max(worst, std::abs(harish_chandra_phi(generic, l, t, 40) - s) / std::abs(s));
        }
    CHECK(worst < 1e-7);
    CHECK_THROWS_AS(harish_chandra_coefficients(generic, cplx(0, -2.0), 10), DomainError);
}

TEST_CASE("Gangolli envelope and stability") {
    const std::vector<cplx> ls{0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
    const auto g32 = gangolli_fit(generic, 32, ls), g64 = gangolli_fit(generic, 64, ls);
    CHECK(g64.d >= 0.0);
    CHECK(std::abs(g64.d - g32.d) < 0.2);
    for (cplx l : ls) {
        const auto hc = harish_chandra_coefficients(generic, l, 64);
        for (int k = 0; k <= 64; ++k)
            CHECK(std::abs(hc.coefficients[k]) <= g64.C * std::pow(1.0 + k, g64.d) * (1 + 1e-12));
    }
    CHECK(gangolli_fit(h3, 64, ls).d < 0.5);
    CHECK_THROWS_AS(gangolli_fit(generic, 8, ls), DomainError);
}

TEST_CASE("local Bessel expansion") {
    CHECK(std::abs(bessel_local_expansion(generic, 0.0, 1e-6, 1).value - 1.0) < 1e-9);
    CHECK_THROWS_AS(bessel_local_expansion(generic, 1.0, 1.5, 2), DomainError);
    CHECK_THROWS_AS(bessel_local_expansion(generic, 1.0, 0.0, 2), DomainError);
    // a_1 at 0 equals the Taylor-matched value
    const double a10 = local_expansion_a1(generic, 0.0);
    CHECK(local_expansion_a1(generic, 1e-4) == doctest::Approx(a10).epsilon(1e-6));
    // second term improves on the first
    CHECK(std::abs(bessel_local_expansion(generic, 2.0, 0.3, 2).error) <
          std::abs(bessel_local_expansion(generic, 2.0, 0.3, 1).error));
}

TEST_CASE("expansion error exponents") {
    const auto st = expansion_error_study(generic);
    CHECK_FALSE(st.exact);
    CHECK(st.t_fit.exponent >= 3.5);
    CHECK(st.t_fit.exponent <= 4.5);
    CHECK(st.lambda_fit.exponent <= -(generic.alpha + 2.0) + 0.5);
    CHECK(expansion_error_study(h3).exact);
}
