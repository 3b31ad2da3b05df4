#include <cmath>
#include <numbers>

#include "doctest.h"
#include "jacobi/errors.hpp"
#include "jacobi/specfun.hpp"

using namespace jacobi;
using namespace jacobi::specfun;
using std::numbers::pi;

TEST_CASE("gamma matches tgamma on the real axis") {
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.3, 20.0, -0.5, -2.7}) {
        CHECK(std::abs(gamma_complex(x).real() / std::tgamma(x) - 1.0) < 1e-13);
        CHECK(std::abs(gamma_complex(x).imag()) < 1e-13 * std::abs(std::tgamma(x)));
    }
    CHECK(std::abs(gamma_complex(0.5) - std::sqrt(pi)) < 1e-14);
}

TEST_CASE("gamma on the imaginary axis") {
    // |Gamma(iy)|^2 = pi / (y sinh(pi y))
    for (double y : {0.3, 1.0, 4.0, 10.0}) {
        const double g2 = std::norm(gamma_complex(cplx(0, y)));
        CHECK(std::abs(g2 * y * std::sinh(pi * y) / pi - 1.0) < 1e-12);
    }
}

TEST_CASE("reflection and duplication residuals") {
    double worst_r = 0, worst_d = 0;
    for (double x = -3.3; x <= 4.0; x += 0.37) {
        for (double y = -6.0; y <= 6.0; y += 0.75) {
            const cplx z(x, y);
            const cplx r = gamma_complex(z) * gamma_complex(1.0 - z) * std::sin(pi * z) / pi;
            worst_r = std::max(worst_r, std::abs(r - 1.0));
            const cplx lhs = gamma_complex(z) * gamma_complex(z + 0.5);
            const cplx rhs = std::pow(2.0, 1.0 - 2.0 * z) * std::sqrt(pi) * gamma_complex(2.0 * z);
            worst_d = std::max(worst_d, std::abs(lhs - rhs) / std::abs(gamma_complex(2.0 * z)));
        }
    }
    CHECK(worst_r < 1e-10);
    CHECK(worst_d < 1e-10);
}

TEST_CASE("lgamma agrees with log of gamma and survives large imaginary parts") {
    for (cplx z : {cplx(0.7, 0.2), cplx(3.0, -2.0), cplx(10.0, 5.0)}) {
        const cplx d = std::exp(lgamma_complex(z)) - gamma_complex(z);
        CHECK(std::abs(d) < 1e-12 * std::abs(gamma_complex(z)));
    }
    // Stirling: Re log Gamma(1/2 + iy) = log sqrt(pi / cosh(pi y))
    const double y = 400.0;
    const double expect = 0.5 * (std::log(pi) - pi * y - std::log1p(std::exp(-2 * pi * y)) + std::log(2.0));
    CHECK(std::abs(lgamma_complex(cplx(0.5, y)).real() - expect) < 1e-9);
}

TEST_CASE("gamma poles are rejected") {
    CHECK_THROWS_AS(gamma_complex(-2.0), PoleError);
    CHECK_THROWS_AS(gamma_complex(0.0), PoleError);
    CHECK_THROWS_AS(gamma_complex(cplx(std::nan(""), 0)), DomainError);
}

TEST_CASE("hyp2f1 trivial cases and closed forms") {
    CHECK(hyp2f1(cplx(0.3, 1), 0.0, 2.5, -3.0) == cplx(1.0));
    CHECK(hyp2f1(1.7, 2.2, 3.1, 0.0) == cplx(1.0));
    CHECK(std::abs(hyp2f1(1.0, 1.0, 2.0, -1.0) - std::log(2.0)) < 1e-14);
    for (double z : {-0.5, -4.0, -50.0, 0.3, 0.9}) {
        CHECK(std::abs(hyp2f1(1.0, 1.0, 2.0, z).real() + std::log1p(-z) / z) < 1e-12 * std::abs(std::log1p(-z) / z));
        // 2F1(a, b; b; z) = (1 - z)^{-a}
        CHECK(std::abs(hyp2f1(0.7, 1.3, 1.3, z).real() / std::pow(1.0 - z, -0.7) - 1.0) < 1e-12);
    }
    // 2F1(1/2, 1; 3/2; -x^2) = atan(x) / x
    for (double x : {0.2, 1.0, 5.0, 30.0})
        CHECK(std::abs(hyp2f1(0.5, 1.0, 1.5, -x * x).real() * x / std::atan(x) - 1.0) < 1e-12);
}

TEST_CASE("Pfaff path agrees with the direct series on (-1, 0)") {
    const cplx a(1.1, 2.0), b(1.1, -2.0), c(2.2, 0.0);
    double worst = 0;
    for (double z = -0.95; z < 0; z += 0.05) {
        const cplx s = hyp2f1_series(a, b, c, z), t = hyp2f1(a, b, c, z);
        worst = std::max(worst, std::abs(s - t) / std::abs(s));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("hyp2f1 parameter errors") {
    CHECK_THROWS_AS(hyp2f1(1.0, 1.0, -2.0, 0.3), ParameterError);
    CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(hyp2f1_series(1.0, 1.0, 2.0, -1.5), DomainError);
}

TEST_CASE("script J against the standard library Bessel function") {
    for (double x : {0.3, 5.0, 40.0})
        CHECK(std::abs(bessel_script_J(-0.5, x) - std::sqrt(2.0 / pi) * std::cos(x)) < 1e-12);
    for (double a : {-0.5, 0.0, 0.6, 1.0, 1.5, 2.25}) {
        CHECK(std::abs(bessel_script_J(a, 0.0) - 1.0 / (std::pow(2.0, a) * std::tgamma(a + 1.0))) < 1e-15);
        if (a < 0) continue;
        for (double x : {0.3, 2.0, 9.5, 17.9, 18.1, 40.0, 250.0}) {
            const double ref = std::cyl_bessel_j(a, x) * std::pow(x, -a);
            CHECK(std::abs(bessel_script_J(a, x) - ref) < 1e-10 * std::pow(x, -a) * std::max(1.0, std::sqrt(x) * 0.1));
        }
    }
    CHECK(std::abs(bessel_script_J(0.5, pi)) < 1e-15);
    const double x = 1e-3;
    CHECK(std::abs(bessel_script_J(1.0, x) - (0.5 - x * x / 16.0)) < 1e-14);
}

TEST_CASE("series and asymptotic branches meet at the crossover") {
    const double xc = default_precision().asymptotic_crossover;
    for (double a : {0.6, 1.0, 1.5, 2.25}) {
        const double s = bessel_script_J_series(a, xc), h = bessel_script_J_asymptotic(a, xc);
        CHECK(std::abs(s - h) < 1e-9 * std::pow(xc, -a - 0.5));
    }
}
