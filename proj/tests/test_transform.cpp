#include <cmath>

#include "doctest.h"
#include "jacobi/errors.hpp"
#include "jacobi/transform.hpp"
#include "support.hpp"

using namespace jacobi;
using namespace testsupport;

namespace {

const JacobiParameters generic = JacobiParameters::preset("generic");
const JacobiParameters h3 = JacobiParameters::preset("h3");

}  // namespace

TEST_CASE("radial grid structure") {
    const auto g = make_radial_grid(h3);
    CHECK(g->size() == 1600);
    std::size_t near = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        if (g->nodes[i] <= g->T_max / 10) ++near;
        if (i) CHECK(g->nodes[i] > g->nodes[i - 1]);
    }
    CHECK(near >= g->size() / 4);
    const auto short_grid = make_radial_grid(h3, 3.0, 40, 8);
    double mass = 0;
    for (double w : short_grid->mu_weights) mass += w;
    const double exact = std::sinh(6.0) - 6.0;
    CHECK(std::abs(mass - exact) < 1e-10 * exact);
    CHECK_THROWS_AS(make_radial_grid(h3, 20.0, 1, 8), ParameterError);
    CHECK_THROWS_AS((GridConfig{20.0, 10, 40, 50.0, 10, 8}.validate()), ParameterError);
}

TEST_CASE("spectral weights carry the Plancherel density") {
    const auto s = make_spectral_grid(generic);
    for (std::size_t j = 0; j < s->size(); j += 97)
        CHECK(s->nu_weights[j] ==
              doctest::Approx(s->base_weights[j] * plancherel_density(generic, s->nodes[j]) / (2 * std::numbers::pi))
                  .epsilon(1e-14));
}

TEST_CASE("Plancherel and roundtrip on the bump suite") {
    const auto r = make_radial_grid(generic);
    const auto s = make_spectral_grid(generic);
    for (const auto& b : bump_suite()) {
        const auto f = sample(r, bump(b));
        CHECK(plancherel_defect(generic, f, s) < 1e-6);
        const auto back = inverse_transform(generic, jacobi_transform(generic, f, s), r);
        CHECK(relative_l2_error(back, f) < 1e-6);
    }
}

TEST_CASE("defect contracts under grid doubling") {
    const auto f = bump({2.0, 0.3, false});
    double prev = 0;
    for (int k = 1; k < 4; ++k) {
        const int m = 1 << k;
        const auto r = make_radial_grid(generic, 20.0, 25 * m, 4);
        const auto s = make_spectral_grid(generic, 50.0, 12 * m, 4);
        const double d = plancherel_defect(generic, sample(r, f), s);
        if (k > 1) CHECK(d * 4 <= prev);
        prev = d;
    }
}

TEST_CASE("linearity and zero") {
    const auto r = make_radial_grid(generic);
    const auto s = make_spectral_grid(generic);
    const auto f1 = sample(r, bump({1.5, 0.2, false})), f2 = sample(r, bump({3.0, 0.25, false}));
    SampledRadialFunction mix{r, {}};
    for (std::size_t i = 0; i < r->size(); ++i) mix.values.push_back(2.0 * f1.values[i] - cplx(0, 3) * f2.values[i]);
    const auto a = jacobi_transform(generic, f1, s), b = jacobi_transform(generic, f2, s),
               c = jacobi_transform(generic, mix, s);
    double scale = 0, worst = 0;
    for (std::size_t j = 0; j < s->size(); ++j) {
        scale = std::max(scale, std::abs(c.values[j]));
        worst = std::max(worst, std::abs(c.values[j] - (2.0 * a.values[j] - cplx(0, 3) * b.values[j])));
    }
    CHECK(worst < 1e-14 * scale);
    const auto z = jacobi_transform(generic, sample(r, [](double) { return cplx(0); }), s);
    for (auto v : z.values) CHECK(v == cplx(0));
}

TEST_CASE("transform evenness at complex points") {
    const auto r = make_radial_grid(generic);
    const auto f = sample(r, bump({1.0, 0.3, false}));
    const auto v = jacobi_transform_at(generic, f, {cplx(2.0, 0.5), cplx(-2.0, -0.5)});
    CHECK(std::abs(v[0] - v[1]) < 1e-12 * std::abs(v[0]));
}

TEST_CASE("decay errors") {
    const auto r = make_radial_grid(generic);
    const auto s = make_spectral_grid(generic);
    CHECK_THROWS_AS(jacobi_transform(generic, sample(r, [](double) { return cplx(1); }), s), DecayError);
    CHECK_THROWS_AS(inverse_transform(generic, sample(s, [](double) { return cplx(1); }), r), DecayError);
    CHECK_THROWS_AS(plancherel_defect(generic, sample(r, [](double) { return cplx(0); }), s), DomainError);
}

TEST_CASE("heat kernel matches the closed form at (1/2, -1/2)") {
    const auto r = make_radial_grid(h3);
    const auto s = make_spectral_grid(h3);
    for (double sv : {0.1, 0.5, 2.0}) {
        const auto h = heat_kernel(h3, sv, r, s);
        double worst = 0, scale = h3_heat(sv, 0.0);
        for (std::size_t i = 0; i < r->size(); i += 7) worst = std::max(worst, std::abs(h.values[i] - h3_heat(sv, r->nodes[i])));
        CHECK(worst < 1e-10 * scale);
    }
    CHECK_THROWS_AS(heat_kernel(h3, 0.0, r, s), DomainError);
}

TEST_CASE("heat kernel transform, positivity and decay") {
    const auto r = make_radial_grid(generic);
    const auto s = make_spectral_grid(generic);
    const auto h = heat_kernel(generic, 0.5, r, s);
    for (std::size_t i = 0; i < r->size(); ++i)
        if (r->nodes[i] < 8) CHECK(h.values[i].real() > 0);
    const auto ht = jacobi_transform(generic, h, s);
    const auto ex = heat_multiplier(s, 0.5);
    for (std::size_t j = 0; j < s->size(); j += 11) CHECK(std::abs(ht.values[j] - ex.values[j]) < 1e-9);
    CHECK(plancherel_defect(generic, h, s) < 1e-6);
    // |h_s|_2 <= C e^{-s rho} on [0.1, 2] with C taken at s = 0.1
    const double C = l2_norm(heat_kernel(generic, 0.1, r, s)) * std::exp(0.1 * generic.rho);
    for (double sv : {0.3, 1.0, 2.0}) CHECK(l2_norm(heat_kernel(generic, sv, r, s)) <= C * std::exp(-sv * generic.rho));
    const auto a = heat_multiplier(s, 0.2), b = heat_multiplier(s, 0.3), c = heat_multiplier(s, 0.5);
    for (std::size_t j = 0; j < s->size(); ++j) CHECK(std::abs(a.values[j] * b.values[j] - c.values[j]) <= 1e-12 * std::abs(c.values[j]) + 1e-300);
}

TEST_CASE("Laplacian") {
    const auto r = make_radial_grid(generic);
    const auto s = make_spectral_grid(generic);
    const double sv = 0.5, ds = 1e-3;
    const auto L = apply_laplacian(generic, heat_kernel(generic, sv, r, s));
    const auto hp = heat_kernel(generic, sv + ds, r, s), hm = heat_kernel(generic, sv - ds, r, s);
    for (std::size_t i = 20; i < r->size(); i += 53) {
        if (r->nodes[i] > 6) break;
        const cplx dt = (hp.values[i] - hm.values[i]) / (2 * ds);
        CHECK(std::abs(L.values[i] - dt) < 1e-3 * std::abs(dt) + 1e-9);
    }
    const double l0 = 3.0;
    const auto phi = sample(r, [&](double t) { return jacobi_phi(generic, l0, t); });
    const auto Lphi = apply_laplacian(generic, phi);
    for (std::size_t i = 10; i < r->size(); i += 37) {
        if (r->nodes[i] > 5) break;
        const cplx ex = -(l0 * l0 + generic.rho * generic.rho) * phi.values[i];
        CHECK(std::abs(Lphi.values[i] - ex) < 1e-4 * (l0 * l0 + generic.rho * generic.rho));
    }
    const auto one = apply_laplacian(generic, sample(r, [](double) { return cplx(1); }));
    for (std::size_t i = 0; i < r->size(); i += 50) CHECK(std::abs(one.values[i]) < 1e-6);
    // spectral identity
    const auto f = sample(r, bump({2.0, 0.3, false}));
    const auto lf = jacobi_transform(generic, apply_laplacian(generic, f), s), ff = jacobi_transform(generic, f, s);
    double num = 0, den = 0;
    for (std::size_t j = 0; j < s->size(); ++j) {
        const double q = s->nodes[j] * s->nodes[j] + generic.rho * generic.rho;
        num += std::norm(lf.values[j] + q * ff.values[j]) * s->nu_weights[j];
        den += std::norm(q * ff.values[j]) * s->nu_weights[j];
    }
    CHECK(std::sqrt(num / den) < 1e-3);
}

TEST_CASE("radial interpolation") {
    const auto r = make_radial_grid(generic);
    const auto f = sample(r, bump({2.0, 0.3, false}));
    const RadialInterpolator I(f);
    for (double t : {0.0, 0.013, 1.7, 2.33, 4.9}) CHECK(std::abs(I(t) - bump({2.0, 0.3, false})(t)) < 1e-9);
    CHECK(I(25.0) == cplx(0));
}
