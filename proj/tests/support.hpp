#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "jacobi/transform.hpp"

namespace testsupport {

using jacobi::cplx;

// C-infinity step: 1 for |x| <= 0.95, 0 for |x| >= 1.
inline double smooth_cutoff(double x) {
    const double a = std::abs(x);
    if (a <= 0.95) return 1.0;
    if (a >= 1.0) return 0.0;
    const double y = (a - 0.95) / 0.05;
    const double f0 = std::exp(-1.0 / (1.0 - y)), f1 = std::exp(-1.0 / y);
    return f0 / (f0 + f1);
}

struct Bump {
    double centre, width;
    bool cut;
};

inline std::vector<Bump> bump_suite() {
    return {{2.0, 0.15, true}, {1.5, 0.2, false}, {3.0, 0.25, false}, {0.0, 0.3, false}, {4.0, 0.2, false}};
}

// Even Gaussian bump g(t - c) + g(t + c).
inline std::function<cplx(double)> bump(const Bump& b) {
    return [b](double t) {
        auto g = [&](double x) {
            const double v = std::exp(-x * x / (2.0 * b.width * b.width));
            return b.cut ? v * smooth_cutoff(x) : v;
        };
        return cplx(g(t - b.centre) + g(t + b.centre));
    };
}

// Heat kernel of the (1/2, -1/2) case in the (2 pi)^{-1} |c|^{-2} normalization.
inline double h3_heat(double s, double t) {
    if (t == 0.0) return std::exp(-s) / (8.0 * std::sqrt(std::numbers::pi) * std::pow(s, 1.5));
    return t * std::exp(-s - t * t / (4.0 * s)) / (8.0 * std::sqrt(std::numbers::pi) * std::pow(s, 1.5) * std::sinh(t));
}

// Double-exponential quadrature on (a, b), robust to integrable endpoint
// singularities.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, double h = 1.0 / 64,
                        double tmax = 4.0) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (double k = -tmax; k <= tmax + 1e-12; k += h) {
        const double u = 0.5 * std::numbers::pi * std::sinh(k);
        const double x = std::tanh(u);
        const double w = 0.5 * std::numbers::pi * std::cosh(k) / (std::cosh(u) * std::cosh(u));
        // distance to the nearer endpoint without cancellation
        const double e = 1.0 / (std::exp(2.0 * std::abs(u)) + 1.0) * 2.0;
        const double z = x < 0 ? a + r * e : b - r * e;
        if (z <= a || z >= b) continue;
        s += f(z) * w;
    }
    return s * r * h;
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testsupport
