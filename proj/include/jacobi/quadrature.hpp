#pragma once

#include <vector>

namespace jacobi::quad {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// n-point Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int n);
Rule gauss_legendre(int n, double a, double b);
// One n-point rule per interval [edges[i], edges[i+1]].
Rule composite_gauss_legendre(const std::vector<double>& edges, int n);

// Quintic smoothstep S(x) = 6x^5 - 15x^4 + 10x^3 clamped to [0, 1], and S'.
double smoothstep(double x);
double smoothstep_derivative(double x);

}  // namespace jacobi::quad
