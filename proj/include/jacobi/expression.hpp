#pragma once

#include <functional>
#include <string>

#include "jacobi/jacobi_core.hpp"

namespace jacobi {

// Compiles a closed-form expression in the variable `lambda` (alias `l`).
// Grammar: + - * / ^, unary minus, parentheses, numbers, the constants
// i, pi, rho, alpha, beta and the functions exp sin cos sinh cosh tanh sqrt
// log omega. Syntax errors throw ParameterError.
std::function<cplx(cplx)> compile_expression(const std::string& text, const JacobiParameters& p);

}  // namespace jacobi
