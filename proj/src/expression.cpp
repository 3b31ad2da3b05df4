#include "jacobi/expression.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>

#include "jacobi/errors.hpp"
#include "jacobi/multiplier.hpp"

namespace jacobi {
namespace {

using Fn = std::function<cplx(cplx)>;

class Parser {
public:
    Parser(const std::string& text, const JacobiParameters& p) : s_(text), p_(p) {}

    Fn parse() {
        Fn f = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return f;
    }

private:
    const std::string& s_;
    JacobiParameters p_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParameterError("expression: " + msg + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Fn expr() {
        Fn lhs = term();
        for (;;) {
            if (accept('+')) {
                Fn rhs = term();
                lhs = [lhs, rhs](cplx l) { return lhs(l) + rhs(l); };
            } else if (accept('-')) {
                Fn rhs = term();
                lhs = [lhs, rhs](cplx l) { return lhs(l) - rhs(l); };
            } else {
                return lhs;
            }
        }
    }

    Fn term() {
        Fn lhs = unary();
        for (;;) {
            if (accept('*')) {
                Fn rhs = unary();
                lhs = [lhs, rhs](cplx l) { return lhs(l) * rhs(l); };
            } else if (accept('/')) {
                Fn rhs = unary();
                lhs = [lhs, rhs](cplx l) { return lhs(l) / rhs(l); };
            } else {
                return lhs;
            }
        }
    }

    Fn unary() {
        if (accept('-')) {
            Fn f = unary();
            return [f](cplx l) { return -f(l); };
        }
        if (accept('+')) return unary();
        return power();
    }

    Fn power() {
        Fn base = primary();
        if (accept('^')) {
            Fn ex = unary();
            return [base, ex](cplx l) {
                const cplx e = ex(l);
                const cplx b = base(l);
                // integer powers stay exact and branch-free
                if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64) {
                    const int n = static_cast<int>(e.real());
                    cplx r = 1.0;
                    for (int k = 0; k < std::abs(n); ++k) r *= b;
                    return n < 0 ? 1.0 / r : r;
                }
                return std::pow(b, e);
            };
        }
        return base;
    }

    Fn primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Fn f = expr();
            if (!accept(')')) fail("expected ')'");
            return f;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Fn number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("bad number");
        pos_ += static_cast<std::size_t>(end - begin);
        return [v](cplx) { return cplx(v); };
    }

    Fn identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (accept('(')) {
            Fn arg = expr();
            if (!accept(')')) fail("expected ')' after argument of " + name);
            return function(name, arg);
        }
        if (name == "lambda" || name == "l") return [](cplx l) { return l; };
        if (name == "i") return [](cplx) { return cplx(0.0, 1.0); };
        if (name == "pi") return [](cplx) { return cplx(std::numbers::pi); };
        const double rho = p_.rho, alpha = p_.alpha, beta = p_.beta;
        if (name == "rho") return [rho](cplx) { return cplx(rho); };
        if (name == "alpha") return [alpha](cplx) { return cplx(alpha); };
        if (name == "beta") return [beta](cplx) { return cplx(beta); };
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }

    Fn function(const std::string& name, Fn arg) {
        using C = cplx;
        if (name == "exp") return [arg](C l) { return std::exp(arg(l)); };
        if (name == "sin") return [arg](C l) { return std::sin(arg(l)); };
        if (name == "cos") return [arg](C l) { return std::cos(arg(l)); };
        if (name == "sinh") return [arg](C l) { return std::sinh(arg(l)); };
        if (name == "cosh") return [arg](C l) { return std::cosh(arg(l)); };
        if (name == "tanh") return [arg](C l) { return std::tanh(arg(l)); };
        if (name == "sqrt") return [arg](C l) { return std::sqrt(arg(l)); };
        if (name == "log") return [arg](C l) { return std::log(arg(l)); };
        if (name == "omega") {
            const JacobiParameters p = p_;
            return [arg, p](C l) { return omega(p, arg(l)); };
        }
        fail("unknown function '" + name + "'");
    }
};

}  // namespace

std::function<cplx(cplx)> compile_expression(const std::string& text, const JacobiParameters& p) {
    if (text.find_first_not_of(" \t\n") == std::string::npos) throw ParameterError("expression: empty");
    return Parser(text, p).parse();
}

}  // namespace jacobi
