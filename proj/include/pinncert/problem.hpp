#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pinncert/expr.hpp"

namespace pinncert {

// Closed-form solution attached to a registry problem. The formula is fully
// bound: only x is free.
struct ExactSolution {
    std::string tag;
    Expr formula;
    Bindings params;

    double eval(double x) const { return formula.eval(x); }
};

// One instance of the two-point boundary value problem
//   -eps y'' + b y' + c y = f  on (x1, x2),   y(x1) = p, y(x2) = q.
//
// b, c, f are fully bound (only x free); the raw expressions and the binding
// that produced them are kept so a single parameter can be re-bound for
// sweeps.
struct Problem {
    std::string name;  // registry name, or "custom"
    double x1 = 0.0, x2 = 1.0;
    double eps = 1.0;
    double p = 0.0, q = 0.0;
    Expr b, c, f;
    Expr b_prime;      // symbolic d/dx of b
    Expr b_raw, c_raw, f_raw;
    Bindings params;
    std::optional<ExactSolution> exact;

    double length() const { return x2 - x1; }
};

// Binds params into the raw expressions and checks the basic shape
// (x1 < x2, eps > 0, finite boundary data, c >= 0 on a 1001-point grid).
Problem make_problem(double x1, double x2, double eps, const Expr& b_raw,
                     const Expr& c_raw, const Expr& f_raw, double p, double q,
                     const Bindings& params = {}, std::string name = "custom");

struct ValidationReport {
    double min_c = 0.0;         // infimum of c over the closed interval
    double gamma = 0.0;         // infimum of -b'/2 + c
    double lambda_min_c = 0.0;  // equals min_c; the weighted-family constant
    bool energy_ok = false;     // always admissible once c >= 0 holds
    bool weighted_ok = false;   // needs lambda_min_c > 0
    bool plain_ok = false;      // needs gamma > 0
};

// Grid minimization over 1001 uniform points with three refinement rounds
// around the argmin. Throws ProblemError on a non-finite coefficient value.
ValidationReport validate(const Problem& prob);

// Infimum of g over [a, b] by the same grid + refinement scheme.
double grid_min(const std::function<double(double)>& g, double a, double b,
                int grid_points = 1001, int refine_rounds = 3);

std::vector<std::string> registry_names();

// Built-in problems with exact solutions. Unknown names and invalid
// parameters (eps <= 0, negative k or lambda, unknown parameter names)
// raise ProblemError.
Problem registry_get(const std::string& name, const Bindings& params = {});

// Copy of prob with one parameter re-bound. Registry problems are rebuilt so
// derived quantities (exact solution, eps field) stay consistent; custom
// problems re-bind their raw expressions, with "eps" updating the eps field.
Problem with_param(const Problem& prob, const std::string& param, double value);

}  // namespace pinncert
