#pragma once

#include <vector>

#include "pinncert/problem.hpp"

namespace pinncert {

// Numerical strong solution on a uniform mesh of m cells. The convection term
// is centrally differenced when the mesh Peclet number max|b|h/(2 eps) stays
// below 1, otherwise first-order upwinded (unconditionally stable).
struct FdSolution {
    enum class Scheme { kCentral, kUpwind };

    double x1 = 0.0, x2 = 1.0;
    int m = 0;
    double h = 0.0;
    std::vector<double> y;  // m+1 nodal values, boundary nodes exact
    Scheme scheme = Scheme::kCentral;
    double peclet = 0.0;
    double max_scaled_residual = 0.0;  // row-normalized residual of the solve

    // Cubic 4-point interpolation; exact at nodes. Throws EvalError outside
    // the closed interval.
    double eval(double x) const;
};

FdSolution fd_solve(const Problem& prob, int m);

struct FdReference {
    FdSolution sol;
    double error_estimate = 0.0;  // sup-norm estimate from mesh halving
};

// Doubles the mesh until the scheme runs centrally (if the cap allows) and
// the Richardson error estimate falls below err_tol. Throws NumericError if
// the cap is hit first.
FdReference fd_reference(const Problem& prob, double err_tol, int m0 = 256,
                         int m_max = 1 << 20);

}  // namespace pinncert
