#include "pinncert/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "pinncert/errors.hpp"
#include "pinncert/util.hpp"

namespace pinncert {

namespace {

// Thomas elimination for a tridiagonal system with rows (a_i, d_i, u_i).
// Overwrites rhs with the solution.
void thomas(std::vector<double>& a, std::vector<double>& d, std::vector<double>& u,
            std::vector<double>& rhs) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (d[i - 1] == 0.0) throw NumericError("singular tridiagonal system");
        double w = a[i] / d[i - 1];
        d[i] -= w * u[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (d[n - 1] == 0.0) throw NumericError("singular tridiagonal system");
    rhs[n - 1] /= d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - u[i] * rhs[i + 1]) / d[i];
}

}  // namespace

FdSolution fd_solve(const Problem& prob, int m) {
    if (m < 8) throw NumericError("finite-difference mesh needs at least 8 cells");
    FdSolution sol;
    sol.x1 = prob.x1;
    sol.x2 = prob.x2;
    sol.m = m;
    sol.h = (prob.x2 - prob.x1) / m;
    const double h = sol.h, eps = prob.eps;

    std::vector<double> bv(m + 1), cv(m + 1), fv(m + 1);
    double bmax = 0.0;
    for (int i = 0; i <= m; ++i) {
        double x = prob.x1 + i * h;
        bv[i] = prob.b.eval(x);
        cv[i] = prob.c.eval(x);
        fv[i] = prob.f.eval(x);
        bmax = std::max(bmax, std::abs(bv[i]));
    }
    sol.peclet = bmax * h / (2.0 * eps);
    sol.scheme = sol.peclet < 1.0 ? FdSolution::Scheme::kCentral : FdSolution::Scheme::kUpwind;

    // rows scaled by h^2; interior unknowns i = 1..m-1
    const int n = m - 1;
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    for (int i = 1; i <= n; ++i) {
        double bi = bv[i], ci = cv[i];
        double l, dd, uu;
        if (sol.scheme == FdSolution::Scheme::kCentral) {
            l = -eps - 0.5 * bi * h;
            dd = 2.0 * eps + ci * h * h;
            uu = -eps + 0.5 * bi * h;
        } else if (bi >= 0.0) {
            l = -eps - bi * h;
            dd = 2.0 * eps + bi * h + ci * h * h;
            uu = -eps;
        } else {
            l = -eps;
            dd = 2.0 * eps - bi * h + ci * h * h;
            uu = -eps + bi * h;
        }
        lo[i - 1] = l;
        di[i - 1] = dd;
        up[i - 1] = uu;
        rhs[i - 1] = fv[i] * h * h;
    }
    rhs[0] -= lo[0] * prob.p;
    rhs[n - 1] -= up[n - 1] * prob.q;

    std::vector<double> a2 = lo, d2 = di, u2 = up, sol_vec = rhs;
    thomas(a2, d2, u2, sol_vec);

    sol.y.resize(m + 1);
    sol.y[0] = prob.p;
    sol.y[m] = prob.q;
    for (int i = 1; i <= n; ++i) sol.y[i] = sol_vec[i - 1];

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = lo[i] * sol.y[i] + di[i] * sol.y[i + 1] + up[i] * sol.y[i + 2];
        double target = fv[i + 1] * h * h;
        double scale = std::abs(lo[i]) + std::abs(di[i]) + std::abs(up[i]);
        worst = std::max(worst, std::abs(row - target) / scale);
    }
    sol.max_scaled_residual = worst;
    if (!(worst <= 1e-10))
        throw NumericError("tridiagonal solve residual " + format_double(worst) +
                           " exceeds 1e-10");
    return sol;
}

double FdSolution::eval(double x) const {
    if (x < x1 - 1e-12 * (x2 - x1) || x > x2 + 1e-12 * (x2 - x1))
        throw EvalError("evaluation point " + format_double(x) + " outside [" +
                        format_double(x1) + ", " + format_double(x2) + "]");
    double u = (x - x1) / h;
    long long cell = std::clamp(static_cast<long long>(std::floor(u)), 0LL,
                                static_cast<long long>(m) - 1);
    long long lo = std::clamp(cell - 1, 0LL, static_cast<long long>(m) - 3);
    double acc = 0.0;
    for (long long a = lo; a <= lo + 3; ++a) {
        double xa = x1 + a * h;
        double term = y[static_cast<std::size_t>(a)];
        for (long long b = lo; b <= lo + 3; ++b) {
            if (b == a) continue;
            double xb = x1 + b * h;
            term *= (x - xb) / (xa - xb);
        }
        acc += term;
    }
    return acc;
}

FdReference fd_reference(const Problem& prob, double err_tol, int m0, int m_max) {
    int m = std::max(8, m0);
    FdSolution coarse = fd_solve(prob, m);
    while (coarse.scheme == FdSolution::Scheme::kUpwind && 2 * m <= m_max) {
        m *= 2;
        coarse = fd_solve(prob, m);
    }
    for (;;) {
        if (2 * m > m_max)
            throw NumericError("reference mesh cap reached before the error target " +
                               format_double(err_tol));
        FdSolution fine = fd_solve(prob, 2 * m);
        double gap = 0.0;
        for (int i = 0; i <= m; ++i)
            gap = std::max(gap, std::abs(coarse.y[i] - fine.y[2 * i]));
        // Richardson: the fine-mesh error is about gap/3 at second order,
        // about gap at first order
        double est = fine.scheme == FdSolution::Scheme::kCentral ? gap / 3.0 : gap;
        if (est <= err_tol) return {std::move(fine), est};
        coarse = std::move(fine);
        m *= 2;
    }
}

}  // namespace pinncert
