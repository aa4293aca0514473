#pragma once

#include <functional>
#include <vector>

#include "pinncert/problem.hpp"

namespace pinncert {

using RealFn = std::function<double(double)>;

// Composite Gauss-Legendre rule: `panels` equal panels, `points` nodes each.
struct QuadratureRule {
    double x1 = 0.0, x2 = 1.0;
    int panels = 0, points = 0;
    std::vector<double> nodes, weights;

    static QuadratureRule gauss_legendre(double x1, double x2, int panels = 64,
                                         int points = 8);
};

// Weighted sum over the rule's nodes. Throws NumericError when the integrand
// is non-finite at a node.
double integrate(const RealFn& g, const QuadratureRule& rule);

// Doubles the panel count until two successive values agree to rel_tol.
// Successive values that both fall below settle_floor also count as settled;
// an integrand that vanishes up to roundoff never meets a relative target.
// Throws NumericError if max_panels is reached without agreement.
double integrate_to_tol(const RealFn& g, double x1, double x2, double rel_tol = 1e-9,
                        int initial_panels = 64, int points = 8,
                        int max_panels = 1 << 15, double settle_floor = 0.0);

double l2_norm(const RealFn& g, const QuadratureRule& rule);

// Dense-grid maximum of |g| over [x1, x2], endpoints included.
double sup_norm(const RealFn& g, double x1, double x2, int grid = 4096);

// The weight rho(x) = exp(E(x)), E(x) = integral of -b/eps from x1 to x,
// tabulated as cumulative refined-trapezoid (Richardson, so Simpson-level)
// cell integrals on a dense grid. Extrema are taken over grid + endpoints
// with one local refinement pass.
class RhoProfile {
public:
    static RhoProfile build(const Problem& prob, int grid_size = 2048);

    double exponent(double x) const;  // E(x), cubic interpolation off-grid
    double rho(double x) const;       // exp(E(x))
    double rho_min() const { return rho_min_; }
    double rho_max() const { return rho_max_; }
    double b_l1() const { return b_l1_; }  // integral of |b| over I
    // exponent of the coarser comparison bound: integral of |b|/eps
    double loose_exponent() const { return b_l1_ / eps_; }

private:
    double x1_ = 0.0, x2_ = 1.0, eps_ = 1.0;
    double rho_min_ = 1.0, rho_max_ = 1.0, b_l1_ = 0.0;
    std::vector<double> grid_, cum_;  // nodes and E values
};

// sqrt of integral of g^2 rho dx.
double weighted_l2_norm(const RealFn& g, const RhoProfile& rho,
                        const QuadratureRule& rule);

}  // namespace pinncert
