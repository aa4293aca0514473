#include "pinncert/quad.hpp"

#include <algorithm>
#include <cmath>

#include "pinncert/errors.hpp"
#include "pinncert/util.hpp"

namespace pinncert {

namespace {

// Gauss-Legendre nodes/weights on (-1, 1) by Newton iteration on P_n.
void reference_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

double lagrange4(const std::vector<double>& xs, const std::vector<double>& ys, double x1,
                 double h, double x) {
    const std::size_t m = xs.size() - 1;
    double u = (x - x1) / h;
    std::size_t i = static_cast<std::size_t>(std::clamp(
        static_cast<long long>(std::floor(u)), 0LL, static_cast<long long>(m - 1)));
    std::size_t lo = i == 0 ? 0 : i - 1;
    if (lo + 3 > m) lo = m - 3;
    double acc = 0.0;
    for (std::size_t a = lo; a <= lo + 3; ++a) {
        double term = ys[a];
        for (std::size_t b = lo; b <= lo + 3; ++b) {
            if (b == a) continue;
            term *= (x - xs[b]) / (xs[a] - xs[b]);
        }
        acc += term;
    }
    return acc;
}

}  // namespace

QuadratureRule QuadratureRule::gauss_legendre(double x1, double x2, int panels, int points) {
    if (!(x1 < x2)) throw NumericError("quadrature interval requires x1 < x2");
    if (panels < 1 || points < 1) throw NumericError("quadrature rule needs panels, points >= 1");
    QuadratureRule rule;
    rule.x1 = x1;
    rule.x2 = x2;
    rule.panels = panels;
    rule.points = points;
    std::vector<double> rx, rw;
    reference_rule(points, rx, rw);
    const double h = (x2 - x1) / panels;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * points);
    rule.weights.reserve(static_cast<std::size_t>(panels) * points);
    for (int p = 0; p < panels; ++p) {
        double a = x1 + p * h;
        double mid = a + 0.5 * h;
        for (int j = 0; j < points; ++j) {
            rule.nodes.push_back(mid + 0.5 * h * rx[j]);
            rule.weights.push_back(0.5 * h * rw[j]);
        }
    }
    return rule;
}

double integrate(const RealFn& g, const QuadratureRule& rule) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double v = g(rule.nodes[i]);
        if (!std::isfinite(v))
            throw NumericError("non-finite integrand value at x = " +
                               format_double(rule.nodes[i]));
        acc += rule.weights[i] * v;
    }
    return acc;
}

double integrate_to_tol(const RealFn& g, double x1, double x2, double rel_tol,
                        int initial_panels, int points, int max_panels,
                        double settle_floor) {
    double prev = integrate(g, QuadratureRule::gauss_legendre(x1, x2, initial_panels, points));
    for (int panels = initial_panels * 2; panels <= max_panels; panels *= 2) {
        double cur = integrate(g, QuadratureRule::gauss_legendre(x1, x2, panels, points));
        if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), std::abs(prev)) + 1e-300)
            return cur;
        if (std::abs(cur) <= settle_floor && std::abs(prev) <= settle_floor) return cur;
        prev = cur;
    }
    throw NumericError("quadrature did not settle to relative " + format_double(rel_tol) +
                       " within " + format_double(max_panels) + " panels");
}

double l2_norm(const RealFn& g, const QuadratureRule& rule) {
    return std::sqrt(integrate([&](double x) { double v = g(x); return v * v; }, rule));
}

double sup_norm(const RealFn& g, double x1, double x2, int grid) {
    double best = 0.0;
    for (double x : linspace(x1, x2, grid + 1)) {
        double v = std::abs(g(x));
        if (!std::isfinite(v))
            throw NumericError("non-finite value at x = " + format_double(x));
        best = std::max(best, v);
    }
    return best;
}

RhoProfile RhoProfile::build(const Problem& prob, int grid_size) {
    if (grid_size < 101) throw NumericError("rho profile grid must have at least 101 cells");
    RhoProfile out;
    out.x1_ = prob.x1;
    out.x2_ = prob.x2;
    out.eps_ = prob.eps;
    out.grid_ = linspace(prob.x1, prob.x2, grid_size + 1);
    out.cum_.assign(out.grid_.size(), 0.0);

    auto integrand = [&](double x) { return -prob.b.eval(x) / prob.eps; };
    auto abs_b = [&](double x) { return std::abs(prob.b.eval(x)); };

    // per-cell trapezoid at h and h/2, Richardson-combined: (4 T_{h/2} - T_h)/3
    auto cell = [](const RealFn& g, double a, double b) {
        double mid = 0.5 * (a + b);
        double t1 = 0.5 * (b - a) * (g(a) + g(b));
        double t2 = 0.25 * (b - a) * (g(a) + 2.0 * g(mid) + g(b));
        return (4.0 * t2 - t1) / 3.0;
    };

    double b_l1 = 0.0;
    for (std::size_t i = 1; i < out.grid_.size(); ++i) {
        double a = out.grid_[i - 1], b = out.grid_[i];
        out.cum_[i] = out.cum_[i - 1] + cell(integrand, a, b);
        if (!std::isfinite(out.cum_[i]))
            throw NumericError("non-finite drift integral near x = " + format_double(b));
        b_l1 += cell(abs_b, a, b);
    }
    out.b_l1_ = b_l1;

    auto minmax = std::minmax_element(out.cum_.begin(), out.cum_.end());
    double emin = *minmax.first, emax = *minmax.second;
    // one refinement pass: re-sample around each arg-extremum cell
    auto refine = [&](std::size_t idx, bool want_max) {
        std::size_t lo = idx == 0 ? 0 : idx - 1;
        std::size_t hi = std::min(idx + 1, out.cum_.size() - 1);
        double best = out.cum_[idx];
        for (int j = 1; j < 16; ++j) {
            double x = out.grid_[lo] + (out.grid_[hi] - out.grid_[lo]) * j / 16.0;
            double v = out.exponent(x);
            if (want_max ? v > best : v < best) best = v;
        }
        return best;
    };
    emin = refine(static_cast<std::size_t>(minmax.first - out.cum_.begin()), false);
    emax = refine(static_cast<std::size_t>(minmax.second - out.cum_.begin()), true);
    out.rho_min_ = std::exp(emin);
    out.rho_max_ = std::exp(emax);
    if (!(out.rho_min_ > 0.0) || !std::isfinite(out.rho_max_))
        throw NumericError("rho extrema overflowed; |b|/eps is too large for this profile");
    return out;
}

double RhoProfile::exponent(double x) const {
    if (x <= x1_) return 0.0;
    if (x >= x2_) return cum_.back();
    double h = (x2_ - x1_) / static_cast<double>(grid_.size() - 1);
    return lagrange4(grid_, cum_, x1_, h, x);
}

double RhoProfile::rho(double x) const { return std::exp(exponent(x)); }

double weighted_l2_norm(const RealFn& g, const RhoProfile& rho, const QuadratureRule& rule) {
    return std::sqrt(integrate(
        [&](double x) {
            double v = g(x);
            return v * v * rho.rho(x);
        },
        rule));
}

}  // namespace pinncert
