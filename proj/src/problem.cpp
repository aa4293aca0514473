#include "pinncert/problem.hpp"

#include <algorithm>
#include <cmath>

#include "pinncert/errors.hpp"
#include "pinncert/util.hpp"

namespace pinncert {

namespace {

void check_shape(double x1, double x2, double eps, double p, double q) {
    if (!(x1 < x2))
        throw ProblemError("interval requires x1 < x2, got [" + format_double(x1) + ", " +
                           format_double(x2) + "]");
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw ProblemError("eps must be positive, got " + format_double(eps));
    if (!std::isfinite(p) || !std::isfinite(q))
        throw ProblemError("boundary values must be finite");
}

double min_c_on_grid(const Problem& prob) {
    return grid_min([&](double x) { return prob.c.eval(x); }, prob.x1, prob.x2);
}

}  // namespace

double grid_min(const std::function<double(double)>& g, double a, double b,
                int grid_points, int refine_rounds) {
    std::vector<double> xs = linspace(a, b, grid_points);
    double best = g(xs[0]);
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = g(xs[i]);
        if (!std::isfinite(v))
            throw ProblemError("non-finite coefficient value at x = " + format_double(xs[i]));
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    double lo = xs[best_i == 0 ? 0 : best_i - 1];
    double hi = xs[std::min(best_i + 1, xs.size() - 1)];
    for (int round = 0; round < refine_rounds; ++round) {
        double step = (hi - lo) / 4.0;
        double arg = lo;
        for (int j = 0; j <= 4; ++j) {
            double x = lo + step * j;
            double v = g(x);
            if (v < best) {
                best = v;
                arg = x;
            }
        }
        double half = (hi - lo) / 4.0;
        lo = std::max(a, arg - half);
        hi = std::min(b, arg + half);
    }
    return best;
}

Problem make_problem(double x1, double x2, double eps, const Expr& b_raw, const Expr& c_raw,
                     const Expr& f_raw, double p, double q, const Bindings& params,
                     std::string name) {
    check_shape(x1, x2, eps, p, q);
    Problem prob;
    prob.name = std::move(name);
    prob.x1 = x1;
    prob.x2 = x2;
    prob.eps = eps;
    prob.p = p;
    prob.q = q;
    prob.b_raw = b_raw;
    prob.c_raw = c_raw;
    prob.f_raw = f_raw;
    prob.params = params;
    prob.b = b_raw.bind(params);
    prob.c = c_raw.bind(params);
    prob.f = f_raw.bind(params);
    prob.b_prime = prob.b.diff();
    double cmin = min_c_on_grid(prob);
    if (cmin < 0.0)
        throw ProblemError("zeroth-order coefficient must satisfy c >= 0; grid minimum is " +
                           format_double(cmin));
    return prob;
}

ValidationReport validate(const Problem& prob) {
    ValidationReport rep;
    // finiteness is checked by grid_min as a side effect; b and f get a pass
    // of their own since c's grid does not touch them
    grid_min([&](double x) { return prob.b.eval(x); }, prob.x1, prob.x2);
    grid_min([&](double x) { return prob.f.eval(x); }, prob.x1, prob.x2);
    rep.min_c = min_c_on_grid(prob);
    rep.lambda_min_c = rep.min_c;
    rep.gamma = grid_min(
        [&](double x) { return -0.5 * prob.b_prime.eval(x) + prob.c.eval(x); }, prob.x1,
        prob.x2);
    rep.energy_ok = rep.min_c >= 0.0;
    rep.weighted_ok = rep.lambda_min_c > 0.0;
    rep.plain_ok = rep.gamma > 0.0;
    return rep;
}

std::vector<std::string> registry_names() {
    return {"example36", "example41", "example51", "example52"};
}

namespace {

Bindings merge_defaults(const std::string& name, const Bindings& defaults,
                        const Bindings& given) {
    Bindings out = defaults;
    for (const auto& [key, value] : given) {
        if (!out.count(key))
            throw ProblemError(name + " has no parameter '" + key + "'");
        if (!std::isfinite(value))
            throw ProblemError(name + ": parameter '" + key + "' must be finite");
        out[key] = value;
    }
    if (out.count("eps") && !(out["eps"] > 0.0))
        throw ProblemError(name + ": eps must be positive, got " + format_double(out["eps"]));
    for (const char* nonneg : {"k", "lambda"})
        if (out.count(nonneg) && out[nonneg] < 0.0)
            throw ProblemError(name + ": parameter '" + std::string(nonneg) +
                               "' must be nonnegative");
    return out;
}

Problem build_example36(const Bindings& given) {
    Bindings params = merge_defaults("example36", {}, given);
    Problem prob = make_problem(0.0, 1.0, 1.0, parse("x"), parse("10"),
                                parse("(14*x - 10*x^2 - x^3)*exp(x)"), 0.0, 0.0, params,
                                "example36");
    prob.exact = ExactSolution{"poly_exp", parse("x*(1 - x)*exp(x)"), params};
    return prob;
}

Problem build_example41(const Bindings& given) {
    Bindings params = merge_defaults("example41", {{"eps", 1.0}, {"lambda", 0.0}}, given);
    double eps = params.at("eps");
    double lambda = params.at("lambda");
    std::set<std::string> names = {"lambda"};
    Problem prob = make_problem(0.0, 1.0, eps, parse("2"), parse("lambda", names),
                                parse("0"), 0.0, 1.0, params, "example41");
    // y = (exp(a1 x) - exp(a2 x)) / (exp(a1) - exp(a2)) with
    // a1,a2 = 1/eps +- sqrt(1/eps^2 + lambda/eps); written with all exponents
    // shifted by -a1 so nothing overflows for small eps
    double s = std::sqrt(1.0 / (eps * eps) + lambda / eps);
    double a1 = 1.0 / eps + s;
    double a2 = 1.0 / eps - s;
    double d = -std::expm1(a2 - a1);  // 1 - exp(-2s), always in (0, 1)
    Bindings hidden = {{"a1", a1}, {"a2", a2}, {"d", d}};
    Expr formula =
        parse("(exp(a1*(x - 1)) - exp(a2*x - a1)) / d", {"a1", "a2", "d"}).bind(hidden);
    Bindings tagged = params;
    tagged["s"] = s;
    prob.exact = ExactSolution{"two_exponentials", formula, tagged};
    return prob;
}

Problem build_example5x(const std::string& name, const Bindings& given) {
    Bindings params =
        merge_defaults(name, {{"eps", 1.0}, {"k", 7.0}, {"lambda", 7.0}}, given);
    double eps = params.at("eps");
    std::set<std::string> names = {"eps", "k", "lambda"};
    Expr b = parse("-k*x", names);
    Expr c = parse("lambda", names);
    Problem prob;
    if (name == "example51") {
        Expr f = parse(
            "(k*x^3 + (k - lambda + eps)*x^2 + (3*eps - k + lambda)*x)*exp(x)"
            " + lambda*x^2 - 2*k*x^2 - 2*eps",
            names);
        prob = make_problem(0.0, 1.0, eps, b, c, f, 0.0, 1.0, params, name);
        prob.exact = ExactSolution{"poly_exp_shift", parse("x*(1 - x)*exp(x) + x^2"), params};
    } else {
        Expr f = parse(
            "(eps*pi^2 + pi*k*x + lambda)*sin(pi*x)"
            " + (eps*pi^2 - pi*k*x + lambda)*cos(pi*x)",
            names);
        prob = make_problem(0.0, 1.0, eps, b, c, f, 1.0, -1.0, params, name);
        prob.exact = ExactSolution{"trig", parse("sin(pi*x) + cos(pi*x)"), params};
    }
    return prob;
}

}  // namespace

Problem registry_get(const std::string& name, const Bindings& params) {
    if (name == "example36") return build_example36(params);
    if (name == "example41") return build_example41(params);
    if (name == "example51" || name == "example52") return build_example5x(name, params);
    throw ProblemError("unknown registry problem '" + name + "'");
}

Problem with_param(const Problem& prob, const std::string& param, double value) {
    Bindings params = prob.params;
    if (prob.name != "custom") {
        params[param] = value;  // registry_get validates the name
        return registry_get(prob.name, params);
    }
    double eps = prob.eps;
    if (param == "eps") {
        eps = value;
    } else {
        params[param] = value;
    }
    return make_problem(prob.x1, prob.x2, eps, prob.b_raw, prob.c_raw, prob.f_raw, prob.p,
                        prob.q, params, prob.name);
}

}  // namespace pinncert
