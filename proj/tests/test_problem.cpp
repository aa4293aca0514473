#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pinncert/errors.hpp"
#include "pinncert/problem.hpp"
#include "pinncert/trial.hpp"

using namespace pinncert;

namespace {

// sup over a fine grid of |L[y_exact] - f|, which should vanish up to
// round-off when the registered closed form really solves the equation
double closed_form_residual(const Problem& prob) {
    REQUIRE(prob.exact.has_value());
    AnalyticTrial t(prob.exact->formula);
    double worst = 0.0, fmax = 0.0;
    const int grid = 1001;
    for (int i = 0; i <= grid; ++i) {
        double x = prob.x1 + (prob.x2 - prob.x1) * i / grid;
        double f = prob.f.eval(x);
        worst = std::max(worst, std::abs(apply_operator(prob, t, x) - f));
        fmax = std::max(fmax, std::abs(f));
    }
    return worst / (1.0 + fmax);
}

}  // namespace

TEST_CASE("registry holds exactly the four built-in problems") {
    CHECK(registry_names() ==
          std::vector<std::string>{"example36", "example41", "example51", "example52"});
}

TEST_CASE("every registered closed form solves its own equation") {
    CHECK(closed_form_residual(registry_get("example36")) <= 1e-8);
    CHECK(closed_form_residual(registry_get("example41")) <= 1e-8);
    CHECK(closed_form_residual(registry_get("example41", {{"lambda", 10.0}})) <= 1e-8);
    CHECK(closed_form_residual(registry_get("example41", {{"eps", 0.05}, {"lambda", 3.0}})) <=
          1e-8);
    CHECK(closed_form_residual(registry_get("example51")) <= 1e-8);
    CHECK(closed_form_residual(registry_get("example51", {{"k", 10.0}, {"lambda", 15.0}})) <=
          1e-8);
    CHECK(closed_form_residual(registry_get("example51", {{"eps", 0.1}})) <= 1e-8);
    CHECK(closed_form_residual(registry_get("example52")) <= 1e-8);
    CHECK(closed_form_residual(registry_get("example52", {{"k", 7.0}, {"lambda", 100.0}})) <=
          1e-8);
}

TEST_CASE("closed forms match the boundary data") {
    for (const std::string& name : registry_names()) {
        Problem prob = registry_get(name);
        CAPTURE(name);
        CHECK(prob.exact->eval(prob.x1) == doctest::Approx(prob.p).epsilon(1e-12));
        CHECK(prob.exact->eval(prob.x2) == doctest::Approx(prob.q).epsilon(1e-12));
    }
}

TEST_CASE("example36 coefficients and solution values") {
    Problem prob = registry_get("example36");
    CHECK(prob.eps == 1.0);
    CHECK(prob.p == 0.0);
    CHECK(prob.q == 0.0);
    CHECK(prob.b.eval(0.5) == doctest::Approx(0.5));
    CHECK(prob.c.eval(0.3) == doctest::Approx(10.0));
    // y(x) = x(1-x)e^x
    CHECK(prob.exact->eval(0.5) == doctest::Approx(0.25 * std::exp(0.5)).epsilon(1e-14));
}

TEST_CASE("example41 reduces to y = (e^x - 1)/(e - 1) scale at lambda = 0") {
    Problem prob = registry_get("example41");  // eps = 1, lambda = 0 by default
    // exponents a1 = 2, a2 = 0: y(x) = (e^{2x} - 1)/(e^2 - 1), y(1/2) = 1/(e + 1)
    CHECK(prob.exact->eval(0.5) ==
          doctest::Approx(1.0 / (std::exp(1.0) + 1.0)).epsilon(1e-14));
    CHECK(prob.p == 0.0);
    CHECK(prob.q == 1.0);
}

TEST_CASE("example41 boundary layer stays finite at small eps") {
    Problem prob = registry_get("example41", {{"eps", 0.01}, {"lambda", 5.0}});
    for (double x : {0.0, 0.25, 0.5, 0.9, 0.99, 1.0}) {
        double y = prob.exact->eval(x);
        CHECK(std::isfinite(y));
        CHECK(y >= -1e-9);
        CHECK(y <= 1.0 + 1e-9);
    }
    CHECK(prob.exact->eval(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("example51 lower bound for -b'/2 + c is k/2 + lambda") {
    for (auto [k, lam] : {std::pair{7.0, 1.0}, {7.0, 100.0}, {10.0, 15.0}}) {
        Problem prob = registry_get("example51", {{"k", k}, {"lambda", lam}});
        ValidationReport val = validate(prob);
        CHECK(val.gamma == doctest::Approx(0.5 * k + lam).epsilon(1e-12));
        CHECK(val.lambda_min_c == doctest::Approx(lam).epsilon(1e-12));
        CHECK(val.plain_ok);
        CHECK(val.weighted_ok);
        CHECK(val.energy_ok);
    }
}

TEST_CASE("example51 source term endpoint value") {
    for (double eps : {1.0, 0.1}) {
        Problem prob = registry_get("example51", {{"eps", eps}, {"k", 7.0}, {"lambda", 7.0}});
        CHECK(prob.f.eval(0.0) == doctest::Approx(-2.0 * eps).epsilon(1e-13));
    }
}

TEST_CASE("example52 source term endpoint value") {
    Problem prob = registry_get("example52", {{"k", 10.0}, {"lambda", 15.0}});
    // L[sin(pi x) + cos(pi x)] at 0 with b(0) = 0: eps pi^2 + lambda
    CHECK(prob.f.eval(0.0) == doctest::Approx(M_PI * M_PI + 15.0).epsilon(1e-13));
    CHECK(prob.p == 1.0);
    CHECK(prob.q == -1.0);
}

TEST_CASE("validation on example36") {
    ValidationReport val = validate(registry_get("example36"));
    CHECK(val.min_c == doctest::Approx(10.0));
    CHECK(val.gamma == doctest::Approx(9.5).epsilon(1e-12));  // -1/2 + 10
    CHECK(val.plain_ok);
    CHECK(val.weighted_ok);
}

TEST_CASE("registry rejects bad names and parameters") {
    CHECK_THROWS_AS(registry_get("example99"), ProblemError);
    CHECK_THROWS_AS(registry_get("example51", {{"eps", 0.0}}), ProblemError);
    CHECK_THROWS_AS(registry_get("example51", {{"eps", -1.0}}), ProblemError);
    CHECK_THROWS_AS(registry_get("example51", {{"k", -2.0}}), ProblemError);
    CHECK_THROWS_AS(registry_get("example51", {{"zeta", 1.0}}), ProblemError);
    CHECK_THROWS_AS(registry_get("example36", {{"k", 1.0}}), ProblemError);
}

TEST_CASE("make_problem guards the basic shape") {
    Expr zero = parse("0");
    Expr one = parse("1");
    CHECK_THROWS_AS(make_problem(1.0, 0.0, 1.0, zero, one, zero, 0, 0), ProblemError);
    CHECK_THROWS_AS(make_problem(0.0, 1.0, 0.0, zero, one, zero, 0, 0), ProblemError);
    // c dips negative inside the interval
    CHECK_THROWS_AS(make_problem(0.0, 1.0, 1.0, zero, parse("x - 0.5"), zero, 0, 0),
                    ProblemError);
}

TEST_CASE("with_param rebinds a registry problem consistently") {
    Problem prob = registry_get("example51", {{"k", 7.0}, {"lambda", 7.0}});
    Problem changed = with_param(prob, "lambda", 100.0);
    CHECK(changed.c.eval(0.3) == doctest::Approx(100.0));
    // the closed form of example51 does not involve lambda
    CHECK(changed.exact->eval(0.5) == doctest::Approx(prob.exact->eval(0.5)));
    // f does involve lambda
    CHECK(changed.f.eval(0.5) != doctest::Approx(prob.f.eval(0.5)));

    Problem small = with_param(prob, "eps", 0.1);
    CHECK(small.eps == doctest::Approx(0.1));
    CHECK(closed_form_residual(small) <= 1e-8);
}

TEST_CASE("with_param rebinds a custom problem") {
    Problem prob = make_problem(0.0, 1.0, 1.0, parse("k*x", {"k"}), parse("1"), parse("0"),
                                0.0, 0.0, {{"k", 2.0}});
    CHECK(prob.b.eval(1.0) == doctest::Approx(2.0));
    Problem changed = with_param(prob, "k", 3.0);
    CHECK(changed.b.eval(1.0) == doctest::Approx(3.0));
    Problem scaled = with_param(prob, "eps", 0.5);
    CHECK(scaled.eps == doctest::Approx(0.5));
}
