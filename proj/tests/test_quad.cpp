#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pinncert/errors.hpp"
#include "pinncert/problem.hpp"
#include "pinncert/quad.hpp"

using namespace pinncert;

TEST_CASE("integral of x(1-x)e^x over (0,1) is 3 - e") {
    auto g = [](double x) { return x * (1 - x) * std::exp(x); };
    const double closed = 3.0 - std::exp(1.0);  // antiderivative (-x^2 + 3x - 3)e^x

    double quad = integrate_to_tol(g, 0.0, 1.0);
    CHECK(quad == doctest::Approx(closed).epsilon(1e-12));

    // independent route: midpoint Riemann sum
    double riemann = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) riemann += g((i + 0.5) / n) / n;
    CHECK(quad == doctest::Approx(riemann).epsilon(1e-9));
}

TEST_CASE("integral of sin^2(pi x) over (0,1) is 1/2") {
    auto g = [](double x) { double s = std::sin(M_PI * x); return s * s; };
    CHECK(integrate_to_tol(g, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand against its antiderivative") {
    // int e^{ax} cos(bx) dx = e^{ax}(a cos(bx) + b sin(bx)) / (a^2 + b^2)
    const double a = 5.0, b = 40.0;
    auto g = [&](double x) { return std::exp(a * x) * std::cos(b * x); };
    auto F = [&](double x) {
        return std::exp(a * x) * (a * std::cos(b * x) + b * std::sin(b * x)) / (a * a + b * b);
    };
    CHECK(integrate_to_tol(g, 0.0, 1.0, 1e-10) ==
          doctest::Approx(F(1.0) - F(0.0)).epsilon(1e-9));
}

TEST_CASE("eight-point rule is exact through degree fifteen") {
    QuadratureRule rule = QuadratureRule::gauss_legendre(0.0, 1.0, 1, 8);
    auto g = [](double x) { return std::pow(x, 15); };
    CHECK(integrate(g, rule) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    auto h = [](double x) { return std::pow(x, 16); };
    // degree sixteen is just beyond the rule
    CHECK(std::abs(integrate(h, rule) - 1.0 / 17.0) > 1e-16);
}

TEST_CASE("non-finite integrand values are reported") {
    auto g = [](double x) { return std::sqrt(x - 2.0); };  // NaN on (0,1)
    CHECK_THROWS_AS(integrate_to_tol(g, 0.0, 1.0), NumericError);
}

TEST_CASE("sup norm on a grid") {
    auto g = [](double x) { return std::sin(M_PI * x); };
    CHECK(sup_norm(g, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
    auto h = [](double x) { return 3.0 * x - 1.0; };
    CHECK(sup_norm(h, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("weight profile of example51 is exp(k x^2 / (2 eps))") {
    Problem prob = registry_get("example51", {{"k", 7.0}, {"lambda", 7.0}});
    RhoProfile rho = RhoProfile::build(prob);
    // -b/eps = 7x integrates to 3.5 x^2
    CHECK(rho.exponent(1.0) == doctest::Approx(3.5).epsilon(1e-9));
    CHECK(rho.exponent(0.5) == doctest::Approx(0.875).epsilon(1e-9));
    CHECK(rho.rho(1.0) == doctest::Approx(std::exp(3.5)).epsilon(1e-8));
    CHECK(rho.rho_min() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rho.rho_max() == doctest::Approx(std::exp(3.5)).epsilon(1e-8));
    CHECK(rho.b_l1() == doctest::Approx(3.5).epsilon(1e-9));
    CHECK(rho.loose_exponent() == doctest::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("weight profile of example41 is exp(-2x)") {
    Problem prob = registry_get("example41", {{"lambda", 10.0}});
    RhoProfile rho = RhoProfile::build(prob);
    CHECK(rho.rho(0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(rho.rho_min() == doctest::Approx(std::exp(-2.0)).epsilon(1e-8));
    CHECK(rho.rho_max() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rho.b_l1() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("weight profile invariants across diffusion scales") {
    for (double eps : {1.0, 0.5, 0.1, 0.01}) {
        CAPTURE(eps);
        Problem prob = registry_get("example51", {{"eps", eps}, {"k", 7.0}, {"lambda", 1.0}});
        RhoProfile rho = RhoProfile::build(prob);
        CHECK(rho.rho(prob.x1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rho.rho_min() > 0.0);
        CHECK(rho.rho_max() >= rho.rho_min());
        // b <= 0 here, so the exponent is nondecreasing and the max sits at x2
        CHECK(rho.rho_max() == doctest::Approx(rho.rho(prob.x2)).epsilon(1e-9));
        CHECK(rho.rho_max() == doctest::Approx(std::exp(3.5 / eps)).epsilon(1e-7));
        double prev = rho.exponent(0.0);
        for (int i = 1; i <= 20; ++i) {
            double cur = rho.exponent(i / 20.0);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("weighted norm against a closed form") {
    Problem prob = registry_get("example41", {{"lambda", 10.0}});  // rho = e^{-2x}
    RhoProfile rho = RhoProfile::build(prob);
    auto one = [](double) { return 1.0; };
    double expect = std::sqrt((1.0 - std::exp(-2.0)) / 2.0);
    QuadratureRule rule = QuadratureRule::gauss_legendre(prob.x1, prob.x2);
    CHECK(weighted_l2_norm(one, rho, rule) == doctest::Approx(expect).epsilon(1e-8));
}
