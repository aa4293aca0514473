#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pinncert/errors.hpp"
#include "pinncert/rng.hpp"
#include "pinncert/train.hpp"

using namespace pinncert;

namespace {

LossSpec small_spec() {
    LossSpec spec;
    spec.n = 64;
    return spec;
}

TrainConfig short_cfg(int epochs, std::uint64_t seed = 0) {
    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("training reduces the loss") {
    Problem prob = registry_get("example36");
    Pinn2Trial t(Network::init(0), prob);
    TrainResult res = train(prob, t, small_spec(), short_cfg(50));
    REQUIRE(res.loss_history.size() == 50);
    CHECK(res.loss_history.back() < res.initial_loss);
    CHECK(res.loss_history.back() < 0.05 * res.initial_loss);
}

TEST_CASE("identical configuration gives an identical trajectory") {
    Problem prob = registry_get("example51");
    Pinn2Trial a(Network::init(4), prob);
    Pinn2Trial b(Network::init(4), prob);
    TrainResult ra = train(prob, a, small_spec(), short_cfg(20, 4));
    TrainResult rb = train(prob, b, small_spec(), short_cfg(20, 4));
    CHECK(ra.loss_history == rb.loss_history);
    CHECK(ra.error_history == rb.error_history);
    CHECK(a.network()->params() == b.network()->params());
}

TEST_CASE("fixed sampling reuses the drawn collocation points") {
    Problem prob = registry_get("example51");
    Pinn2Trial t(Network::init(2), prob);
    TrainResult res = train(prob, t, small_spec(), short_cfg(5, 2));
    SampleSet expect = SampleSet::draw(2, 64, prob.x1, prob.x2);
    CHECK(res.sample.points == expect.points);
}

TEST_CASE("resampling changes the trajectory but stays deterministic") {
    Problem prob = registry_get("example51");
    LossSpec fixed = small_spec();
    LossSpec fresh = small_spec();
    fresh.resample = true;

    Pinn2Trial a(Network::init(1), prob), b(Network::init(1), prob), c(Network::init(1), prob);
    TrainResult ra = train(prob, a, fixed, short_cfg(10, 1));
    TrainResult rb = train(prob, b, fresh, short_cfg(10, 1));
    TrainResult rc = train(prob, c, fresh, short_cfg(10, 1));
    CHECK(ra.loss_history != rb.loss_history);
    CHECK(rb.loss_history == rc.loss_history);
    CHECK(rb.sample.points != ra.sample.points);
}

TEST_CASE("loss gradient matches directional finite differences") {
    const double h = 1e-6;
    for (std::uint64_t seed : {0ull, 1ull, 2ull, 3ull, 4ull}) {
        Problem prob = registry_get("example51");
        Pinn2Trial t(Network::init(seed), prob);
        SampleSet s = SampleSet::draw(seed, 32, prob.x1, prob.x2);
        LossSpec spec = small_spec();
        spec.n = 32;

        std::vector<double> grad = loss_grad(prob, t, s, spec);
        REQUIRE(grad.size() == t.network()->param_count());

        RngStream dirs = RngStream::from_seed(seed, 0x77);
        std::vector<double> dir(grad.size());
        double analytic = 0.0;
        for (std::size_t i = 0; i < dir.size(); ++i) {
            dir[i] = dirs.next_symmetric();
            analytic += grad[i] * dir[i];
        }
        auto probe = [&](double step) {
            Pinn2Trial moved(*t.network(), prob);
            for (std::size_t i = 0; i < dir.size(); ++i)
                moved.network()->params()[i] += step * dir[i];
            return loss(prob, moved, s, spec);
        };
        double fd = (probe(h) - probe(-h)) / (2 * h);
        CHECK(analytic == doctest::Approx(fd).epsilon(1e-3));
    }
}

TEST_CASE("boundary penalty reaches the raw-network gradient") {
    Problem prob = registry_get("example52");  // nonzero boundary data
    Pinn1Trial t(Network::init(6));
    SampleSet s = SampleSet::draw(6, 32, prob.x1, prob.x2);
    LossSpec spec = small_spec();
    spec.n = 32;

    double base = loss(prob, t, s, spec);
    double r1 = prob.p - t.eval(prob.x1);
    double r2 = prob.q - t.eval(prob.x2);
    LossSpec heavy = spec;
    heavy.boundary_weight = 2.0;
    CHECK(loss(prob, t, s, heavy) ==
          doctest::Approx(base + r1 * r1 + r2 * r2).epsilon(1e-12));

    const double h = 1e-6;
    std::vector<double> grad = loss_grad(prob, t, s, spec);
    RngStream dirs = RngStream::from_seed(6, 0x78);
    std::vector<double> dir(grad.size());
    double analytic = 0.0;
    for (std::size_t i = 0; i < dir.size(); ++i) {
        dir[i] = dirs.next_symmetric();
        analytic += grad[i] * dir[i];
    }
    auto probe = [&](double step) {
        Pinn1Trial moved(*t.network());
        for (std::size_t i = 0; i < dir.size(); ++i)
            moved.network()->params()[i] += step * dir[i];
        return loss(prob, moved, s, spec);
    };
    double fd = (probe(h) - probe(-h)) / (2 * h);
    CHECK(analytic == doctest::Approx(fd).epsilon(1e-3));
}

TEST_CASE("composite boundary values survive every epoch") {
    Problem prob = registry_get("example52");
    Pinn2Trial t(Network::init(0), prob);
    for (int epoch = 0; epoch < 10; ++epoch) {
        train(prob, t, small_spec(), short_cfg(1, 0));
        CHECK(t.eval(prob.x1) == prob.p);
        CHECK(t.eval(prob.x2) == prob.q);
    }
}

TEST_CASE("error history tracks problems with a closed form") {
    Problem with_exact = registry_get("example36");
    Pinn2Trial a(Network::init(0), with_exact);
    TrainResult ra = train(with_exact, a, small_spec(), short_cfg(12));
    CHECK(ra.error_history.size() == 12);
    CHECK(ra.error_history.back() < ra.error_history.front());

    Problem custom = make_problem(0.0, 1.0, 1.0, parse("2"), parse("10"), parse("1"), 0, 0);
    Pinn2Trial b(Network::init(0), custom);
    TrainResult rb = train(custom, b, small_spec(), short_cfg(3));
    CHECK(rb.error_history.empty());
}

TEST_CASE("raw network trains too, paying the boundary penalty") {
    Problem prob = registry_get("example36");
    Pinn1Trial t(Network::init(0));
    TrainResult res = train(prob, t, small_spec(), short_cfg(50));
    CHECK(res.loss_history.back() < res.initial_loss);
    double r1 = prob.p - t.eval(prob.x1);
    double r2 = prob.q - t.eval(prob.x2);
    CHECK(r1 * r1 + r2 * r2 > 0.0);
}

TEST_CASE("the exact solution as analytic trial has negligible loss") {
    Problem prob = registry_get("example36");
    AnalyticTrial t(prob.exact->formula);
    SampleSet s = SampleSet::draw(0, 256, prob.x1, prob.x2);
    CHECK(loss(prob, t, s, {}) <= 1e-20);
    CHECK_THROWS_AS(loss_grad(prob, t, s, {}), TrainError);
    TrainConfig cfg = short_cfg(1);
    CHECK_THROWS_AS(train(prob, t, {}, cfg), TrainError);
}

TEST_CASE("diverging optimization is reported, not returned") {
    Problem prob = registry_get("example36");
    Pinn2Trial t(Network::init(0), prob);
    TrainConfig cfg = short_cfg(3);
    cfg.lr = 1e200;  // first step throws the parameters far out of range
    CHECK_THROWS_AS(train(prob, t, small_spec(), cfg), TrainError);
}
