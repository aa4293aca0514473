#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "pinncert/certify.hpp"
#include "pinncert/errors.hpp"

using namespace pinncert;

TEST_CASE("certificate constants of example51 against closed forms") {
    Problem prob = registry_get("example51", {{"k", 7.0}, {"lambda", 7.0}});

    Certificate plain = constants(prob, Family::kPlain);
    CHECK(plain.gamma == doctest::Approx(10.5).epsilon(1e-12));
    CHECK(plain.ratio_bound == doctest::Approx(4.0 / 441.0).epsilon(1e-12));

    Certificate weighted = constants(prob, Family::kWeighted);
    // rho = exp(3.5 x^2): max/min = e^{3.5}, lambda = 7
    CHECK(weighted.lambda == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(weighted.ratio_bound == doctest::Approx(std::exp(3.5) / 49.0).epsilon(1e-7));
    // b keeps one sign, so the loose form collapses onto the tight one
    CHECK(weighted.ratio_bound_loose ==
          doctest::Approx(weighted.ratio_bound).epsilon(1e-7));

    Certificate energy = constants(prob, Family::kEnergy);
    CHECK(energy.K1 == doctest::Approx(std::exp(3.5)).epsilon(1e-7));
    CHECK(energy.ratio_bound == doctest::Approx(std::exp(7.0)).epsilon(1e-7));
    double k2 = std::exp(3.5) * (3.5 + 7.0) + 1.0;
    CHECK(energy.K2 == doctest::Approx(k2).epsilon(1e-7));
    CHECK(energy.pinn1_factor ==
          doctest::Approx(std::exp(7.0) + k2 * k2).epsilon(1e-7));
}

TEST_CASE("weighted bound of a constant-convection problem is e^2 over lambda^2") {
    Problem prob = registry_get("example41", {{"lambda", 10.0}});
    Certificate weighted = constants(prob, Family::kWeighted);
    CHECK(weighted.ratio_bound == doctest::Approx(std::exp(2.0) / 100.0).epsilon(1e-7));
    CHECK(weighted.ratio_bound_loose == doctest::Approx(weighted.ratio_bound).epsilon(1e-7));

    Certificate plain = constants(prob, Family::kPlain);  // b' = 0, gamma = lambda
    CHECK(plain.ratio_bound == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("inadmissible families are refused with an explanation") {
    Problem prob = registry_get("example41");  // lambda = 0
    CHECK_THROWS_AS(constants(prob, Family::kWeighted), CertifyError);
    CHECK_THROWS_AS(constants(prob, Family::kPlain), CertifyError);
    std::vector<Certificate> fams41 = constants(prob);
    CHECK(fams41.size() == 1);
    CHECK(fams41[0].family == Family::kEnergy);

    // gamma > 0 can hold while min c > 0 fails: b = -x gives -b'/2 = 1/2
    Problem tilted = make_problem(0.0, 1.0, 1.0, parse("-x"), parse("0"), parse("1"), 0, 0);
    std::vector<Certificate> fams = constants(tilted);
    CHECK(fams.size() == 2);  // energy + plain
    CHECK(constants(tilted, Family::kPlain).gamma == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_THROWS_AS(constants(tilted, Family::kWeighted), CertifyError);
}

TEST_CASE("the exact solution certifies trivially") {
    Problem prob = registry_get("example36");
    AnalyticTrial t(prob.exact->formula);
    SampleSet s = SampleSet::draw(0, 128, prob.x1, prob.x2);
    Report rep = report(prob, t, s, Reference::exact(prob));
    CHECK(rep.error_integral <= 1e-18);
    CHECK(rep.loss_integral <= 1e-18);
    CHECK(rep.ratio == 0.0);  // 0/0 resolves to 0 by convention
    CHECK(rep.boundary_loss <= 1e-20);
    CHECK(rep.plain_applicable);
    CHECK(rep.weighted_applicable);
    CHECK(rep.energy_applicable);
    CHECK(rep.all_pass());
}

TEST_CASE("untrained composite trials satisfy every applicable bound") {
    Problem prob = registry_get("example51", {{"k", 7.0}, {"lambda", 1.0}});
    Pinn2Trial t(Network::init(12), prob);
    SampleSet s = SampleSet::draw(12, 256, prob.x1, prob.x2);
    Report rep = report(prob, t, s, Reference::exact(prob));

    CHECK(rep.ratio == doctest::Approx(rep.error_integral / rep.loss_integral));
    CHECK(rep.ratio <= (4.0 / 81.0) * (1 + 1e-6));
    CHECK(rep.bound_plain == doctest::Approx(4.0 / 81.0).epsilon(1e-12));
    CHECK(rep.plain_pass);
    CHECK(rep.weighted_pass);
    CHECK(rep.energy_pass);
    CHECK(rep.all_pass());
    CHECK(rep.boundary_loss == 0.0);
    CHECK(rep.loss_integral == doctest::Approx(rep.residual_integral));
    CHECK(rep.seed == 12);
    CHECK(rep.n == 256);
}

TEST_CASE("raw-network trials report through the boundary-inclusive route") {
    Problem prob = registry_get("example51", {{"k", 7.0}, {"lambda", 7.0}});
    Pinn1Trial t(Network::init(5));
    SampleSet s = SampleSet::draw(5, 256, prob.x1, prob.x2);
    Report rep = report(prob, t, s, Reference::exact(prob));

    CHECK_FALSE(rep.plain_applicable);
    CHECK_FALSE(rep.weighted_applicable);
    CHECK(rep.energy_applicable);
    CHECK(rep.boundary_loss > 0.0);
    CHECK(rep.loss_integral ==
          doctest::Approx(rep.residual_integral + rep.boundary_loss));
    Certificate energy = constants(prob, Family::kEnergy);
    CHECK(rep.bound_energy == doctest::Approx(energy.pinn1_factor));
    CHECK(rep.energy_pass);
    CHECK(rep.all_pass());

    ReportOptions want_plain;
    want_plain.only_family = Family::kPlain;
    CHECK_THROWS_AS(report(prob, t, s, Reference::exact(prob), want_plain), CertifyError);
}

TEST_CASE("restricting to one family narrows the report") {
    Problem prob = registry_get("example52", {{"k", 7.0}, {"lambda", 10.0}});
    Pinn2Trial t(Network::init(3), prob);
    SampleSet s = SampleSet::draw(3, 128, prob.x1, prob.x2);
    ReportOptions opt;
    opt.only_family = Family::kWeighted;
    Report rep = report(prob, t, s, Reference::exact(prob), opt);
    CHECK(rep.weighted_applicable);
    CHECK_FALSE(rep.plain_applicable);
    CHECK_FALSE(rep.energy_applicable);
    CHECK(rep.weighted_pass);
}

TEST_CASE("the tolerance budget is what keeps comparisons honest") {
    // with the slack multiplier forced to zero the assertion error <= 0 must
    // fail for any trial with a real gap
    Problem prob = registry_get("example51");
    Pinn2Trial t(Network::init(1), prob);
    SampleSet s = SampleSet::draw(1, 64, prob.x1, prob.x2);
    ReportOptions opt;
    opt.rel_budget = -1.0;
    Report rep = report(prob, t, s, Reference::exact(prob), opt);
    CHECK_FALSE(rep.plain_pass);
    CHECK_FALSE(rep.all_pass());
}

TEST_CASE("sampled statistics agree with the integrals within their halfwidths") {
    Problem prob = registry_get("example51", {{"k", 7.0}, {"lambda", 7.0}});
    int joint_hits = 0;
    const int trials = 50;
    for (int seed = 0; seed < trials; ++seed) {
        Pinn2Trial t(Network::init(seed), prob);
        SampleSet s = SampleSet::draw(seed, 4096, prob.x1, prob.x2);
        Report rep = report(prob, t, s, Reference::exact(prob));
        bool err_ok =
            std::abs(rep.error_sampled - rep.error_integral) <= rep.error_halfwidth_k5;
        bool loss_ok = std::abs(rep.loss_sampled - rep.loss_integral) <=
                       rep.loss_halfwidth_k5;
        if (err_ok && loss_ok) ++joint_hits;
    }
    CHECK(joint_hits >= 48);  // 96 percent joint coverage
}

TEST_CASE("finite-difference references certify problems without closed forms") {
    // the same equation as example41 with lambda = 10, entered as arbitrary
    // coefficient text so no closed form is attached
    Problem custom =
        make_problem(0.0, 1.0, 1.0, parse("2"), parse("10"), parse("0"), 0.0, 1.0);
    REQUIRE_FALSE(custom.exact.has_value());
    Pinn2Trial t(Network::init(8), custom);
    SampleSet s = SampleSet::draw(8, 256, custom.x1, custom.x2);
    Report rep = certified_report(custom, t, s);
    CHECK(rep.reference_error > 0.0);
    CHECK(rep.all_pass());

    // the closed form is available through the registry twin
    Problem twin = registry_get("example41", {{"lambda", 10.0}});
    Pinn2Trial t2(Network::init(8), twin);
    Report exact_rep = report(twin, t2, s, Reference::exact(twin));
    CHECK(rep.error_integral ==
          doctest::Approx(exact_rep.error_integral).epsilon(0.05));
    CHECK(rep.ratio == doctest::Approx(exact_rep.ratio).epsilon(0.05));
}

TEST_CASE("sweeps keep one row per value in input order") {
    Problem base = registry_get("example51", {{"k", 7.0}, {"lambda", 7.0}});
    SweepConfig cfg;
    cfg.param = "lambda";
    cfg.values = {1.0, 10.0, 100.0};
    cfg.loss_spec.n = 32;
    cfg.train_cfg.epochs = 5;
    cfg.train_cfg.seed = 0;

    std::vector<SweepRecord> records = sweep(base, cfg);
    REQUIRE(records.size() == 3);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].ok);
        CHECK(records[i].certified);
        CHECK(records[i].param_value == cfg.values[i]);
        CHECK(records[i].param_name == "lambda");
        CHECK(records[i].epochs == 5);
        CHECK(records[i].n == 32);
    }
    CHECK(records[0].bound_plain > records[1].bound_plain);
    CHECK(records[1].bound_plain > records[2].bound_plain);
    CHECK(records[0].gamma == doctest::Approx(4.5).epsilon(1e-9));
}

TEST_CASE("parallel sweeps give the sequential answer") {
    Problem base = registry_get("example51");
    SweepConfig cfg;
    cfg.param = "lambda";
    cfg.values = {1.0, 3.0, 9.0, 27.0};
    cfg.loss_spec.n = 32;
    cfg.train_cfg.epochs = 4;

    std::vector<SweepRecord> seq = sweep(base, cfg);
    cfg.jobs = 4;
    std::vector<SweepRecord> par = sweep(base, cfg);
    REQUIRE(par.size() == seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(par[i].loss == seq[i].loss);
        CHECK(par[i].error == seq[i].error);
        CHECK(par[i].ratio == seq[i].ratio);
        CHECK(par[i].param_value == seq[i].param_value);
    }
}

TEST_CASE("per-point failures are recorded without aborting the sweep") {
    Problem base = registry_get("example51");
    SweepConfig cfg;
    cfg.param = "lambda";
    cfg.values = {1.0, -5.0, 4.0};  // the middle value is rejected
    cfg.loss_spec.n = 16;
    cfg.train_cfg.epochs = 2;

    std::vector<SweepRecord> records = sweep(base, cfg);
    REQUIRE(records.size() == 3);
    CHECK(records[0].ok);
    CHECK_FALSE(records[1].ok);
    CHECK_FALSE(records[1].message.empty());
    CHECK(std::isnan(records[1].loss));
    CHECK(records[2].ok);
}

TEST_CASE("CSV emission: exact header, one line per record, stable text") {
    Problem base = registry_get("example51");
    SweepConfig cfg;
    cfg.param = "lambda";
    cfg.values = {2.0, 20.0};
    cfg.loss_spec.n = 16;
    cfg.train_cfg.epochs = 3;

    std::vector<SweepRecord> records = sweep(base, cfg);
    std::ostringstream out;
    write_csv(out, records);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "param_name,param_value,epsilon,gamma,lambda_min_c,loss,error,ratio,"
          "bound_plain,bound_weighted_tight,bound_weighted_loose,bound_energy,"
          "boundary_loss,n,seed,epochs,wall_ms");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row)) ++rows;
    CHECK(rows == 2);

    // identical run, identical text except the timing column
    std::vector<SweepRecord> again = sweep(base, cfg);
    std::ostringstream out2;
    write_csv(out2, again);
    auto strip_wall = [](const std::string& csv) {
        std::string kept;
        std::istringstream ls(csv);
        std::string line;
        while (std::getline(ls, line)) {
            kept += line.substr(0, line.rfind(','));
            kept += '\n';
        }
        return kept;
    };
    CHECK(strip_wall(out.str()) == strip_wall(out2.str()));
}
