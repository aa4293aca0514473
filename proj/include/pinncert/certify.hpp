#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <string>

#include "pinncert/oracle.hpp"
#include "pinncert/sample.hpp"
#include "pinncert/train.hpp"
#include "pinncert/trial.hpp"

namespace pinncert {

enum class Family { kEnergy, kWeighted, kPlain };

std::string family_name(Family f);

// One bound family's constants for a problem. ratio_bound multiplies Loss to
// dominate Error (both in interval-average form):
//   energy:   K1^2 for a boundary-exact trial; for the raw-network trial the
//             factor K1^2 + K2^2/|I| applies to residual + boundary loss
//   weighted: (max rho / min rho)/lambda^2, loose form exp(int |b|/eps)/lambda^2
//   plain:    1/gamma^2
struct Certificate {
    Family family = Family::kEnergy;
    double rho_min = 1.0, rho_max = 1.0;
    double ratio_bound = std::numeric_limits<double>::quiet_NaN();

    // energy
    double K1 = std::numeric_limits<double>::quiet_NaN();
    double K2 = std::numeric_limits<double>::quiet_NaN();
    double pinn1_factor = std::numeric_limits<double>::quiet_NaN();  // K1^2 + K2^2/|I|

    // weighted
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double ratio_bound_loose = std::numeric_limits<double>::quiet_NaN();
    double K3 = std::numeric_limits<double>::quiet_NaN();
    double K3_tilde = std::numeric_limits<double>::quiet_NaN();

    // plain
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double K4_tilde = std::numeric_limits<double>::quiet_NaN();
};

// Throws CertifyError when the family's hypothesis fails (weighted needs
// min c > 0, plain needs min(-b'/2 + c) > 0).
Certificate constants(const Problem& prob, Family family);
std::vector<Certificate> constants(const Problem& prob);  // admissible families

// Evaluable reference solution: the closed form when the problem has one,
// otherwise a finite-difference solve refined to err_tol (sup norm).
class Reference {
public:
    static Reference exact(const Problem& prob);  // throws without a closed form
    static Reference fd(const Problem& prob, double err_tol);
    static Reference automatic(const Problem& prob, double err_tol = 1e-8);

    double eval(double x) const;
    bool is_exact() const { return exact_.has_value(); }
    double error_estimate() const { return err_; }

private:
    std::optional<ExactSolution> exact_;
    std::shared_ptr<FdSolution> fd_;
    double err_ = 0.0;
};

// Error/Loss bookkeeping for one trial on one problem. Sampled quantities are
// Monte Carlo means over the sample; integral quantities are interval
// averages (1/|I|) * integral computed by refined quadrature, which is what
// the certificates control. Pass flags assert the integral inequality with a
// 1e-6 relative tolerance budget for quadrature and reference error.
struct Report {
    double error_sampled = 0.0, loss_sampled = 0.0;
    double boundary_loss = 0.0;  // |p - t(x1)|^2 + |q - t(x2)|^2
    double error_integral = 0.0;
    double residual_integral = 0.0;  // interval average of (f - L[t])^2
    double loss_integral = 0.0;      // + boundary_loss unless boundary-exact
    double ratio = 0.0;              // error_integral / loss_integral
    double ratio_sampled = 0.0;

    double bound_plain = std::numeric_limits<double>::quiet_NaN();
    double bound_weighted_tight = std::numeric_limits<double>::quiet_NaN();
    double bound_weighted_loose = std::numeric_limits<double>::quiet_NaN();
    double bound_energy = std::numeric_limits<double>::quiet_NaN();
    bool plain_applicable = false, weighted_applicable = false, energy_applicable = false;
    bool plain_pass = false, weighted_pass = false, energy_pass = false;

    double gamma = std::numeric_limits<double>::quiet_NaN();
    double lambda_min_c = std::numeric_limits<double>::quiet_NaN();
    double error_halfwidth_k5 = 0.0;  // plug-in Chebyshev halfwidths, k = 5
    double loss_halfwidth_k5 = 0.0;
    double reference_error = 0.0;
    std::uint64_t seed = 0;
    int n = 0;

    bool all_pass() const;  // every applicable family passes
};

struct ReportOptions {
    // restrict to one family; boundary-dependent families reject trials
    // without exact boundary values
    std::optional<Family> only_family;
    double rel_budget = 1e-6;  // tolerance multiplier on the asserted bounds
    double quad_tol = 1e-9;
};

Report report(const Problem& prob, const TrialFunction& t, const SampleSet& s,
              const Reference& ref, const ReportOptions& opt = {});

// Builds the reference automatically and, for finite-difference references,
// re-solves finer until the reference error is below 1% of the measured
// solution gap.
Report certified_report(const Problem& prob, const TrialFunction& t, const SampleSet& s,
                        const ReportOptions& opt = {});

struct SweepConfig {
    std::string param;  // parameter to vary, e.g. "lambda", "k", "eps"
    std::vector<double> values;
    LossSpec loss_spec;
    TrainConfig train_cfg;
    int hidden = 2, width = 32;
    int jobs = 1;
};

struct SweepRecord {
    std::string param_name;
    double param_value = 0.0;
    double epsilon = 0.0, gamma = 0.0, lambda_min_c = 0.0;
    double loss = 0.0, error = 0.0, ratio = 0.0;
    double bound_plain = 0.0, bound_weighted_tight = 0.0, bound_weighted_loose = 0.0,
           bound_energy = 0.0;
    double boundary_loss = 0.0;
    int n = 0;
    std::uint64_t seed = 0;
    int epochs = 0;
    std::int64_t wall_ms = 0;
    bool ok = false;
    bool certified = false;  // all applicable integral bounds held
    std::string message;     // failure note; empty when ok
};

// Trains a fresh boundary-exact trial per value (same seed each point) and
// reports it. Per-point failures are recorded and do not abort the sweep.
std::vector<SweepRecord> sweep(const Problem& base, const SweepConfig& cfg);

// Columns: param_name, param_value, epsilon, gamma, lambda_min_c, loss,
// error, ratio, bound_plain, bound_weighted_tight, bound_weighted_loose,
// bound_energy, boundary_loss, n, seed, epochs, wall_ms.
void write_csv(std::ostream& os, const std::vector<SweepRecord>& records);

}  // namespace pinncert
