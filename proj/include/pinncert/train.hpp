#pragma once

#include "pinncert/sample.hpp"
#include "pinncert/trial.hpp"

namespace pinncert {

// Which loss to assemble over the collocation points. A boundary-exact trial
// contributes no boundary penalty regardless of boundary_weight.
struct LossSpec {
    int n = 256;
    bool resample = false;          // fresh collocation sample each epoch
    double boundary_weight = 1.0;   // penalty weight for the raw-network trial
};

// Adaptive-moment first-order optimizer with the customary defaults; one
// epoch is steps_per_epoch full-batch updates on the current sample.
struct TrainConfig {
    int epochs = 500;
    int steps_per_epoch = 10;
    double lr = 1e-3;
    double beta1 = 0.9, beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
};

// Mean squared residual over the sample, plus boundary penalty when the trial
// is not boundary-exact:
//   (1/n) sum (f(X_i) - L[t](X_i))^2
//   + boundary_weight * (|p - t(x1)|^2 + |q - t(x2)|^2)
double loss(const Problem& prob, const TrialFunction& t, const SampleSet& s,
            const LossSpec& spec);

// Gradient of loss with respect to the trial's network parameters. Throws
// TrainError for trials without a network.
std::vector<double> loss_grad(const Problem& prob, const TrialFunction& t,
                              const SampleSet& s, const LossSpec& spec);

struct TrainResult {
    double initial_loss = 0.0;
    std::vector<double> loss_history;   // one entry per epoch, after its steps
    std::vector<double> error_history;  // sampled squared gap to the exact
                                        // solution; empty when none is known
    SampleSet sample;                   // collocation points of the last epoch
};

// Deterministic per (config, spec); mutates the trial's network in place.
// Throws TrainError when the loss turns non-finite.
TrainResult train(const Problem& prob, TrialFunction& t, const LossSpec& spec,
                  const TrainConfig& cfg);

}  // namespace pinncert
