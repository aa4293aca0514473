#include "pinncert/train.hpp"

#include <cmath>

#include "pinncert/errors.hpp"
#include "pinncert/rng.hpp"
#include "pinncert/util.hpp"

namespace pinncert {

namespace {

struct PointData {
    double x, f;
    OperatorWeights w;
};

std::vector<PointData> coefficient_cache(const Problem& prob, const TrialFunction& t,
                                         const SampleSet& s) {
    std::vector<PointData> data;
    data.reserve(s.points.size());
    for (double x : s.points) data.push_back({x, prob.f.eval(x), t.operator_weights(prob, x)});
    return data;
}

double residual(const PointData& d, const Jet2& n) {
    return d.f - (d.w.a0 * n.v + d.w.a1 * n.d1 + d.w.a2 * n.d2 + d.w.g);
}

// Shared forward/backward over the sample. Computes the loss; when grad is
// non-null also accumulates d(loss)/d(theta) into it.
double loss_pass(const Problem& prob, const TrialFunction& t, const Network& net,
                 const std::vector<PointData>& data, const LossSpec& spec,
                 Network::Workspace& ws, std::vector<double>* grad) {
    const double n = static_cast<double>(data.size());
    double acc = 0.0;
    for (const PointData& d : data) {
        Jet2 jet = net.forward_jet(d.x, ws);
        double r = residual(d, jet);
        acc += r * r / n;
        if (grad) net.accumulate_grad(ws, d.w.a0, d.w.a1, d.w.a2, -2.0 * r / n, *grad);
    }
    if (!t.boundary_exact() && spec.boundary_weight != 0.0) {
        const double bw = spec.boundary_weight;
        for (auto [x, target] : {std::pair{prob.x1, prob.p}, std::pair{prob.x2, prob.q}}) {
            Jet2 jet = net.forward_jet(x, ws);
            double r = target - jet.v;
            acc += bw * r * r;
            if (grad) net.accumulate_grad(ws, 1.0, 0.0, 0.0, -2.0 * bw * r, *grad);
        }
    }
    return acc;
}

}  // namespace

double loss(const Problem& prob, const TrialFunction& t, const SampleSet& s,
            const LossSpec& spec) {
    if (const Network* net = t.network()) {
        Network::Workspace ws;
        return loss_pass(prob, t, *net, coefficient_cache(prob, t, s), spec, ws, nullptr);
    }
    // closed-form trial: evaluate the residual directly
    double acc = 0.0;
    const double n = static_cast<double>(s.points.size());
    for (double x : s.points) {
        double r = prob.f.eval(x) - apply_operator(prob, t, x);
        acc += r * r / n;
    }
    if (!t.boundary_exact()) {
        double r1 = prob.p - t.eval(prob.x1), r2 = prob.q - t.eval(prob.x2);
        acc += spec.boundary_weight * (r1 * r1 + r2 * r2);
    }
    return acc;
}

std::vector<double> loss_grad(const Problem& prob, const TrialFunction& t,
                              const SampleSet& s, const LossSpec& spec) {
    const Network* net = t.network();
    if (!net) throw TrainError("analytic trial functions have no trainable parameters");
    Network::Workspace ws;
    std::vector<double> grad(net->param_count(), 0.0);
    loss_pass(prob, t, *net, coefficient_cache(prob, t, s), spec, ws, &grad);
    return grad;
}

TrainResult train(const Problem& prob, TrialFunction& t, const LossSpec& spec,
                  const TrainConfig& cfg) {
    Network* net = t.network();
    if (!net) throw TrainError("analytic trial functions have no trainable parameters");
    if (cfg.epochs < 0 || cfg.steps_per_epoch < 1)
        throw TrainError("train config needs epochs >= 0 and steps_per_epoch >= 1");
    if (spec.n < 1) throw TrainError("need at least one collocation point");

    // resampling draws per-epoch seeds from a stream split off the run seed,
    // so the fixed-sample path and the first resampled epoch differ
    RngStream epoch_seeds = RngStream::from_seed(cfg.seed, /*tag=*/0x7261);
    auto draw_epoch_sample = [&]() {
        return SampleSet::draw(spec.resample ? epoch_seeds.next_u64() : cfg.seed, spec.n,
                               prob.x1, prob.x2);
    };

    TrainResult result;
    result.sample = draw_epoch_sample();
    std::vector<PointData> data = coefficient_cache(prob, t, result.sample);

    const bool track_error = prob.exact.has_value();
    auto sampled_error = [&](const SampleSet& s) {
        double acc = 0.0;
        for (double x : s.points) {
            double gap = prob.exact->eval(x) - t.eval(x);
            acc += gap * gap;
        }
        return acc / static_cast<double>(s.points.size());
    };

    Network::Workspace ws;
    std::vector<double> grad(net->param_count());
    std::vector<double> m(net->param_count(), 0.0), v(net->param_count(), 0.0);
    std::vector<double>& theta = net->params();
    long step_count = 0;

    result.initial_loss = loss_pass(prob, t, *net, data, spec, ws, nullptr);
    if (!std::isfinite(result.initial_loss))
        throw TrainError("initial loss is not finite; check the problem coefficients");

    result.loss_history.reserve(cfg.epochs);
    if (track_error) result.error_history.reserve(cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (spec.resample && epoch > 0) {
            result.sample = draw_epoch_sample();
            data = coefficient_cache(prob, t, result.sample);
        }
        for (int step = 0; step < cfg.steps_per_epoch; ++step) {
            std::fill(grad.begin(), grad.end(), 0.0);
            loss_pass(prob, t, *net, data, spec, ws, &grad);
            ++step_count;
            const double bc1 = 1.0 - std::pow(cfg.beta1, step_count);
            const double bc2 = 1.0 - std::pow(cfg.beta2, step_count);
            for (std::size_t i = 0; i < theta.size(); ++i) {
                m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
                v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
                theta[i] -=
                    cfg.lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg.adam_eps);
            }
        }
        double epoch_loss = loss_pass(prob, t, *net, data, spec, ws, nullptr);
        if (!std::isfinite(epoch_loss))
            throw TrainError("loss diverged at epoch " + format_double(epoch) +
                             "; lower the learning rate");
        result.loss_history.push_back(epoch_loss);
        if (track_error) result.error_history.push_back(sampled_error(result.sample));
    }
    return result;
}

}  // namespace pinncert
