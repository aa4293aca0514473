#include "pinncert/trial.hpp"

#include "pinncert/errors.hpp"
#include "pinncert/util.hpp"

namespace pinncert {

OperatorWeights Pinn1Trial::operator_weights(const Problem& prob, double x) const {
    return {prob.c.eval(x), prob.b.eval(x), -prob.eps, 0.0};
}

Pinn2Trial::Pinn2Trial(Network net, const Problem& prob)
    : net_(std::move(net)), x1_(prob.x1), x2_(prob.x2), p_(prob.p), q_(prob.q) {}

void Pinn2Trial::check_compatible(const Problem& prob) const {
    if (prob.x1 != x1_ || prob.x2 != x2_ || prob.p != p_ || prob.q != q_)
        throw ProblemError(
            "trial function was built for a different interval or boundary data");
}

Jet2 Pinn2Trial::chi_jet(double x) const {
    // -(x - x1)(x - x2): exact zeros at the endpoints by construction
    double u = x - x1_, w = x - x2_;
    return {-u * w, -(u + w), -2.0};
}

Jet2 Pinn2Trial::ell_jet(double x) const {
    double slope = (q_ - p_) / (x2_ - x1_);
    return {slope * (x - x1_) + p_, slope, 0.0};
}

Jet2 Pinn2Trial::eval_jet(double x) const {
    Jet2 n = net_.forward_jet(x);
    Jet2 chi = chi_jet(x);
    Jet2 ell = ell_jet(x);
    return {chi.v * n.v + ell.v, chi.d1 * n.v + chi.v * n.d1 + ell.d1,
            chi.d2 * n.v + 2.0 * chi.d1 * n.d1 + chi.v * n.d2 + ell.d2};
}

OperatorWeights Pinn2Trial::operator_weights(const Problem& prob, double x) const {
    check_compatible(prob);
    double b = prob.b.eval(x), c = prob.c.eval(x), eps = prob.eps;
    Jet2 chi = chi_jet(x);
    Jet2 ell = ell_jet(x);
    OperatorWeights w;
    w.a0 = -eps * chi.d2 + b * chi.d1 + c * chi.v;
    w.a1 = -2.0 * eps * chi.d1 + b * chi.v;
    w.a2 = -eps * chi.v;
    w.g = b * ell.d1 + c * ell.v;  // ell'' = 0
    return w;
}

AnalyticTrial::AnalyticTrial(const Expr& formula)
    : y_(formula), dy_(formula.diff()), ddy_(formula.diff().diff()) {}

Jet2 AnalyticTrial::eval_jet(double x) const {
    return {y_.eval(x), dy_.eval(x), ddy_.eval(x)};
}

OperatorWeights AnalyticTrial::operator_weights(const Problem&, double) const {
    throw TrainError("analytic trial functions have no trainable parameters");
}

double apply_operator(const Problem& prob, const TrialFunction& t, double x) {
    Jet2 j = t.eval_jet(x);
    return -prob.eps * j.d2 + prob.b.eval(x) * j.d1 + prob.c.eval(x) * j.v;
}

}  // namespace pinncert
