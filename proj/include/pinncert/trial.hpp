#pragma once

#include <memory>

#include "pinncert/net.hpp"
#include "pinncert/problem.hpp"

namespace pinncert {

// L[t](x) decomposed against the underlying network:
//   L[t] = a0*N + a1*N' + a2*N'' + g
// with g collecting every network-independent term.
struct OperatorWeights {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, g = 0.0;
};

class TrialFunction {
public:
    enum class Kind { kPinn1, kPinn2, kAnalytic };

    virtual ~TrialFunction() = default;
    virtual Kind kind() const = 0;
    virtual Jet2 eval_jet(double x) const = 0;
    // whether the boundary conditions hold for every parameter vector
    virtual bool boundary_exact() const = 0;
    virtual Network* network() { return nullptr; }
    virtual const Network* network() const { return nullptr; }
    // Throws TrainError for trials without a network.
    virtual OperatorWeights operator_weights(const Problem& prob, double x) const = 0;

    double eval(double x) const { return eval_jet(x).v; }
};

// The raw network as trial function; boundary values are only approximate.
class Pinn1Trial final : public TrialFunction {
public:
    explicit Pinn1Trial(Network net) : net_(std::move(net)) {}

    Kind kind() const override { return Kind::kPinn1; }
    Jet2 eval_jet(double x) const override { return net_.forward_jet(x); }
    bool boundary_exact() const override { return false; }
    Network* network() override { return &net_; }
    const Network* network() const override { return &net_; }
    OperatorWeights operator_weights(const Problem& prob, double x) const override;

private:
    Network net_;
};

// Boundary-exact composite chi(x)*N(x) + ell(x) with the bubble
// chi(x) = -(x - x1)(x - x2) and the affine interpolant
// ell(x) = (q - p)/(x2 - x1) * (x - x1) + p.
class Pinn2Trial final : public TrialFunction {
public:
    Pinn2Trial(Network net, const Problem& prob);

    Kind kind() const override { return Kind::kPinn2; }
    Jet2 eval_jet(double x) const override;
    bool boundary_exact() const override { return true; }
    Network* network() override { return &net_; }
    const Network* network() const override { return &net_; }
    OperatorWeights operator_weights(const Problem& prob, double x) const override;

    Jet2 chi_jet(double x) const;
    Jet2 ell_jet(double x) const;

private:
    Network net_;
    double x1_, x2_, p_, q_;

    void check_compatible(const Problem& prob) const;
};

// A closed-form function wrapped as a trial (e.g. the exact solution); has no
// trainable parameters.
class AnalyticTrial final : public TrialFunction {
public:
    explicit AnalyticTrial(const Expr& formula);

    Kind kind() const override { return Kind::kAnalytic; }
    Jet2 eval_jet(double x) const override;
    bool boundary_exact() const override { return true; }
    OperatorWeights operator_weights(const Problem& prob, double x) const override;

private:
    Expr y_, dy_, ddy_;
};

// -eps * t''(x) + b(x) * t'(x) + c(x) * t(x)
double apply_operator(const Problem& prob, const TrialFunction& t, double x);

}  // namespace pinncert
