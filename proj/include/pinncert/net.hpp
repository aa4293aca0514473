#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pinncert {

// Value, first and second x-derivative at a point.
struct Jet2 {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
};

// Fully connected scalar network x -> N(x; theta), tanh activations on the
// hidden layers, linear output. Parameters live in one flat vector, layer by
// layer, each layer's weight matrix row-major followed by its biases.
//
// N, N', N'' are computed by propagating second-order Taylor data (Jet2)
// through every layer; parameter gradients of w0*N + w1*N' + w2*N'' come from
// reverse accumulation over the stored forward pass. A network is mutated
// only through params(); all evaluation is const.
class Network {
public:
    // Weights and biases uniform on (-1/sqrt(fan_in), +1/sqrt(fan_in)),
    // deterministic per seed.
    static Network init(std::uint64_t seed, int hidden_layers = 2, int width = 32);

    const std::vector<int>& sizes() const { return sizes_; }  // {1, W, ..., W, 1}
    int hidden_layers() const { return static_cast<int>(sizes_.size()) - 2; }
    std::uint64_t seed() const { return seed_; }
    std::size_t param_count() const { return theta_.size(); }
    std::vector<double>& params() { return theta_; }
    const std::vector<double>& params() const { return theta_; }

    double forward(double x) const;
    Jet2 forward_jet(double x) const;

    // Reusable buffers for the stored forward pass; one per worker.
    struct Workspace {
        std::vector<Jet2> act;  // activations, input first, layer by layer
        std::vector<Jet2> pre;  // pre-activations, layer by layer
        std::vector<Jet2> adj;  // adjoint scratch
    };

    Jet2 forward_jet(double x, Workspace& ws) const;

    // grad += scale * d(w0 N + w1 N' + w2 N'')/dtheta at the point of the
    // matching forward_jet(x, ws) call; ws.adj is used as scratch. grad must
    // have param_count entries.
    void accumulate_grad(Workspace& ws, double w0, double w1, double w2, double scale,
                         std::vector<double>& grad) const;

    std::vector<double> grad_theta(double x, double w0, double w1, double w2) const;

    // Little-endian checkpoint: magic, layer sizes, seed, flat parameters.
    void save(const std::string& path) const;
    static Network load(const std::string& path);

private:
    std::vector<int> sizes_;
    std::vector<double> theta_;
    std::uint64_t seed_ = 0;

    std::size_t layer_param_offset(int layer) const;
};

}  // namespace pinncert
