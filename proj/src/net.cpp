#include "pinncert/net.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include "pinncert/errors.hpp"
#include "pinncert/rng.hpp"

namespace pinncert {

namespace {

constexpr char kMagic[8] = {'P', 'C', 'N', 'E', 'T', '0', '1', '\n'};

struct TanhDerivs {
    double t, t1, t2, t3;
};

TanhDerivs tanh_derivs(double u) {
    double t = std::tanh(u);
    double t1 = 1.0 - t * t;
    double t2 = -2.0 * t * t1;
    double t3 = -2.0 * t1 * t1 + 4.0 * t * t * t1;
    return {t, t1, t2, t3};
}

}  // namespace

Network Network::init(std::uint64_t seed, int hidden_layers, int width) {
    if (hidden_layers < 1 || width < 1)
        throw NumericError("network needs at least one hidden layer of width >= 1");
    Network net;
    net.seed_ = seed;
    net.sizes_.push_back(1);
    for (int l = 0; l < hidden_layers; ++l) net.sizes_.push_back(width);
    net.sizes_.push_back(1);
    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l)
        count += static_cast<std::size_t>(net.sizes_[l] + 1) * net.sizes_[l + 1];
    net.theta_.resize(count);
    RngStream rng = RngStream::from_seed(seed, /*tag=*/0x4e45);
    std::size_t pos = 0;
    for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
        double scale = 1.0 / std::sqrt(static_cast<double>(net.sizes_[l]));
        std::size_t block =
            static_cast<std::size_t>(net.sizes_[l] + 1) * net.sizes_[l + 1];
        for (std::size_t i = 0; i < block; ++i) net.theta_[pos++] = scale * rng.next_symmetric();
    }
    return net;
}

std::size_t Network::layer_param_offset(int layer) const {
    std::size_t off = 0;
    for (int l = 0; l < layer; ++l)
        off += static_cast<std::size_t>(sizes_[l] + 1) * sizes_[l + 1];
    return off;
}

double Network::forward(double x) const {
    // same operation order as the value channel of forward_jet, so the two
    // agree bitwise
    std::vector<double> a{x}, next;
    std::size_t pos = 0;
    const int layers = static_cast<int>(sizes_.size()) - 1;
    for (int l = 0; l < layers; ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const double* w = theta_.data() + pos;
        const double* bias = w + static_cast<std::size_t>(in) * out;
        next.assign(static_cast<std::size_t>(out), 0.0);
        for (int o = 0; o < out; ++o) {
            double acc = bias[o];
            for (int i = 0; i < in; ++i) acc += w[static_cast<std::size_t>(o) * in + i] * a[i];
            next[o] = (l + 1 < layers) ? std::tanh(acc) : acc;
        }
        a.swap(next);
        pos += static_cast<std::size_t>(in + 1) * out;
    }
    return a[0];
}

Jet2 Network::forward_jet(double x) const {
    Workspace ws;
    return forward_jet(x, ws);
}

Jet2 Network::forward_jet(double x, Workspace& ws) const {
    const int layers = static_cast<int>(sizes_.size()) - 1;
    std::size_t act_total = 0, pre_total = 0;
    for (int l = 0; l <= layers; ++l) act_total += sizes_[l];
    for (int l = 1; l <= layers; ++l) pre_total += sizes_[l];
    ws.act.assign(act_total, Jet2{});
    ws.pre.assign(pre_total, Jet2{});

    ws.act[0] = Jet2{x, 1.0, 0.0};
    std::size_t a_in = 0, a_out = 1, z_out = 0, pos = 0;
    for (int l = 0; l < layers; ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const double* w = theta_.data() + pos;
        const double* bias = w + static_cast<std::size_t>(in) * out;
        for (int o = 0; o < out; ++o) {
            Jet2 acc{bias[o], 0.0, 0.0};
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) {
                const Jet2& ai = ws.act[a_in + i];
                acc.v += row[i] * ai.v;
                acc.d1 += row[i] * ai.d1;
                acc.d2 += row[i] * ai.d2;
            }
            ws.pre[z_out + o] = acc;
            if (l + 1 < layers) {
                TanhDerivs td = tanh_derivs(acc.v);
                ws.act[a_out + o] =
                    Jet2{td.t, td.t1 * acc.d1, td.t2 * acc.d1 * acc.d1 + td.t1 * acc.d2};
            } else {
                ws.act[a_out + o] = acc;
            }
        }
        a_in = a_out;
        a_out += out;
        z_out += out;
        pos += static_cast<std::size_t>(in + 1) * out;
    }
    return ws.act[act_total - 1];
}

void Network::accumulate_grad(Workspace& ws, double w0, double w1, double w2,
                              double scale, std::vector<double>& grad) const {
    if (grad.size() != theta_.size())
        throw NumericError("gradient buffer size does not match parameter count");
    const int layers = static_cast<int>(sizes_.size()) - 1;
    ws.adj.assign(ws.act.size(), Jet2{});
    std::vector<Jet2>& adj = ws.adj;
    adj.back() = Jet2{scale * w0, scale * w1, scale * w2};

    std::size_t a_out = ws.act.size() - sizes_[layers];
    std::size_t z_out = ws.pre.size() - sizes_[layers];
    std::size_t pos = theta_.size();
    for (int l = layers - 1; l >= 0; --l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        pos -= static_cast<std::size_t>(in + 1) * out;
        const std::size_t a_in = a_out - in;
        const double* w = theta_.data() + pos;
        double* gw = grad.data() + pos;
        double* gb = gw + static_cast<std::size_t>(in) * out;
        for (int o = 0; o < out; ++o) {
            Jet2 zbar = adj[a_out + o];
            if (l + 1 < layers) {
                // pull the post-activation adjoint back through tanh
                const Jet2& u = ws.pre[z_out + o];
                TanhDerivs td = tanh_derivs(u.v);
                Jet2 abar = zbar;
                zbar.v = abar.v * td.t1 + abar.d1 * td.t2 * u.d1 +
                         abar.d2 * (td.t3 * u.d1 * u.d1 + td.t2 * u.d2);
                zbar.d1 = abar.d1 * td.t1 + abar.d2 * 2.0 * td.t2 * u.d1;
                zbar.d2 = abar.d2 * td.t1;
            }
            gb[o] += zbar.v;
            const double* row = w + static_cast<std::size_t>(o) * in;
            double* grow = gw + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) {
                const Jet2& ai = ws.act[a_in + i];
                grow[i] += zbar.v * ai.v + zbar.d1 * ai.d1 + zbar.d2 * ai.d2;
                Jet2& ab = adj[a_in + i];
                ab.v += row[i] * zbar.v;
                ab.d1 += row[i] * zbar.d1;
                ab.d2 += row[i] * zbar.d2;
            }
        }
        a_out = a_in;
        z_out -= (l >= 1) ? sizes_[l] : 0;
    }
}

std::vector<double> Network::grad_theta(double x, double w0, double w1, double w2) const {
    Workspace ws;
    forward_jet(x, ws);
    std::vector<double> grad(theta_.size(), 0.0);
    accumulate_grad(ws, w0, w1, w2, 1.0, grad);
    return grad;
}

void Network::save(const std::string& path) const {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw NumericError("cannot open checkpoint file '" + path + "' for writing");
    auto put = [&](const void* data, std::size_t bytes) {
        if (std::fwrite(data, 1, bytes, fp) != bytes) {
            std::fclose(fp);
            throw NumericError("short write to checkpoint '" + path + "'");
        }
    };
    put(kMagic, sizeof(kMagic));
    std::uint32_t nsizes = static_cast<std::uint32_t>(sizes_.size());
    put(&nsizes, sizeof(nsizes));
    for (int s : sizes_) {
        std::uint32_t v = static_cast<std::uint32_t>(s);
        put(&v, sizeof(v));
    }
    put(&seed_, sizeof(seed_));
    std::uint64_t count = theta_.size();
    put(&count, sizeof(count));
    put(theta_.data(), count * sizeof(double));
    std::fclose(fp);
}

Network Network::load(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw NumericError("cannot open checkpoint file '" + path + "'");
    auto get = [&](void* data, std::size_t bytes) {
        if (std::fread(data, 1, bytes, fp) != bytes) {
            std::fclose(fp);
            throw NumericError("truncated checkpoint '" + path + "'");
        }
    };
    char magic[8];
    get(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        std::fclose(fp);
        throw NumericError("'" + path + "' is not a network checkpoint");
    }
    Network net;
    std::uint32_t nsizes = 0;
    get(&nsizes, sizeof(nsizes));
    if (nsizes < 3 || nsizes > 64) {
        std::fclose(fp);
        throw NumericError("checkpoint '" + path + "' has an implausible layer count");
    }
    for (std::uint32_t i = 0; i < nsizes; ++i) {
        std::uint32_t v = 0;
        get(&v, sizeof(v));
        net.sizes_.push_back(static_cast<int>(v));
    }
    get(&net.seed_, sizeof(net.seed_));
    std::uint64_t count = 0;
    get(&count, sizeof(count));
    std::size_t expect = 0;
    for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l)
        expect += static_cast<std::size_t>(net.sizes_[l] + 1) * net.sizes_[l + 1];
    if (count != expect) {
        std::fclose(fp);
        throw NumericError("checkpoint '" + path + "' parameter count mismatch");
    }
    net.theta_.resize(count);
    get(net.theta_.data(), count * sizeof(double));
    std::fclose(fp);
    return net;
}

}  // namespace pinncert
