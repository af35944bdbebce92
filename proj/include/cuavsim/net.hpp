#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuavsim/rng.hpp"

namespace cuavsim {

enum class Activation { kRelu, kIdentity };

struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> biases;   // out
  Activation activation = Activation::kRelu;
};

// Plain fully connected value network. ReLU hidden layers, identity output.
struct DenseNet {
  std::vector<DenseLayer> layers;

  int input_size() const { return layers.front().in; }
  int output_size() const { return layers.back().out; }
};

// Gradient (or moment) buffers shaped exactly like a network's parameters.
struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  static Gradients like(const DenseNet& net) {
    Gradients g;
    g.weights.reserve(net.layers.size());
    g.biases.reserve(net.layers.size());
    for (const auto& layer : net.layers) {
      g.weights.emplace_back(layer.weights.size(), 0.0);
      g.biases.emplace_back(layer.biases.size(), 0.0);
    }
    return g;
  }

  void zero() {
    for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
  }
};

// Builds a network with the given layer sizes (input, hidden..., output).
// Weights are uniform in +-sqrt(6/fan_in), biases zero.
inline DenseNet make_dense_net(const std::vector<int>& sizes, Rng& rng) {
  if (sizes.size() < 2) throw std::invalid_argument("make_dense_net: need at least two sizes");
  DenseNet net;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    DenseLayer layer;
    layer.in = sizes[i];
    layer.out = sizes[i + 1];
    if (layer.in < 1 || layer.out < 1)
      throw std::invalid_argument("make_dense_net: layer sizes must be >= 1");
    layer.activation = i + 2 == sizes.size() ? Activation::kIdentity : Activation::kRelu;
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.in));
    layer.weights.resize(static_cast<std::size_t>(layer.out) * layer.in);
    for (auto& w : layer.weights) w = rng.uniform(-bound, bound);
    layer.biases.assign(layer.out, 0.0);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

namespace detail {

// Dot product with four independent accumulators so the compiler can keep
// the reduction in vector registers.
inline double dot(const double* a, const double* b, int n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

inline void axpy(double scale, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += scale * x[i];
}

}  // namespace detail

// Reusable per-layer activation storage for one input.
struct NetWorkspace {
  std::vector<std::vector<double>> acts;  // acts[0] = input, acts[L] = output
  std::vector<double> delta;
  std::vector<double> delta_prev;
};

// Forward pass writing each layer's activations into the workspace; returns
// a reference to the output activation vector.
inline const std::vector<double>& forward_into(const DenseNet& net, const double* input,
                                               NetWorkspace& ws) {
  const auto n_layers = net.layers.size();
  ws.acts.resize(n_layers + 1);
  ws.acts[0].assign(input, input + net.input_size());
  for (std::size_t l = 0; l < n_layers; ++l) {
    const auto& layer = net.layers[l];
    auto& out = ws.acts[l + 1];
    out.resize(layer.out);
    const double* x = ws.acts[l].data();
    for (int o = 0; o < layer.out; ++o) {
      double v = layer.biases[o] +
                 detail::dot(layer.weights.data() + static_cast<std::size_t>(o) * layer.in, x,
                             layer.in);
      if (layer.activation == Activation::kRelu && v < 0.0) v = 0.0;
      out[o] = v;
    }
  }
  return ws.acts[n_layers];
}

// Forward pass for a single input vector.
inline std::vector<double> forward(const DenseNet& net, const std::vector<double>& input) {
  if (static_cast<int>(input.size()) != net.input_size())
    throw std::invalid_argument("forward: input size mismatch");
  NetWorkspace ws;
  return forward_into(net, input.data(), ws);
}

// Mean squared error (1/B) * sum (y_i - q_i)^2.
inline double mse_loss(const std::vector<double>& predictions,
                       const std::vector<double>& targets) {
  if (predictions.size() != targets.size() || predictions.empty())
    throw std::invalid_argument("mse_loss: size mismatch or empty batch");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = targets[i] - predictions[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

// Backpropagation of the batch-mean squared error where each example
// supervises only its selected action's output. Gradients are accumulated
// into `grads` (zeroed first); returns the batch loss.
inline double backward_into(const DenseNet& net, const std::vector<std::vector<double>>& inputs,
                            const std::vector<int>& actions, const std::vector<double>& targets,
                            Gradients& grads, NetWorkspace& ws) {
  const auto batch = inputs.size();
  if (batch == 0) throw std::invalid_argument("backward: empty batch");
  if (actions.size() != batch || targets.size() != batch)
    throw std::invalid_argument("backward: batch size mismatch");
  grads.zero();
  const double inv_b = 1.0 / static_cast<double>(batch);
  const auto n_layers = net.layers.size();
  double loss = 0.0;

  for (std::size_t ex = 0; ex < batch; ++ex) {
    if (static_cast<int>(inputs[ex].size()) != net.input_size())
      throw std::invalid_argument("backward: input size mismatch");
    const int action = actions[ex];
    if (action < 0 || action >= net.output_size())
      throw std::invalid_argument("backward: action index out of range");
    const auto& out = forward_into(net, inputs[ex].data(), ws);

    const double err = out[action] - targets[ex];
    loss += err * err * inv_b;

    // dL/dq for the selected output; all other outputs get zero gradient.
    ws.delta.assign(out.size(), 0.0);
    ws.delta[action] = 2.0 * inv_b * err;

    for (std::size_t l = n_layers; l-- > 0;) {
      const auto& layer = net.layers[l];
      const double* prev_act = ws.acts[l].data();
      auto& gw = grads.weights[l];
      auto& gb = grads.biases[l];
      const bool need_prev = l > 0;
      if (need_prev) ws.delta_prev.assign(layer.in, 0.0);
      for (int o = 0; o < layer.out; ++o) {
        const double d = ws.delta[o];
        if (d == 0.0) continue;
        gb[o] += d;
        detail::axpy(d, prev_act, gw.data() + static_cast<std::size_t>(o) * layer.in, layer.in);
        if (need_prev)
          detail::axpy(d, layer.weights.data() + static_cast<std::size_t>(o) * layer.in,
                       ws.delta_prev.data(), layer.in);
      }
      if (need_prev) {
        // ReLU gate of the upstream layer: zero where its activation was zero.
        const auto& below = net.layers[l - 1];
        if (below.activation == Activation::kRelu)
          for (int i = 0; i < layer.in; ++i)
            if (ws.acts[l][i] <= 0.0) ws.delta_prev[i] = 0.0;
        std::swap(ws.delta, ws.delta_prev);
      }
    }
  }
  return loss;
}

// Exact parameter gradients of the masked batch MSE.
inline Gradients backward(const DenseNet& net, const std::vector<std::vector<double>>& inputs,
                          const std::vector<int>& actions, const std::vector<double>& targets) {
  Gradients grads = Gradients::like(net);
  NetWorkspace ws;
  backward_into(net, inputs, actions, targets, grads, ws);
  return grads;
}

// Adam optimizer state. Moment buffers mirror the parameter layout.
struct AdamState {
  Gradients first_moment;
  Gradients second_moment;
  long long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_stab = 1e-8;
  double zeta = 1e-3;  // learning rate

  static AdamState like(const DenseNet& net, double learning_rate) {
    AdamState s;
    s.first_moment = Gradients::like(net);
    s.second_moment = Gradients::like(net);
    s.zeta = learning_rate;
    return s;
  }
};

namespace detail {

inline void adam_update(std::vector<double>& params, const std::vector<double>& grad,
                        std::vector<double>& m, std::vector<double>& v, const AdamState& opt,
                        double bias1, double bias2) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * grad[i];
    v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / bias1;
    const double v_hat = v[i] / bias2;
    params[i] -= opt.zeta * m_hat / (std::sqrt(v_hat) + opt.eps_stab);
  }
}

}  // namespace detail

// One Adam step with bias correction; moves parameters against the gradient.
inline void adam_step(DenseNet& net, const Gradients& grads, AdamState& opt) {
  opt.step += 1;
  const double bias1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
  const double bias2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    detail::adam_update(net.layers[l].weights, grads.weights[l], opt.first_moment.weights[l],
                        opt.second_moment.weights[l], opt, bias1, bias2);
    detail::adam_update(net.layers[l].biases, grads.biases[l], opt.first_moment.biases[l],
                        opt.second_moment.biases[l], opt, bias1, bias2);
  }
}

// Deep copy for target-network synchronization.
inline DenseNet clone_params(const DenseNet& src) { return src; }

// Flat text serialization: a sizes header, then per layer the row-major
// weights and the biases, full double precision.
inline void dump_net(const DenseNet& net, std::ostream& os) {
  os.precision(17);
  os << "sizes";
  os << ' ' << net.input_size();
  for (const auto& layer : net.layers) os << ' ' << layer.out;
  os << '\n';
  for (const auto& layer : net.layers) {
    for (std::size_t i = 0; i < layer.weights.size(); ++i)
      os << layer.weights[i] << (i + 1 == layer.weights.size() ? '\n' : ' ');
    for (std::size_t i = 0; i < layer.biases.size(); ++i)
      os << layer.biases[i] << (i + 1 == layer.biases.size() ? '\n' : ' ');
  }
}

inline DenseNet load_net(std::istream& is) {
  std::string tag;
  if (!(is >> tag) || tag != "sizes") throw std::runtime_error("load_net: missing sizes header");
  std::vector<int> sizes;
  {
    std::string line;
    std::getline(is, line);
    std::istringstream sizes_stream(line);
    int v = 0;
    while (sizes_stream >> v) sizes.push_back(v);
  }
  if (sizes.size() < 2) throw std::runtime_error("load_net: bad sizes header");
  DenseNet net;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    DenseLayer layer;
    layer.in = sizes[i];
    layer.out = sizes[i + 1];
    layer.activation = i + 2 == sizes.size() ? Activation::kIdentity : Activation::kRelu;
    layer.weights.resize(static_cast<std::size_t>(layer.out) * layer.in);
    layer.biases.resize(layer.out);
    for (auto& w : layer.weights)
      if (!(is >> w)) throw std::runtime_error("load_net: truncated weights");
    for (auto& b : layer.biases)
      if (!(is >> b)) throw std::runtime_error("load_net: truncated biases");
    net.layers.push_back(std::move(layer));
  }
  return net;
}

}  // namespace cuavsim
