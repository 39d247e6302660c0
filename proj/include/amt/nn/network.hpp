#pragma once

#include <random>

#include "amt/nn/kernels.hpp"

namespace amt::nn {

enum class LayerKind { Conv3x3, Dense, Relu, Softmax };

template <typename T>
struct Layer {
  LayerKind kind;
  Tensor<T> weights;  // conv: {3,3,cin,cout}; dense: {out,in}; empty otherwise
  Tensor<T> bias;     // conv: {cout}; dense: {out}
  int stride = 1;     // conv only

  bool has_params() const { return kind == LayerKind::Conv3x3 || kind == LayerKind::Dense; }
};

template <typename T>
Layer<T> make_conv3x3(int cin, int cout, int stride) {
  Layer<T> l;
  l.kind = LayerKind::Conv3x3;
  l.weights = Tensor<T>({3, 3, cin, cout});
  l.bias = Tensor<T>({cout});
  l.stride = stride;
  return l;
}

template <typename T>
Layer<T> make_dense(int in_dim, int out_dim) {
  Layer<T> l;
  l.kind = LayerKind::Dense;
  l.weights = Tensor<T>({out_dim, in_dim});
  l.bias = Tensor<T>({out_dim});
  return l;
}

template <typename T>
Layer<T> make_relu() {
  Layer<T> l;
  l.kind = LayerKind::Relu;
  return l;
}

template <typename T>
Layer<T> make_softmax() {
  Layer<T> l;
  l.kind = LayerKind::Softmax;
  return l;
}

// Uniform fan-in init: weights in +-1/sqrt(fan_in), biases zero.
template <typename T>
void init_fan_in(Layer<T>& l, std::mt19937& rng) {
  if (!l.has_params()) return;
  const long fan_in = l.kind == LayerKind::Conv3x3
                          ? 9L * l.weights.shape[2]
                          : l.weights.shape[1];
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (T& v : l.weights.data) v = static_cast<T>(dist(rng));
  l.bias.zero();
}

template <typename T>
using Network = std::vector<Layer<T>>;

// Per-layer inputs cached by forward; a dense layer flattens implicitly, so
// the cached input keeps the original shape while dense math treats it flat.
template <typename T>
struct StackCache {
  std::vector<Tensor<T>> inputs;
  Tensor<T> output;
  bool valid = false;
};

template <typename T>
void stack_forward(const Network<T>& net, const Tensor<T>& input, StackCache<T>& cache) {
  cache.inputs.resize(net.size());
  Tensor<T> cur = input;
  for (size_t i = 0; i < net.size(); ++i) {
    cache.inputs[i] = cur;
    const Layer<T>& l = net[i];
    switch (l.kind) {
      case LayerKind::Conv3x3: cur = conv3x3_forward(cur, l.weights, l.bias, l.stride); break;
      case LayerKind::Dense: {
        Tensor<T> flat = cur;
        flat.shape = {static_cast<int>(flat.numel())};
        cur = dense_forward(flat, l.weights, l.bias);
        break;
      }
      case LayerKind::Relu: cur = relu_forward(cur); break;
      case LayerKind::Softmax: cur = softmax(cur); break;
    }
  }
  cache.output = cur;
  cache.valid = true;
}

template <typename T>
struct LayerGrads {
  Tensor<T> weights;
  Tensor<T> bias;
};

template <typename T>
std::vector<LayerGrads<T>> zero_grads(const Network<T>& net) {
  std::vector<LayerGrads<T>> g(net.size());
  for (size_t i = 0; i < net.size(); ++i) {
    if (net[i].has_params()) {
      g[i].weights = Tensor<T>(net[i].weights.shape);
      g[i].bias = Tensor<T>(net[i].bias.shape);
    }
  }
  return g;
}

// Reverse pass over the stack. Requires a prior stack_forward on the same
// input; accumulates into param_grads and returns the input gradient.
template <typename T>
Tensor<T> stack_backward(const Network<T>& net, const StackCache<T>& cache,
                         const Tensor<T>& upstream, std::vector<LayerGrads<T>>& param_grads) {
  if (!cache.valid) throw std::logic_error("stack_backward: no cached forward pass");
  Tensor<T> d = upstream;
  for (size_t ri = net.size(); ri-- > 0;) {
    const Layer<T>& l = net[ri];
    const Tensor<T>& x = cache.inputs[ri];
    switch (l.kind) {
      case LayerKind::Conv3x3: {
        Tensor<T> dx;
        conv3x3_backward(x, l.weights, l.stride, d, &dx, param_grads[ri].weights,
                         param_grads[ri].bias);
        d = std::move(dx);
        break;
      }
      case LayerKind::Dense: {
        Tensor<T> flat = x;
        flat.shape = {static_cast<int>(flat.numel())};
        Tensor<T> dx;
        dense_backward(flat, l.weights, d, &dx, param_grads[ri].weights, param_grads[ri].bias);
        dx.shape = x.shape;
        d = std::move(dx);
        break;
      }
      case LayerKind::Relu: {
        Tensor<T> dx;
        relu_backward(x, d, dx);
        d = std::move(dx);
        break;
      }
      case LayerKind::Softmax: {
        // forward output of this layer is the input of the next, or the
        // stack output if it is last
        const Tensor<T>& p = ri + 1 < net.size() ? cache.inputs[ri + 1] : cache.output;
        Tensor<T> dx;
        softmax_backward(p, d, dx);
        d = std::move(dx);
        break;
      }
    }
  }
  return d;
}

}  // namespace amt::nn
