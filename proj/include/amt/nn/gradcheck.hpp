#pragma once

#include <functional>
#include <random>

#include "amt/nn/network.hpp"

namespace amt::nn {

// Central-difference gradient verification, 64-bit only. Relative error per
// element is |analytic - fd| / max(|analytic|, |fd|, 1e-8); the maximum over
// all checked elements is returned. samples_per_tensor = 0 sweeps every
// element; a positive value checks a deterministic random subset per tensor
// so large networks stay cheap.
inline double gradient_check(const std::function<double()>& loss,
                             const std::vector<Tensor<double>*>& params,
                             const std::vector<const Tensor<double>*>& analytic, double epsilon,
                             long samples_per_tensor = 0, uint64_t seed = 0x5eedULL) {
  std::mt19937_64 rng(seed);
  double max_err = 0.0;
  for (size_t k = 0; k < params.size(); ++k) {
    Tensor<double>& p = *params[k];
    const Tensor<double>& g = *analytic[k];
    const long n = p.numel();
    std::vector<long> idx;
    if (samples_per_tensor <= 0 || samples_per_tensor >= n) {
      idx.resize(n);
      for (long i = 0; i < n; ++i) idx[i] = i;
    } else {
      std::uniform_int_distribution<long> pick(0, n - 1);
      for (long s = 0; s < samples_per_tensor; ++s) idx.push_back(pick(rng));
    }
    for (long i : idx) {
      const double saved = p[i];
      p[i] = saved + epsilon;
      const double lp = loss();
      p[i] = saved - epsilon;
      const double lm = loss();
      p[i] = saved;
      const double fd = (lp - lm) / (2.0 * epsilon);
      const double a = g[i];
      const double err = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-8});
      max_err = std::max(max_err, err);
    }
  }
  return max_err;
}

// Stack-level check: the loss is a fixed random linear functional of the
// network output, so every output element contributes.
inline double gradient_check_stack(Network<double>& net, const Tensor<double>& input,
                                   double epsilon, long samples_per_tensor = 0,
                                   uint64_t seed = 0x5eedULL) {
  std::mt19937 rng(static_cast<uint32_t>(seed));
  StackCache<double> cache;
  stack_forward(net, input, cache);
  Tensor<double> u(cache.output.shape);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : u.data) v = dist(rng);

  auto loss = [&]() {
    StackCache<double> c;
    stack_forward(net, input, c);
    double s = 0;
    for (long i = 0; i < c.output.numel(); ++i) s += u[i] * c.output[i];
    return s;
  };

  auto grads = zero_grads(net);
  stack_backward(net, cache, u, grads);

  std::vector<Tensor<double>*> params;
  std::vector<const Tensor<double>*> analytic;
  for (size_t i = 0; i < net.size(); ++i) {
    if (!net[i].has_params()) continue;
    params.push_back(&net[i].weights);
    analytic.push_back(&grads[i].weights);
    params.push_back(&net[i].bias);
    analytic.push_back(&grads[i].bias);
  }
  if (params.empty()) return 0.0;
  return gradient_check(loss, params, analytic, epsilon, samples_per_tensor, seed);
}

}  // namespace amt::nn
