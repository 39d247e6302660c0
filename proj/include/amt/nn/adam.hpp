#pragma once

#include <optional>
#include <string>

#include "amt/nn/tensor.hpp"

namespace amt::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  std::vector<Tensor<T>> first_moment;
  std::vector<Tensor<T>> second_moment;
  long step_count = 0;

  template <typename ParamRange>
  static AdamState make(const ParamRange& params) {
    AdamState s;
    for (const auto* p : params) {
      s.first_moment.emplace_back(p->shape);
      s.second_moment.emplace_back(p->shape);
    }
    return s;
  }
};

// One Adam step with bias correction: delta = -lr * mhat / (sqrt(vhat) + eps).
// A non-finite gradient rejects the whole update and reports which tensor
// tripped; parameters and moments are left untouched in that case.
template <typename T>
std::optional<std::string> adam_update(std::vector<Tensor<T>*>& params,
                                       const std::vector<Tensor<T>>& grads, AdamState<T>& state,
                                       const AdamConfig& cfg,
                                       const std::vector<std::string>* names = nullptr) {
  for (size_t k = 0; k < grads.size(); ++k) {
    if (!grads[k].all_finite()) {
      std::string id = names ? (*names)[k] : "tensor " + std::to_string(k);
      return "non-finite gradient in " + id;
    }
  }
  state.step_count += 1;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step_count));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step_count));
  for (size_t k = 0; k < params.size(); ++k) {
    T* p = params[k]->ptr();
    T* m = state.first_moment[k].ptr();
    T* v = state.second_moment[k].ptr();
    const T* g = grads[k].ptr();
    const long n = params[k]->numel();
    for (long i = 0; i < n; ++i) {
      const double gi = static_cast<double>(g[i]);
      const double mi = cfg.beta1 * static_cast<double>(m[i]) + (1.0 - cfg.beta1) * gi;
      const double vi = cfg.beta2 * static_cast<double>(v[i]) + (1.0 - cfg.beta2) * gi * gi;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      const double mhat = mi / c1;
      const double vhat = vi / c2;
      p[i] = static_cast<T>(static_cast<double>(p[i]) - cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps));
    }
  }
  return std::nullopt;
}

}  // namespace amt::nn
