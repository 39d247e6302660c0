#pragma once

#include <string>
#include <utility>
#include <vector>

#include "amt/nn/tensor.hpp"

namespace amt::nn {

// Versioned binary container of named tensors. Values are stored as f32 or
// f64 depending on the tensor handed in; load converts to the requested
// element type.
struct CheckpointEntry {
  std::string name;
  std::vector<int> shape;
  std::vector<double> values;
};

void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, const TensorF*>>& tensors);
void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, const TensorD*>>& tensors);
std::vector<CheckpointEntry> load_checkpoint(const std::string& path);

// Copies entries into the given named tensors; throws if a name is missing
// or a shape differs.
template <typename T>
void restore_tensors(const std::vector<CheckpointEntry>& entries,
                     const std::vector<std::pair<std::string, Tensor<T>*>>& tensors) {
  for (const auto& [name, tensor] : tensors) {
    const CheckpointEntry* found = nullptr;
    for (const auto& e : entries)
      if (e.name == name) {
        found = &e;
        break;
      }
    if (!found) throw std::runtime_error("checkpoint: missing tensor " + name);
    if (found->shape != tensor->shape)
      throw std::runtime_error("checkpoint: shape mismatch for " + name + ": file " +
                               shape_str(found->shape) + " vs model " + shape_str(tensor->shape));
    for (size_t i = 0; i < tensor->data.size(); ++i)
      tensor->data[i] = static_cast<T>(found->values[i]);
  }
}

}  // namespace amt::nn
