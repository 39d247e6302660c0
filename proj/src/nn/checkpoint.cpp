#include "amt/nn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace amt::nn {
namespace {

constexpr char kMagic[8] = {'A', 'M', 'T', 'C', 'K', 'P', 'T', '\x01'};

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }

uint32_t read_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

template <typename T>
void save_impl(const std::string& path,
               const std::vector<std::pair<std::string, const Tensor<T>*>>& tensors,
               uint8_t dtype) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  os.write(kMagic, 8);
  write_u32(os, static_cast<uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    write_u32(os, static_cast<uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    os.put(static_cast<char>(dtype));
    write_u32(os, static_cast<uint32_t>(t->shape.size()));
    for (int d : t->shape) write_u32(os, static_cast<uint32_t>(d));
    os.write(reinterpret_cast<const char*>(t->data.data()),
             static_cast<std::streamsize>(t->data.size() * sizeof(T)));
  }
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

}  // namespace

void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, const TensorF*>>& tensors) {
  save_impl(path, tensors, 0);
}

void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, const TensorD*>>& tensors) {
  save_impl(path, tensors, 1);
}

std::vector<CheckpointEntry> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  const uint32_t count = read_u32(is);
  std::vector<CheckpointEntry> entries(count);
  for (auto& e : entries) {
    const uint32_t name_len = read_u32(is);
    e.name.resize(name_len);
    is.read(e.name.data(), name_len);
    const int dtype = is.get();
    const uint32_t ndim = read_u32(is);
    e.shape.resize(ndim);
    long numel = 1;
    for (auto& d : e.shape) {
      d = static_cast<int>(read_u32(is));
      numel *= d;
    }
    e.values.resize(static_cast<size_t>(numel));
    if (dtype == 0) {
      std::vector<float> buf(static_cast<size_t>(numel));
      is.read(reinterpret_cast<char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
      for (size_t i = 0; i < buf.size(); ++i) e.values[i] = buf[i];
    } else if (dtype == 1) {
      is.read(reinterpret_cast<char*>(e.values.data()),
              static_cast<std::streamsize>(e.values.size() * sizeof(double)));
    } else {
      throw std::runtime_error("checkpoint: unknown dtype in " + path);
    }
    if (!is) throw std::runtime_error("checkpoint: truncated file " + path);
  }
  return entries;
}

}  // namespace amt::nn
