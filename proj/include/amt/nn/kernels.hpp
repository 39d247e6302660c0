#pragma once

#include <algorithm>
#include <cmath>

#include "amt/nn/tensor.hpp"

namespace amt::nn {

// 3x3 convolution over HWC input with "same" padding: output spatial size is
// ceil(in/stride). Weights are [3][3][Cin][Cout], bias [Cout]. The inner loop
// runs over output channels so it vectorizes.

inline int conv_out_extent(int in, int stride) { return (in + stride - 1) / stride; }

template <typename T>
void conv3x3_forward_into(const Tensor<T>& in, const Tensor<T>& w, const Tensor<T>& b,
                          int stride, Tensor<T>& out) {
  const int h = in.shape[0], wd = in.shape[1], cin = in.shape[2];
  const int cout = w.shape[3];
  if (w.shape[0] != 3 || w.shape[1] != 3 || w.shape[2] != cin)
    throw std::invalid_argument("conv3x3: kernel " + shape_str(w.shape) +
                                " does not accept input " + shape_str(in.shape));
  const int oh = conv_out_extent(h, stride), ow = conv_out_extent(wd, stride);
  // pad_total = (out-1)*stride + 3 - in, split with the smaller half first
  const int pad_top = std::max((oh - 1) * stride + 3 - h, 0) / 2;
  const int pad_left = std::max((ow - 1) * stride + 3 - wd, 0) / 2;

  out.shape = {oh, ow, cout};
  out.data.resize(static_cast<size_t>(oh) * ow * cout);

  const T* wp = w.ptr();
  const T* ip = in.ptr();
  T* op = out.ptr();
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      T* acc = op + (static_cast<size_t>(oy) * ow + ox) * cout;
      for (int co = 0; co < cout; ++co) acc[co] = b[co];
      for (int ky = 0; ky < 3; ++ky) {
        const int iy = oy * stride + ky - pad_top;
        if (iy < 0 || iy >= h) continue;
        for (int kx = 0; kx < 3; ++kx) {
          const int ix = ox * stride + kx - pad_left;
          if (ix < 0 || ix >= wd) continue;
          const T* irow = ip + (static_cast<size_t>(iy) * wd + ix) * cin;
          const T* wrow = wp + static_cast<size_t>((ky * 3 + kx)) * cin * cout;
          for (int ci = 0; ci < cin; ++ci) {
            const T v = irow[ci];
            const T* wr = wrow + static_cast<size_t>(ci) * cout;
            for (int co = 0; co < cout; ++co) acc[co] += v * wr[co];
          }
        }
      }
    }
  }
}

template <typename T>
Tensor<T> conv3x3_forward(const Tensor<T>& in, const Tensor<T>& w, const Tensor<T>& b,
                          int stride) {
  Tensor<T> out;
  conv3x3_forward_into(in, w, b, stride, out);
  return out;
}

// Accumulates into dw/db; overwrites din when given.
template <typename T>
void conv3x3_backward(const Tensor<T>& in, const Tensor<T>& w, int stride,
                      const Tensor<T>& dout, Tensor<T>* din, Tensor<T>& dw, Tensor<T>& db) {
  const int h = in.shape[0], wd = in.shape[1], cin = in.shape[2];
  const int cout = w.shape[3];
  const int oh = dout.shape[0], ow = dout.shape[1];
  const int pad_top = std::max((oh - 1) * stride + 3 - h, 0) / 2;
  const int pad_left = std::max((ow - 1) * stride + 3 - wd, 0) / 2;

  if (din) {
    din->shape = in.shape;
    din->data.assign(in.data.size(), T(0));
  }
  const T* ip = in.ptr();
  const T* wp = w.ptr();
  const T* dop = dout.ptr();
  T* dwp = dw.ptr();
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      const T* g = dop + (static_cast<size_t>(oy) * ow + ox) * cout;
      for (int co = 0; co < cout; ++co) db[co] += g[co];
      for (int ky = 0; ky < 3; ++ky) {
        const int iy = oy * stride + ky - pad_top;
        if (iy < 0 || iy >= h) continue;
        for (int kx = 0; kx < 3; ++kx) {
          const int ix = ox * stride + kx - pad_left;
          if (ix < 0 || ix >= wd) continue;
          const size_t ibase = (static_cast<size_t>(iy) * wd + ix) * cin;
          const size_t wbase = static_cast<size_t>((ky * 3 + kx)) * cin * cout;
          for (int ci = 0; ci < cin; ++ci) {
            const T v = ip[ibase + ci];
            T* dwr = dwp + wbase + static_cast<size_t>(ci) * cout;
            T acc = 0;
            const T* wr = wp + wbase + static_cast<size_t>(ci) * cout;
            for (int co = 0; co < cout; ++co) {
              dwr[co] += v * g[co];
              acc += wr[co] * g[co];
            }
            if (din) din->data[ibase + ci] += acc;
          }
        }
      }
    }
  }
}

// y = W x + b with W stored [out][in].
template <typename T>
void dense_forward_into(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b,
                        Tensor<T>& y) {
  const int out_dim = w.shape[0], in_dim = w.shape[1];
  if (x.numel() != in_dim)
    throw std::invalid_argument("dense: weights " + shape_str(w.shape) +
                                " do not accept input of length " + std::to_string(x.numel()));
  y.shape = {out_dim};
  y.data.resize(static_cast<size_t>(out_dim));
  const T* xp = x.ptr();
  const T* wp = w.ptr();
  for (int o = 0; o < out_dim; ++o) {
    const T* row = wp + static_cast<size_t>(o) * in_dim;
    T acc = 0;
    for (int i = 0; i < in_dim; ++i) acc += row[i] * xp[i];
    y[o] = acc + b[o];
  }
}

template <typename T>
Tensor<T> dense_forward(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  Tensor<T> y;
  dense_forward_into(x, w, b, y);
  return y;
}

template <typename T>
void dense_backward(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& dy,
                    Tensor<T>* dx, Tensor<T>& dw, Tensor<T>& db) {
  const int out_dim = w.shape[0], in_dim = w.shape[1];
  if (dx) {
    dx->shape = x.shape;
    dx->data.assign(x.data.size(), T(0));
  }
  const T* xp = x.ptr();
  const T* wp = w.ptr();
  T* dwp = dw.ptr();
  for (int o = 0; o < out_dim; ++o) {
    const T g = dy[o];
    db[o] += g;
    T* dwr = dwp + static_cast<size_t>(o) * in_dim;
    const T* wr = wp + static_cast<size_t>(o) * in_dim;
    if (dx) {
      T* dxp = dx->ptr();
      for (int i = 0; i < in_dim; ++i) {
        dwr[i] += g * xp[i];
        dxp[i] += g * wr[i];
      }
    } else {
      for (int i = 0; i < in_dim; ++i) dwr[i] += g * xp[i];
    }
  }
}

template <typename T>
void relu_forward_into(const Tensor<T>& x, Tensor<T>& y) {
  y.shape = x.shape;
  y.data.resize(x.data.size());
  for (size_t i = 0; i < x.data.size(); ++i) y.data[i] = x.data[i] > T(0) ? x.data[i] : T(0);
}

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& x) {
  Tensor<T> y;
  relu_forward_into(x, y);
  return y;
}

// Mask from the pre-activation input (cached by the forward pass).
template <typename T>
void relu_backward(const Tensor<T>& x, const Tensor<T>& dy, Tensor<T>& dx) {
  dx.shape = x.shape;
  dx.data.resize(x.data.size());
  for (size_t i = 0; i < x.data.size(); ++i) dx.data[i] = x.data[i] > T(0) ? dy.data[i] : T(0);
}

// Numerically stable softmax over a flat vector.
template <typename T>
void softmax_into(const Tensor<T>& logits, Tensor<T>& p) {
  p.shape = logits.shape;
  p.data.resize(logits.data.size());
  T mx = logits.data[0];
  for (T v : logits.data) mx = std::max(mx, v);
  T sum = 0;
  for (size_t i = 0; i < logits.data.size(); ++i) {
    p.data[i] = std::exp(logits.data[i] - mx);
    sum += p.data[i];
  }
  const T inv = T(1) / sum;
  for (T& v : p.data) v *= inv;
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& logits) {
  Tensor<T> p;
  softmax_into(logits, p);
  return p;
}

// dL/dlogits = p .* (dL/dp - <p, dL/dp>)
template <typename T>
void softmax_backward(const Tensor<T>& p, const Tensor<T>& dp, Tensor<T>& dlogits) {
  dlogits.shape = p.shape;
  dlogits.data.resize(p.data.size());
  T dot = 0;
  for (size_t i = 0; i < p.data.size(); ++i) dot += p.data[i] * dp.data[i];
  for (size_t i = 0; i < p.data.size(); ++i) dlogits.data[i] = p.data[i] * (dp.data[i] - dot);
}

}  // namespace amt::nn
