// Copyright 2026 The Declip Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "declip/neural/layers.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

#include "declip/error.hpp"

namespace declip::nn {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

// Rows (c, ky, kx), columns (y, x): cols[row][y*W + x] = in[c][y+ky-pad][x+kx-pad].
void im2col(std::span<const double> image, std::size_t channels, std::size_t h, std::size_t w,
            std::size_t k, std::size_t pad, RowMatrix& cols) {
  cols.resize(static_cast<Eigen::Index>(channels * k * k), static_cast<Eigen::Index>(h * w));
  double* out = cols.data();
  for (std::size_t c = 0; c < channels; ++c) {
    const double* plane = image.data() + c * h * w;
    for (std::size_t ky = 0; ky < k; ++ky) {
      for (std::size_t kx = 0; kx < k; ++kx) {
        for (std::size_t y = 0; y < h; ++y) {
          const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y + ky) - static_cast<std::ptrdiff_t>(pad);
          if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) {
            std::fill_n(out, w, 0.0);
            out += w;
            continue;
          }
          const double* row = plane + static_cast<std::size_t>(sy) * w;
          for (std::size_t x = 0; x < w; ++x) {
            const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x + kx) - static_cast<std::ptrdiff_t>(pad);
            *out++ = (sx < 0 || sx >= static_cast<std::ptrdiff_t>(w)) ? 0.0 : row[sx];
          }
        }
      }
    }
  }
}

void col2im(const RowMatrix& cols, std::size_t channels, std::size_t h, std::size_t w,
            std::size_t k, std::size_t pad, std::span<double> image) {
  const double* in = cols.data();
  for (std::size_t c = 0; c < channels; ++c) {
    double* plane = image.data() + c * h * w;
    for (std::size_t ky = 0; ky < k; ++ky) {
      for (std::size_t kx = 0; kx < k; ++kx) {
        for (std::size_t y = 0; y < h; ++y) {
          const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y + ky) - static_cast<std::ptrdiff_t>(pad);
          if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) {
            in += w;
            continue;
          }
          double* row = plane + static_cast<std::size_t>(sy) * w;
          for (std::size_t x = 0; x < w; ++x, ++in) {
            const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x + kx) - static_cast<std::ptrdiff_t>(pad);
            if (sx >= 0 && sx < static_cast<std::ptrdiff_t>(w)) row[sx] += *in;
          }
        }
      }
    }
  }
}

}  // namespace

Conv2d::Conv2d(std::size_t in_channels, std::size_t out_channels, std::size_t kernel)
    : in_(in_channels),
      out_(out_channels),
      k_(kernel),
      weight_(out_channels * in_channels * kernel * kernel),
      bias_(out_channels) {
  if (in_ == 0 || out_ == 0) throw InvalidArgument("Conv2d: channel counts must be positive");
  if (k_ < 1 || k_ > 3) throw InvalidArgument("Conv2d: kernel must be 1, 2 or 3");
}

void Conv2d::init_he(std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(in_ * k_ * k_)));
  for (double& v : weight_.value) v = dist(rng);
  std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
}

Tensor4 Conv2d::forward(const Tensor4& input) const {
  const Shape4& s = input.shape();
  if (s.c != in_) {
    throw ShapeError("Conv2d::forward: expected " + std::to_string(in_) + " channels, got " +
                     s.str());
  }
  Tensor4 out({s.n, out_, s.h, s.w});
  const auto rows = static_cast<Eigen::Index>(out_);
  const auto depth = static_cast<Eigen::Index>(in_ * k_ * k_);
  const auto hw = static_cast<Eigen::Index>(s.plane());
  const ConstMatrixMap weights(weight_.value.data(), rows, depth);
  const Eigen::Map<const Eigen::VectorXd> bias(bias_.value.data(), rows);
  RowMatrix cols;
  for (std::size_t n = 0; n < s.n; ++n) {
    MatrixMap y(out.item(n).data(), rows, hw);
    if (k_ == 1) {
      y.noalias() = weights * ConstMatrixMap(input.item(n).data(), depth, hw);
    } else {
      im2col(input.item(n), in_, s.h, s.w, k_, (k_ - 1) / 2, cols);
      y.noalias() = weights * cols;
    }
    y.colwise() += bias;
  }
  return out;
}

Tensor4 Conv2d::backward(const Tensor4& grad_output, const Tensor4& input) {
  const Shape4& s = input.shape();
  if (s.c != in_ || grad_output.shape() != Shape4{s.n, out_, s.h, s.w}) {
    throw ShapeError("Conv2d::backward: gradient " + grad_output.shape().str() +
                     " inconsistent with input " + s.str());
  }
  Tensor4 grad_input(s);
  const auto rows = static_cast<Eigen::Index>(out_);
  const auto depth = static_cast<Eigen::Index>(in_ * k_ * k_);
  const auto hw = static_cast<Eigen::Index>(s.plane());
  const ConstMatrixMap weights(weight_.value.data(), rows, depth);
  MatrixMap grad_w(weight_.grad.data(), rows, depth);
  Eigen::Map<Eigen::VectorXd> grad_b(bias_.grad.data(), rows);
  RowMatrix cols, grad_cols;
  for (std::size_t n = 0; n < s.n; ++n) {
    const ConstMatrixMap dy(grad_output.item(n).data(), rows, hw);
    grad_b += dy.rowwise().sum();
    if (k_ == 1) {
      const ConstMatrixMap x(input.item(n).data(), depth, hw);
      grad_w.noalias() += dy * x.transpose();
      MatrixMap(grad_input.item(n).data(), depth, hw).noalias() = weights.transpose() * dy;
    } else {
      const std::size_t pad = (k_ - 1) / 2;
      im2col(input.item(n), in_, s.h, s.w, k_, pad, cols);
      grad_w.noalias() += dy * cols.transpose();
      grad_cols.noalias() = weights.transpose() * dy;
      col2im(grad_cols, in_, s.h, s.w, k_, pad, grad_input.item(n));
    }
  }
  return grad_input;
}

Tensor4 relu_forward(const Tensor4& x) {
  Tensor4 y(x.shape());
  auto in = x.data();
  auto out = y.data();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
  return y;
}

Tensor4 relu_backward(const Tensor4& grad_output, const Tensor4& x) {
  if (grad_output.shape() != x.shape()) throw ShapeError("relu_backward: shape mismatch");
  Tensor4 g(x.shape());
  auto in = x.data();
  auto up = grad_output.data();
  auto out = g.data();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > 0.0 ? up[i] : 0.0;
  return g;
}

PoolOutput maxpool2x2_forward(const Tensor4& x) {
  const Shape4& s = x.shape();
  if (s.h % 2 != 0 || s.w % 2 != 0) {
    throw ShapeError("maxpool2x2: spatial dims must be even, got " + s.str());
  }
  PoolOutput r{Tensor4({s.n, s.c, s.h / 2, s.w / 2}), {}};
  r.argmax.resize(r.output.size());
  const auto in = x.data();
  auto out = r.output.data();
  std::size_t o = 0;
  for (std::size_t nc = 0; nc < s.n * s.c; ++nc) {
    const std::size_t base = nc * s.plane();
    for (std::size_t y = 0; y < s.h; y += 2) {
      for (std::size_t xx = 0; xx < s.w; xx += 2, ++o) {
        std::size_t best = base + y * s.w + xx;
        const std::size_t cand[3] = {best + 1, best + s.w, best + s.w + 1};
        for (std::size_t c : cand) {
          if (in[c] > in[best]) best = c;
        }
        out[o] = in[best];
        r.argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return r;
}

Tensor4 maxpool2x2_backward(const Tensor4& grad_output, const std::vector<std::uint32_t>& argmax,
                            const Shape4& input_shape) {
  if (argmax.size() != grad_output.size()) throw ShapeError("maxpool2x2_backward: bad argmax");
  Tensor4 g(input_shape);
  auto out = g.data();
  const auto up = grad_output.data();
  for (std::size_t i = 0; i < up.size(); ++i) out[argmax[i]] += up[i];
  return g;
}

Tensor4 upsample2x_forward(const Tensor4& x) {
  const Shape4& s = x.shape();
  Tensor4 y({s.n, s.c, 2 * s.h, 2 * s.w});
  for (std::size_t n = 0; n < s.n; ++n)
    for (std::size_t c = 0; c < s.c; ++c)
      for (std::size_t yy = 0; yy < 2 * s.h; ++yy)
        for (std::size_t xx = 0; xx < 2 * s.w; ++xx) y.at(n, c, yy, xx) = x.at(n, c, yy / 2, xx / 2);
  return y;
}

Tensor4 upsample2x_backward(const Tensor4& grad_output) {
  const Shape4& s = grad_output.shape();
  if (s.h % 2 != 0 || s.w % 2 != 0) throw ShapeError("upsample2x_backward: odd dims");
  Tensor4 g({s.n, s.c, s.h / 2, s.w / 2});
  for (std::size_t n = 0; n < s.n; ++n)
    for (std::size_t c = 0; c < s.c; ++c)
      for (std::size_t yy = 0; yy < s.h; ++yy)
        for (std::size_t xx = 0; xx < s.w; ++xx) g.at(n, c, yy / 2, xx / 2) += grad_output.at(n, c, yy, xx);
  return g;
}

Tensor4 concat_channels(const Tensor4& a, const Tensor4& b) {
  const Shape4& sa = a.shape();
  const Shape4& sb = b.shape();
  if (sa.n != sb.n || sa.h != sb.h || sa.w != sb.w) {
    throw ShapeError("concat_channels: " + sa.str() + " vs " + sb.str());
  }
  Tensor4 y({sa.n, sa.c + sb.c, sa.h, sa.w});
  for (std::size_t n = 0; n < sa.n; ++n) {
    auto dst = y.item(n);
    const auto ia = a.item(n);
    const auto ib = b.item(n);
    std::copy(ia.begin(), ia.end(), dst.begin());
    std::copy(ib.begin(), ib.end(), dst.begin() + static_cast<std::ptrdiff_t>(ia.size()));
  }
  return y;
}

std::pair<Tensor4, Tensor4> split_channels(const Tensor4& x, std::size_t first_channels) {
  const Shape4& s = x.shape();
  if (first_channels > s.c) throw ShapeError("split_channels: too many channels requested");
  Tensor4 a({s.n, first_channels, s.h, s.w});
  Tensor4 b({s.n, s.c - first_channels, s.h, s.w});
  for (std::size_t n = 0; n < s.n; ++n) {
    const auto src = x.item(n);
    auto da = a.item(n);
    auto db = b.item(n);
    std::copy_n(src.begin(), da.size(), da.begin());
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(da.size()), db.size(), db.begin());
  }
  return {std::move(a), std::move(b)};
}

}  // namespace declip::nn
