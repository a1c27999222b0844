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

#include "declip/neural/loss.hpp"

#include <algorithm>

#include "declip/error.hpp"

namespace declip::nn {

LossResult mse_loss(const Tensor4& pred, const Tensor4& target,
                    std::span<const std::size_t> valid_rows) {
  const Shape4& s = pred.shape();
  if (s != target.shape()) {
    throw ShapeError("mse_loss: " + s.str() + " vs " + target.shape().str());
  }
  if (!valid_rows.empty() && valid_rows.size() != s.n) {
    throw ShapeError("mse_loss: valid_rows needs one entry per batch item");
  }
  LossResult r{0.0, Tensor4(s), 0};
  auto rows_for = [&](std::size_t n) {
    return valid_rows.empty() ? s.h : std::min(valid_rows[n], s.h);
  };
  for (std::size_t n = 0; n < s.n; ++n) r.valid_count += rows_for(n) * s.w * s.c;
  if (r.valid_count == 0) throw InvalidArgument("mse_loss: no valid pixels");

  const double inv = 1.0 / static_cast<double>(r.valid_count);
  double sum = 0.0;
  for (std::size_t n = 0; n < s.n; ++n) {
    const std::size_t rows = rows_for(n);
    for (std::size_t c = 0; c < s.c; ++c) {
      for (std::size_t y = 0; y < rows; ++y) {
        for (std::size_t x = 0; x < s.w; ++x) {
          const double d = pred.at(n, c, y, x) - target.at(n, c, y, x);
          sum += d * d;
          r.grad.at(n, c, y, x) = 2.0 * d * inv;
        }
      }
    }
  }
  r.loss = sum * inv;
  return r;
}

}  // namespace declip::nn
