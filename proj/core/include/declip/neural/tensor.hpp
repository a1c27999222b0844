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

#ifndef DECLIP_NEURAL_TENSOR_HPP_
#define DECLIP_NEURAL_TENSOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace declip::nn {

struct Shape4 {
  std::size_t n = 0, c = 0, h = 0, w = 0;

  std::size_t count() const { return n * c * h * w; }
  std::size_t plane() const { return h * w; }
  std::string str() const;
  friend bool operator==(const Shape4&, const Shape4&) = default;
};

// Dense NCHW tensor of doubles.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(Shape4 shape, double fill = 0.0);
  Tensor4(Shape4 shape, std::vector<double> data);

  const Shape4& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double& at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) {
    return data_[((n * shape_.c + c) * shape_.h + y) * shape_.w + x];
  }
  double at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) const {
    return data_[((n * shape_.c + c) * shape_.h + y) * shape_.w + x];
  }
  // Contiguous c x h x w block of batch item n.
  std::span<double> item(std::size_t n) {
    const std::size_t k = shape_.c * shape_.plane();
    return {data_.data() + n * k, k};
  }
  std::span<const double> item(std::size_t n) const {
    const std::size_t k = shape_.c * shape_.plane();
    return {data_.data() + n * k, k};
  }

  bool all_finite() const;
  friend bool operator==(const Tensor4&, const Tensor4&) = default;

 private:
  Shape4 shape_;
  std::vector<double> data_;
};

}  // namespace declip::nn

#endif  // DECLIP_NEURAL_TENSOR_HPP_
