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

#include "declip/neural/tensor.hpp"

#include <cmath>

#include "declip/error.hpp"

namespace declip::nn {

std::string Shape4::str() const {
  return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
         std::to_string(w) + ")";
}

Tensor4::Tensor4(Shape4 shape, double fill) : shape_(shape), data_(shape.count(), fill) {}

Tensor4::Tensor4(Shape4 shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.count()) {
    throw ShapeError("Tensor4: " + std::to_string(data_.size()) + " values for shape " +
                     shape_.str());
  }
}

bool Tensor4::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace declip::nn
