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

#include "declip/sparse/clip_mask.hpp"

#include <algorithm>

#include "declip/error.hpp"

namespace declip::sparse {

std::size_t ClipMask::reliable_count() const {
  return static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), SampleLabel::kReliable));
}

ClipMask build_clip_mask(std::span<const double> y, double theta, double delta) {
  if (!(theta > 0.0)) throw InvalidArgument("build_clip_mask: theta must be positive");
  ClipMask mask;
  mask.theta = theta;
  mask.labels.resize(y.size(), SampleLabel::kReliable);
  const double level = theta * (1.0 - delta);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] >= level) {
      mask.labels[i] = SampleLabel::kClippedPositive;
    } else if (y[i] <= -level) {
      mask.labels[i] = SampleLabel::kClippedNegative;
    }
  }
  return mask;
}

ClipMask slice(const ClipMask& mask, std::ptrdiff_t begin, std::size_t length) {
  ClipMask out;
  out.theta = mask.theta;
  out.labels.assign(length, SampleLabel::kReliable);
  const auto n = static_cast<std::ptrdiff_t>(mask.size());
  for (std::size_t k = 0; k < length; ++k) {
    const std::ptrdiff_t i = begin + static_cast<std::ptrdiff_t>(k);
    if (i >= 0 && i < n) out.labels[k] = mask.labels[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace declip::sparse
