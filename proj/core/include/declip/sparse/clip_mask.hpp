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

#ifndef DECLIP_SPARSE_CLIP_MASK_HPP_
#define DECLIP_SPARSE_CLIP_MASK_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace declip::sparse {

enum class SampleLabel : unsigned char { kReliable, kClippedPositive, kClippedNegative };

inline constexpr double kDetectionTolerance = 1e-4;

struct ClipMask {
  std::vector<SampleLabel> labels;
  double theta = 0.0;

  std::size_t size() const { return labels.size(); }
  std::size_t reliable_count() const;
  std::size_t clipped_count() const { return size() - reliable_count(); }
};

// y >= theta(1 - delta) -> clipped positive, y <= -theta(1 - delta) -> clipped
// negative, otherwise reliable.
ClipMask build_clip_mask(std::span<const double> y, double theta,
                         double delta = kDetectionTolerance);

// Returns the sub-mask for samples [begin, begin + length); positions outside
// the parent are reliable.
ClipMask slice(const ClipMask& mask, std::ptrdiff_t begin, std::size_t length);

}  // namespace declip::sparse

#endif  // DECLIP_SPARSE_CLIP_MASK_HPP_
