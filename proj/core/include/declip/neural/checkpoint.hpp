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

#ifndef DECLIP_NEURAL_CHECKPOINT_HPP_
#define DECLIP_NEURAL_CHECKPOINT_HPP_

#include <filesystem>
#include <optional>

#include "declip/error.hpp"
#include "declip/neural/unet.hpp"

namespace declip::nn {

// Checkpoint layout, all integers little-endian u32:
//   "DCLPUNET" | version | depth | base_filters | image_size | final_activation
//   | layer_count | per layer: in, out, kernel, weights (f64 LE), biases (f64 LE)
//   | crc32 of every preceding byte
inline constexpr std::uint32_t kCheckpointVersion = 1;

class ConfigMismatch : public Error {
 public:
  using Error::Error;
};

void save_model(const UNetModel& model, const std::filesystem::path& path);

// Throws FormatError on a bad magic, version, checksum or truncation, and
// ConfigMismatch when `expected` is given and differs from the stored config.
UNetModel load_model(const std::filesystem::path& path,
                     const std::optional<UNetConfig>& expected = std::nullopt);

}  // namespace declip::nn

#endif  // DECLIP_NEURAL_CHECKPOINT_HPP_
