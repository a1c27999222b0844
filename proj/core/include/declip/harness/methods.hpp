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

#ifndef DECLIP_HARNESS_METHODS_HPP_
#define DECLIP_HARNESS_METHODS_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "declip/neural/unet.hpp"
#include "declip/signal/stft.hpp"
#include "declip/signal/waveform.hpp"
#include "declip/sparse/dictionary.hpp"
#include "declip/sparse/iht.hpp"

namespace declip::harness {

enum class Method { kPassthrough, kIht, kConsistentIht, kUnet };

std::string to_string(Method method);
// Accepts passthrough|clipped, iht, consistent_iht|cons-iht, unet.
Method parse_method(const std::string& name);

struct MethodConfig {
  Method method = Method::kPassthrough;
  sparse::SparseSolverConfig sparse;
  std::filesystem::path checkpoint;
};

class Declipper {
 public:
  virtual ~Declipper() = default;
  virtual Method method() const = 0;
  // theta is the clipping level the input was produced with.
  virtual signal::Waveform run(const signal::Waveform& clipped, double theta) const = 0;
};

// Throws InvalidArgument for a U-Net without checkpoint, and whatever
// load_model throws for a bad one.
std::unique_ptr<Declipper> make_declipper(const MethodConfig& config);

// STFT used with a U-Net of the given config: one image row per frame and
// one column per retained bin.
signal::StftConfig stft_for_unet(const nn::UNetConfig& config);

// Stage 3: clipped spectrum images (normalized) through the model, then
// magnitude/phase recombination and inverse STFT.
signal::Waveform unet_declip(const nn::UNetModel& model, const signal::Waveform& clipped);

}  // namespace declip::harness

#endif  // DECLIP_HARNESS_METHODS_HPP_
