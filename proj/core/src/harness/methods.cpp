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

#include "declip/harness/methods.hpp"

#include "declip/error.hpp"
#include "declip/neural/checkpoint.hpp"
#include "declip/neural/trainer.hpp"
#include "declip/signal/spectrum_image.hpp"

namespace declip::harness {
namespace {

class Passthrough final : public Declipper {
 public:
  Method method() const override { return Method::kPassthrough; }
  signal::Waveform run(const signal::Waveform& clipped, double) const override { return clipped; }
};

class SparseDeclipper final : public Declipper {
 public:
  SparseDeclipper(Method method, const sparse::SparseSolverConfig& cfg)
      : method_(method), cfg_(cfg), dict_(sparse::dct_dictionary(cfg.frame_len, cfg.n_atoms)) {
    cfg_.validate(dict_);
  }
  Method method() const override { return method_; }
  signal::Waveform run(const signal::Waveform& clipped, double theta) const override {
    const auto variant =
        method_ == Method::kIht ? sparse::Variant::kIht : sparse::Variant::kConsistentIht;
    return sparse::declip_signal(clipped, theta, dict_, cfg_, variant).output;
  }

 private:
  Method method_;
  sparse::SparseSolverConfig cfg_;
  sparse::Dictionary dict_;
};

class UnetDeclipper final : public Declipper {
 public:
  explicit UnetDeclipper(nn::UNetModel model) : model_(std::move(model)) {}
  Method method() const override { return Method::kUnet; }
  signal::Waveform run(const signal::Waveform& clipped, double) const override {
    return unet_declip(model_, clipped);
  }

 private:
  nn::UNetModel model_;
};

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::kPassthrough: return "passthrough";
    case Method::kIht: return "iht";
    case Method::kConsistentIht: return "consistent_iht";
    case Method::kUnet: return "unet";
  }
  return "passthrough";
}

Method parse_method(const std::string& name) {
  if (name == "passthrough" || name == "clipped") return Method::kPassthrough;
  if (name == "iht") return Method::kIht;
  if (name == "consistent_iht" || name == "cons-iht" || name == "cons_iht") {
    return Method::kConsistentIht;
  }
  if (name == "unet") return Method::kUnet;
  throw InvalidArgument("unknown method '" + name +
                        "' (passthrough, iht, consistent_iht, unet)");
}

std::unique_ptr<Declipper> make_declipper(const MethodConfig& config) {
  switch (config.method) {
    case Method::kPassthrough:
      return std::make_unique<Passthrough>();
    case Method::kIht:
    case Method::kConsistentIht:
      return std::make_unique<SparseDeclipper>(config.method, config.sparse);
    case Method::kUnet:
      if (config.checkpoint.empty()) throw InvalidArgument("unet method needs a checkpoint");
      return std::make_unique<UnetDeclipper>(nn::load_model(config.checkpoint));
  }
  throw InvalidArgument("unknown method");
}

signal::StftConfig stft_for_unet(const nn::UNetConfig& config) {
  return signal::StftConfig::for_image_size(config.image_size);
}

signal::Waveform unet_declip(const nn::UNetModel& model, const signal::Waveform& clipped) {
  const auto spectrogram = signal::stft(clipped, stft_for_unet(model.config()));
  const auto images = signal::extract_images(spectrogram, /*normalize=*/true);
  const auto enhanced = nn::enhance(model, images);
  return signal::reconstruct(enhanced, spectrogram);
}

}  // namespace declip::harness
