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

#ifndef DECLIP_NEURAL_TRAINER_HPP_
#define DECLIP_NEURAL_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "declip/neural/adam.hpp"
#include "declip/neural/tensor.hpp"
#include "declip/neural/unet.hpp"
#include "declip/signal/spectrum_image.hpp"

namespace declip::nn {

struct TrainConfig {
  double learning_rate = 2e-4;
  std::size_t batch_size = 5;
  std::size_t epochs = 50;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  // Exclude padding rows (beyond valid_frames) from the loss.
  bool use_loss_mask = true;

  AdamConfig adam() const { return {learning_rate, beta1, beta2, epsilon}; }
  void validate() const;
};

// (normalized clipped image, unnormalized clean image)
struct ImagePair {
  signal::LogMagImage input;
  signal::LogMagImage target;
};

// Stacks images into an n x 1 x size x size tensor.
Tensor4 images_to_tensor(std::span<const signal::LogMagImage* const> images);
Tensor4 images_to_tensor(std::span<const signal::LogMagImage> images);

// Owns the optimizer step count for one model.
class Trainer {
 public:
  Trainer(UNetModel& model, const TrainConfig& cfg);

  // Forward, MSE, backward and one Adam update. Returns the batch loss
  // measured before the update.
  double step(const Tensor4& inputs, const Tensor4& targets,
              std::span<const std::size_t> valid_rows = {});
  std::size_t steps_taken() const { return steps_; }

 private:
  UNetModel* model_;
  TrainConfig cfg_;
  std::size_t steps_ = 0;
};

struct TrainResult {
  // Mean batch loss of each epoch.
  std::vector<double> epoch_loss;
  std::size_t steps = 0;
};

// Each epoch reshuffles the pairs and walks them in minibatches (the last one
// may be short). Deterministic for a fixed seed.
TrainResult train(UNetModel& model, std::span<const ImagePair> dataset, const TrainConfig& cfg,
                  const std::function<void(std::size_t, double)>& on_epoch = {});

// Runs each image through the model. Outputs are unnormalized (identity
// statistics) and keep the input's segment_index and valid_frames.
std::vector<signal::LogMagImage> enhance(const UNetModel& model,
                                         std::span<const signal::LogMagImage> images);

}  // namespace declip::nn

#endif  // DECLIP_NEURAL_TRAINER_HPP_
