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

#include "declip/neural/trainer.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "declip/error.hpp"
#include "declip/neural/loss.hpp"

namespace declip::nn {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || batch_size == 0 || epochs == 0 || !(epsilon > 0.0) ||
      beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
    throw InvalidArgument("TrainConfig: rates and sizes must be positive, betas in [0, 1)");
  }
}

Tensor4 images_to_tensor(std::span<const signal::LogMagImage* const> images) {
  if (images.empty()) throw InvalidArgument("images_to_tensor: no images");
  const std::size_t side = images.front()->size;
  Tensor4 t({images.size(), 1, side, side});
  for (std::size_t n = 0; n < images.size(); ++n) {
    if (images[n]->size != side || images[n]->pixels.size() != side * side) {
      throw ShapeError("images_to_tensor: mixed image sizes");
    }
    std::copy(images[n]->pixels.begin(), images[n]->pixels.end(), t.item(n).begin());
  }
  return t;
}

Tensor4 images_to_tensor(std::span<const signal::LogMagImage> images) {
  std::vector<const signal::LogMagImage*> ptrs;
  for (const auto& img : images) ptrs.push_back(&img);
  return images_to_tensor(ptrs);
}

Trainer::Trainer(UNetModel& model, const TrainConfig& cfg) : model_(&model), cfg_(cfg) {
  cfg_.validate();
}

double Trainer::step(const Tensor4& inputs, const Tensor4& targets,
                     std::span<const std::size_t> valid_rows) {
  UNetModel::Cache cache;
  const Tensor4 pred = model_->forward(inputs, cache);
  const LossResult loss = mse_loss(pred, targets, valid_rows);
  model_->zero_grad();
  model_->backward(cache, loss.grad);
  adam_step(*model_, cfg_.adam(), ++steps_);
  return loss.loss;
}

TrainResult train(UNetModel& model, std::span<const ImagePair> dataset, const TrainConfig& cfg,
                  const std::function<void(std::size_t, double)>& on_epoch) {
  cfg.validate();
  if (dataset.empty()) throw InvalidArgument("train: empty dataset");
  const std::size_t side = model.config().image_size;
  for (const auto& pair : dataset) {
    if (pair.input.size != side || pair.target.size != side) {
      throw ShapeError("train: image size " + std::to_string(pair.input.size) +
                       " does not match model image_size " + std::to_string(side));
    }
  }

  Trainer trainer(model, cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  TrainResult result;
  std::vector<const signal::LogMagImage*> inputs, targets;
  std::vector<std::size_t> rows;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t first = 0; first < order.size(); first += cfg.batch_size) {
      const std::size_t last = std::min(order.size(), first + cfg.batch_size);
      inputs.clear();
      targets.clear();
      rows.clear();
      for (std::size_t i = first; i < last; ++i) {
        const ImagePair& pair = dataset[order[i]];
        inputs.push_back(&pair.input);
        targets.push_back(&pair.target);
        rows.push_back(pair.target.valid_frames);
      }
      const std::span<const std::size_t> mask =
          cfg.use_loss_mask ? std::span<const std::size_t>(rows) : std::span<const std::size_t>();
      total += trainer.step(images_to_tensor(inputs), images_to_tensor(targets), mask);
      ++batches;
    }
    result.epoch_loss.push_back(total / static_cast<double>(batches));
    if (on_epoch) on_epoch(epoch, result.epoch_loss.back());
  }
  result.steps = trainer.steps_taken();
  return result;
}

std::vector<signal::LogMagImage> enhance(const UNetModel& model,
                                         std::span<const signal::LogMagImage> images) {
  std::vector<signal::LogMagImage> out;
  out.reserve(images.size());
  const std::size_t side = model.config().image_size;
  for (const auto& img : images) {
    if (img.size != side) {
      throw ShapeError("enhance: image size " + std::to_string(img.size) +
                       " does not match model image_size " + std::to_string(side));
    }
    const signal::LogMagImage* one[] = {&img};
    const Tensor4 y = model.forward(images_to_tensor(one));
    signal::LogMagImage e;
    e.size = side;
    e.pixels.assign(y.data().begin(), y.data().end());
    e.normalized = false;
    e.segment_index = img.segment_index;
    e.valid_frames = img.valid_frames;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace declip::nn
