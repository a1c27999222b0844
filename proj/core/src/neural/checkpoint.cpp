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

#include "declip/neural/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace declip::nn {
namespace {

constexpr char kMagic[8] = {'D', 'C', 'L', 'P', 'U', 'N', 'E', 'T'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) bytes_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int s = 0; s < 64; s += 8) bytes_.push_back(static_cast<std::uint8_t>(bits >> s));
  }
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int s = 0; s < 4; ++s) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * s);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int s = 0; s < 8; ++s) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * s);
    return std::bit_cast<double>(v);
  }
  const std::uint8_t* take(std::size_t n) {
    need(n);
    const std::uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }
  std::size_t remaining() const { return size_ - pos_; }

 private:
  void need(std::size_t n) const {
    if (size_ - pos_ < n) throw FormatError("checkpoint: truncated file");
  }
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::uint32_t checksum(const std::uint8_t* data, std::size_t n) {
  return static_cast<std::uint32_t>(crc32(0L, data, static_cast<uInt>(n)));
}

}  // namespace

void save_model(const UNetModel& model, const std::filesystem::path& path) {
  Writer w;
  const UNetConfig& cfg = model.config();
  w.raw(kMagic, sizeof kMagic);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(cfg.depth));
  w.u32(static_cast<std::uint32_t>(cfg.base_filters));
  w.u32(static_cast<std::uint32_t>(cfg.image_size));
  w.u32(static_cast<std::uint32_t>(cfg.final_activation));
  w.u32(static_cast<std::uint32_t>(model.layers().size()));
  for (const auto& layer : model.layers()) {
    w.u32(static_cast<std::uint32_t>(layer.in_channels()));
    w.u32(static_cast<std::uint32_t>(layer.out_channels()));
    w.u32(static_cast<std::uint32_t>(layer.kernel()));
    for (double v : layer.weight().value) w.f64(v);
    for (double v : layer.bias().value) w.f64(v);
  }
  w.u32(checksum(w.bytes().data(), w.bytes().size()));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write checkpoint " + path.string());
  f.write(reinterpret_cast<const char*>(w.bytes().data()),
          static_cast<std::streamsize>(w.bytes().size()));
  if (!f) throw IoError("write failed for checkpoint " + path.string());
}

UNetModel load_model(const std::filesystem::path& path, const std::optional<UNetConfig>& expected) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof kMagic + 4 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("checkpoint: bad magic in " + path.string());
  }

  Reader r(bytes.data(), bytes.size());
  r.take(sizeof kMagic);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported version " + std::to_string(version));
  }
  UNetConfig cfg;
  cfg.depth = r.u32();
  cfg.base_filters = r.u32();
  cfg.image_size = r.u32();
  cfg.final_activation = static_cast<FinalActivation>(r.u32());
  if (expected && !(*expected == cfg)) {
    throw ConfigMismatch("checkpoint config (depth " + std::to_string(cfg.depth) + ", filters " +
                         std::to_string(cfg.base_filters) + ", size " +
                         std::to_string(cfg.image_size) + ") does not match the expected one");
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }

  UNetModel model(cfg, 0);
  const std::uint32_t layer_count = r.u32();
  if (layer_count != model.layers().size()) {
    throw FormatError("checkpoint: layer count does not match the stored config");
  }
  for (auto& layer : model.layers()) {
    const std::uint32_t in = r.u32(), out = r.u32(), k = r.u32();
    if (in != layer.in_channels() || out != layer.out_channels() || k != layer.kernel()) {
      throw FormatError("checkpoint: layer geometry does not match the stored config");
    }
    for (double& v : layer.weight().value) v = r.f64();
    for (double& v : layer.bias().value) v = r.f64();
  }
  const std::size_t body = bytes.size() - r.remaining();
  const std::uint32_t stored = r.u32();
  if (stored != checksum(bytes.data(), body)) throw FormatError("checkpoint: checksum mismatch");
  if (r.remaining() != 0) throw FormatError("checkpoint: trailing bytes");
  return model;
}

}  // namespace declip::nn
