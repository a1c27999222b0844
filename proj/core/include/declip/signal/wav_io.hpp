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

#ifndef DECLIP_SIGNAL_WAV_IO_HPP_
#define DECLIP_SIGNAL_WAV_IO_HPP_

#include <filesystem>

#include "declip/signal/waveform.hpp"

namespace declip::signal {

// 16-bit PCM mono little-endian RIFF/WAVE only. Samples map to int16 as
// round(x * 32768) clamped to [-32768, 32767], and back as v / 32768.
Waveform read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const Waveform& x);

// What a write_wav/read_wav round trip does to the samples.
Waveform quantize_pcm16(const Waveform& x);
double quantize_pcm16(double v);

}  // namespace declip::signal

#endif  // DECLIP_SIGNAL_WAV_IO_HPP_
