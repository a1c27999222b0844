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

#ifndef DECLIP_PARALLEL_HPP_
#define DECLIP_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace declip {

// Number of worker threads used by parallel_for. Defaults to
// hardware_concurrency; DECLIP_THREADS in the environment overrides it.
std::size_t worker_count();

// Runs body(i) for i in [0, n). Iterations must be independent and write only
// to their own output slots; results are then independent of scheduling.
// The first exception thrown by any iteration is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace declip

#endif  // DECLIP_PARALLEL_HPP_
