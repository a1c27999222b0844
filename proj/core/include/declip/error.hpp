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

#ifndef DECLIP_ERROR_HPP_
#define DECLIP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace declip {

// Base of everything the library throws on contract violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameter or configuration (non-positive theta, invalid StftConfig...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Operand shapes or lengths disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported file content.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// A requested SDR cannot be reached by any clipping threshold.
class UnattainableTarget : public Error {
 public:
  using Error::Error;
};

// Not enough usable material for a metric (silent input, too short, ...).
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace declip

#endif  // DECLIP_ERROR_HPP_
