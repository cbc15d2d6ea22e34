// Copyright 2026 The mpsrnn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MPSRNN_ERRORS_HPP
#define MPSRNN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mpsrnn {

/// Invalid user-provided configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Numerical failure: degenerate state, non-convergence, non-finite
/// parameters (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Both spin branches of a memory update vanished; the conditional
/// probability is undefined. Carries the site (and sample, when batched)
/// where it happened.
class DegenerateStateError : public NumericalError {
 public:
  DegenerateStateError(const std::string &msg, int site, long sample = -1)
      : NumericalError(msg + " (site " + std::to_string(site) +
                       (sample >= 0 ? ", sample " + std::to_string(sample) : "") +
                       ")"),
        site_(site),
        sample_(sample) {}

  int site() const { return site_; }
  long sample() const { return sample_; }

 private:
  int site_;
  long sample_;
};

/// Inconsistent array dimensions.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string &msg) : std::invalid_argument(msg) {}
};

/// File-system level I/O failure (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Malformed checkpoint / tensor container contents (CLI exit code 4).
class FormatError : public IoError {
 public:
  enum class Code { BadMagic, BadVersion, BadShape, Truncated, MissingEntry, BadValue };

  FormatError(Code code, const std::string &msg) : IoError(msg), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

}  // namespace mpsrnn

#endif  // MPSRNN_ERRORS_HPP
