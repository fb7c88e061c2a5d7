// Copyright 2026 The cvdense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cvdense {

/// Bad argument: out-of-range parameter, invalid mode index, malformed input.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Photon budget too small to pay for the requested squeezing (n < sinh^2 r).
class InfeasibleBudget : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Antisqueezing below squeezing (r_plus < r).
class UncertaintyViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bracketing root-finder was handed an interval without a sign change.
class NoSignChange : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

}  // namespace detail
}  // namespace cvdense
