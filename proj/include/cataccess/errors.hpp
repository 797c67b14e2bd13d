// Copyright 2026 The cataccess developers
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

#pragma once

#include <stdexcept>
#include <string>

namespace cataccess {

/// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A morphism was used at the wrong type (source/target or shape mismatch).
struct type_error : error {
  using error::error;
};

/// Invalid argument values (malformed carriers, bad dimensions, ...).
struct value_error : error {
  using error::error;
};

/// A chain colimit could not be formed (e.g. no stabilisation level).
struct colimit_error : error {
  using error::error;
};

/// No mediating morphism exists for the given legs.
struct mediate_error : error {
  using error::error;
};

/// The channel truncation ran out of fresh pair slots.
struct exhausted_error : error {
  using error::error;
};

}  // namespace cataccess
