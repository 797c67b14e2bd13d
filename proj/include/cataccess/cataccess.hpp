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

// Core library
#include "cataccess/core.hpp"
#include "cataccess/errors.hpp"
#include "cataccess/rng.hpp"

// The two concrete categories
#include "cataccess/fdhilb.hpp"
#include "cataccess/rel.hpp"

// Ind-completion and the protocol on top of it
#include "cataccess/accessible.hpp"
#include "cataccess/qkd.hpp"

// Wire formats
#include "cataccess/serialize.hpp"
