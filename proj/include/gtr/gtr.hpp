// Copyright 2026 The GTR Model Authors
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

#include "gtr/distributions.hpp"
#include "gtr/error.hpp"
#include "gtr/forward.hpp"
#include "gtr/geometry.hpp"
#include "gtr/inverse.hpp"
#include "gtr/population.hpp"
#include "gtr/quantum_tests.hpp"
#include "gtr/scalar.hpp"
#include "gtr/sequence.hpp"
#include "gtr/simulate.hpp"
