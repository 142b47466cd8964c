// Copyright 2026 The randstruct Authors. All Rights Reserved.
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


// Umbrella header.

#pragma once

#include "randstruct/tolerance.hpp"
#include "randstruct/fourier.hpp"
#include "randstruct/residue_set.hpp"
#include "randstruct/bohr.hpp"
#include "randstruct/random_model.hpp"
#include "randstruct/structures.hpp"
#include "randstruct/decomposition.hpp"
#include "randstruct/increment.hpp"
#include "randstruct/experiment.hpp"
#include "randstruct/report.hpp"
