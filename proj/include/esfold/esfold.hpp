/*
 * Copyright 2026 The esfold Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "esfold/aes_fold.hpp"
#include "esfold/core.hpp"
#include "esfold/document.hpp"
#include "esfold/dot.hpp"
#include "esfold/fes_fold.hpp"
#include "esfold/folding.hpp"
#include "esfold/generate.hpp"
#include "esfold/hp_bisim.hpp"
#include "esfold/isomorphism.hpp"
#include "esfold/reduce.hpp"
#include "esfold/semantics.hpp"
#include "esfold/structures.hpp"
