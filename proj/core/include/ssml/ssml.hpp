// Copyright 2026 The ssml Authors
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

#ifndef SSML_SSML_HPP
#define SSML_SSML_HPP

#include "ssml/config_file.hpp"
#include "ssml/experiment.hpp"
#include "ssml/learner.hpp"
#include "ssml/noise.hpp"
#include "ssml/qubit.hpp"
#include "ssml/random.hpp"
#include "ssml/serialize.hpp"
#include "ssml/waveplate.hpp"

#endif // SSML_SSML_HPP
