// Copyright 2026 The MemNet Authors.
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

#ifndef MEMNET_SYNTH_HPP_
#define MEMNET_SYNTH_HPP_

#include <cstdint>

#include "memnet/image.hpp"

namespace memnet {

// Deterministic piecewise-smooth test image: a low-frequency background,
// overlapping flat ellipses and rectangles (sharp edges) and a few oriented
// gratings (texture). Pixels stay inside [0.02, 0.98].
GrayImage synth_image(int height, int width, std::uint64_t seed);

}  // namespace memnet

#endif  // MEMNET_SYNTH_HPP_
