/*
 * Copyright 2026 The mxpbf Authors
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

#include <cstdint>
#include <random>

namespace mxpbf {

/// Engine used for every random draw. std::mt19937_64 is bit-specified by the
/// standard; the distributions on top of it come from Boost.Random so the
/// streams are identical across standard libraries.
using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Independent substream keyed by (master seed, stream index). The state of
/// stream k never depends on how many draws other streams made.
Engine make_stream(std::uint64_t seed, std::uint64_t stream);

/// Named purposes, so that e.g. CV splits and replicate data never share a stream.
enum class StreamDomain : std::uint64_t {
  replicate = 0x5265706c69636174ULL,
  cv_split = 0x435653706c697473ULL,
  sample = 0x53616d706c65ULL,
};

Engine make_stream(std::uint64_t seed, StreamDomain domain, std::uint64_t index);

}  // namespace mxpbf
