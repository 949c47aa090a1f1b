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

#include "mxpbf/rng.hpp"

#include <array>

namespace mxpbf {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Engine make_stream(std::uint64_t seed, std::uint64_t stream) {
  // Four decorrelated words feed seed_seq, which spreads them over the whole MT state.
  const std::uint64_t a = mix64(seed);
  const std::uint64_t b = mix64(a ^ mix64(stream + 0x632be59bd9b4e019ULL));
  std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

Engine make_stream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
  return make_stream(seed ^ static_cast<std::uint64_t>(domain), index);
}

}  // namespace mxpbf
