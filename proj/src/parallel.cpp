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

#include "mxpbf/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace mxpbf {

namespace {
int default_threads = omp_get_max_threads();
}

void set_num_threads(int n) { omp_set_num_threads(n > 0 ? n : default_threads); }

int num_threads() { return omp_get_max_threads(); }

int configure_threads_from_env() {
  if (const char* env = std::getenv(kThreadsEnvVar)) {
    try {
      const int n = std::stoi(env);
      if (n > 0) set_num_threads(n);
    } catch (const std::exception&) {
      // ignored: malformed value keeps the OpenMP default
    }
  }
  return num_threads();
}

}  // namespace mxpbf
