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

namespace mxpbf {

/// Environment variable consulted for the default worker count.
inline constexpr const char* kThreadsEnvVar = "MXPBF_THREADS";

/// Caps OpenMP workers for subsequent parallel regions (n <= 0 restores the default).
void set_num_threads(int n);
int num_threads();

/// Applies MXPBF_THREADS if set and valid; returns the resulting worker count.
int configure_threads_from_env();

}  // namespace mxpbf
