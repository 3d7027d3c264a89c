// Copyright 2026 The permanneal Authors
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

#include <cstddef>
#include <functional>

namespace permanneal {

/// Name of the environment variable that sets the default worker count.
inline constexpr const char* kWorkersEnv = "PERMANNEAL_WORKERS";

/// Worker count: $PERMANNEAL_WORKERS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t default_workers();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Items are
/// claimed dynamically, so callers must write results by index; the first
/// exception thrown by any item is rethrown after all threads join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t workers = default_workers());

}  // namespace permanneal
