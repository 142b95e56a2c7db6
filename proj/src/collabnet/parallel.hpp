// Copyright 2026 The collabnet Authors
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

namespace collabnet {

/// Process-wide worker count used by every parallel loop. Defaults to 1.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [begin, end) across thread_count() workers.
///
/// Work is handed out in index order; body must only write state owned by
/// index i, so results never depend on the worker count. The first exception
/// thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

}  // namespace collabnet
