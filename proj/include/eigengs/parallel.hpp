// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace eigengs {

/// Worker count: EIGENGS_THREADS if set and positive, else hardware
/// concurrency. Read once.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on the shared pool and waits. Calls from
/// inside a worker run inline, so nesting never oversubscribes. Results must
/// not depend on which thread runs which index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace eigengs
