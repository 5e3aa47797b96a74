#pragma once

#include <cstdint>

namespace btlab {

/// Worker count resolution: explicit request > BTL_THREADS env var >
/// hardware concurrency; always at least 1.
int worker_count(int requested = 0);

}  // namespace btlab
