#pragma once

#include <cstddef>
#include <functional>

namespace tigranet {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers write results into per-index slots and
/// reduce them afterwards in index order, so results do not depend on the
/// worker count.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace tigranet
