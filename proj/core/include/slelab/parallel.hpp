#ifndef SLELAB_PARALLEL_HPP
#define SLELAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace slelab {

/// Number of worker threads to use for `requested` (0 = all hardware threads).
std::size_t resolve_threads(std::size_t requested);

/// Runs fn(chunk_index, begin, end) over [0, n) split into n_chunks
/// half-open ranges. The chunk partition depends only on (n, n_chunks),
/// never on the thread count, so per-chunk results can be merged in
/// chunk order to give reductions that are independent of scheduling.
void parallel_chunks(std::size_t n, std::size_t n_chunks, std::size_t threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Convenience: fn(i) for i in [0, n), parallel, no reduction.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace slelab

#endif
