#ifndef QNR_PARALLEL_HPP
#define QNR_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace qnr::parallel {

/// Caps the worker count used by for_each_index; 0 restores the hardware default.
void set_max_threads(std::size_t count) noexcept;
std::size_t max_threads() noexcept;

/// Runs fn(0..count-1), possibly on several threads. Calls made from inside
/// a running region execute serially on the calling thread. Results must be
/// written to per-index slots so the outcome is independent of scheduling.
/// If any call throws, the exception of the lowest failing index is rethrown.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace qnr::parallel

#endif  // QNR_PARALLEL_HPP
