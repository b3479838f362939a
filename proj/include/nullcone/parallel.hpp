#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nullcone {

/// Process-wide worker count used by the data-parallel loops. Results never
/// depend on it: work is split into fixed-size chunks and reductions combine
/// chunk partials with a fixed pairwise tree.
void set_worker_count(int workers);
int worker_count();

/// Reads NULLCONE_THREADS (if set and valid) into the worker count.
void init_worker_count_from_env();

inline constexpr std::size_t kChunkSize = 4096;

/// Calls body(begin, end) over [0, n) in chunks of `chunk`.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t chunk = kChunkSize);

/// Sum of partial(begin, end) over fixed chunks of [0, n), combined pairwise.
double deterministic_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial,
                         std::size_t chunk = kChunkSize);

/// Several sums at once: partial(begin, end, out) writes `count` values for its
/// chunk; each slot is combined like deterministic_sum.
std::vector<double> deterministic_sums(std::size_t n, std::size_t count,
                                       const std::function<void(std::size_t, std::size_t, double*)>& partial,
                                       std::size_t chunk = kChunkSize);

/// Max of partial(begin, end) over chunks. NaN partials propagate.
double deterministic_max(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial,
                         std::size_t chunk = kChunkSize);

}  // namespace nullcone
