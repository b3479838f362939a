#include "nullcone/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace nullcone {

namespace {

std::atomic<int> g_workers{1};

void run_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& chunk_body) {
  const auto workers = static_cast<std::size_t>(std::max(1, g_workers.load()));
  if (workers == 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) chunk_body(c);
    return;
  }
  const std::size_t used = std::min(workers, n_chunks);
  std::vector<std::jthread> pool;
  pool.reserve(used);
  for (std::size_t w = 0; w < used; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < n_chunks; c += used) chunk_body(c);
    });
  }
}

double pairwise_combine(std::vector<double> values, bool take_max) {
  if (values.empty()) return 0.0;
  while (values.size() > 1) {
    std::vector<double> next((values.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const std::size_t a = 2 * i;
      const std::size_t b = a + 1;
      if (b >= values.size()) {
        next[i] = values[a];
      } else if (take_max) {
        if (std::isnan(values[a]) || std::isnan(values[b])) {
          next[i] = std::nan("");
        } else {
          next[i] = std::max(values[a], values[b]);
        }
      } else {
        next[i] = values[a] + values[b];
      }
    }
    values = std::move(next);
  }
  return values.front();
}

}  // namespace

void set_worker_count(int workers) { g_workers.store(std::max(1, workers)); }

int worker_count() { return g_workers.load(); }

void init_worker_count_from_env() {
  if (const char* env = std::getenv("NULLCONE_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value >= 1) set_worker_count(value);
    } catch (const std::exception&) {
      // ignored: invalid values leave the current count untouched
    }
  }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t chunk) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  run_chunks(n_chunks, [&](std::size_t c) { body(c * chunk, std::min(n, (c + 1) * chunk)); });
}

double deterministic_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial,
                         std::size_t chunk) {
  if (n == 0) return 0.0;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<double> partials(n_chunks, 0.0);
  run_chunks(n_chunks, [&](std::size_t c) { partials[c] = partial(c * chunk, std::min(n, (c + 1) * chunk)); });
  return pairwise_combine(std::move(partials), false);
}

std::vector<double> deterministic_sums(std::size_t n, std::size_t count,
                                       const std::function<void(std::size_t, std::size_t, double*)>& partial,
                                       std::size_t chunk) {
  std::vector<double> out(count, 0.0);
  if (n == 0 || count == 0) return out;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<double> partials(n_chunks * count, 0.0);
  run_chunks(n_chunks, [&](std::size_t c) { partial(c * chunk, std::min(n, (c + 1) * chunk), &partials[c * count]); });
  std::vector<double> column(n_chunks);
  for (std::size_t q = 0; q < count; ++q) {
    for (std::size_t c = 0; c < n_chunks; ++c) column[c] = partials[c * count + q];
    out[q] = pairwise_combine(column, false);
  }
  return out;
}

double deterministic_max(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial,
                         std::size_t chunk) {
  if (n == 0) return 0.0;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<double> partials(n_chunks, 0.0);
  run_chunks(n_chunks, [&](std::size_t c) { partials[c] = partial(c * chunk, std::min(n, (c + 1) * chunk)); });
  return pairwise_combine(std::move(partials), true);
}

}  // namespace nullcone
