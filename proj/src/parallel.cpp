#include "sqgfront/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace sqg {

namespace {
int g_threads = []() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}();
}  // namespace

int num_threads() { return g_threads; }

void set_num_threads(int n) { g_threads = std::max(1, n); }

void parallel_for(int n, const std::function<void(int)>& task) {
  if (n <= 0) return;
  int workers = std::min(g_threads, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  auto drain = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) break;
      task(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& t : pool) t.join();
}

std::vector<double> blocked_vector_sum(
    int n_items, int block_size, std::size_t len,
    const std::function<void(int, std::vector<double>&)>& accumulate) {
  if (n_items <= 0) return std::vector<double>(len, 0.0);
  int n_blocks = (n_items + block_size - 1) / block_size;
  std::vector<std::vector<double>> partial(n_blocks);
  parallel_for(n_blocks, [&](int b) {
    std::vector<double> acc(len, 0.0);
    int lo = b * block_size;
    int hi = std::min(n_items, lo + block_size);
    for (int i = lo; i < hi; ++i) accumulate(i, acc);
    partial[b] = std::move(acc);
  });
  // Pairwise tree merge, order fixed by block index.
  for (int stride = 1; stride < n_blocks; stride *= 2) {
    for (int b = 0; b + stride < n_blocks; b += 2 * stride) {
      auto& dst = partial[b];
      const auto& src = partial[b + stride];
      for (std::size_t j = 0; j < len; ++j) dst[j] += src[j];
    }
  }
  return std::move(partial[0]);
}

}  // namespace sqg
