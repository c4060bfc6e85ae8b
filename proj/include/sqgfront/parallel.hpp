#ifndef SQGFRONT_PARALLEL_HPP
#define SQGFRONT_PARALLEL_HPP

#include <functional>
#include <vector>

namespace sqg {

// Global worker count used by all parallel loops. Results never depend on it:
// every reduction in this library runs over fixed-size blocks combined in a
// fixed pairwise tree, so outputs are bit-identical for any thread count.
int num_threads();
void set_num_threads(int n);

// Runs task(0..n-1); tasks must be independent (disjoint writes).
void parallel_for(int n, const std::function<void(int)>& task);

// Accumulates `n_items` vector-valued contributions of length `len`.
// Items are grouped into blocks of `block_size` (serial, in index order
// inside a block); block partials are then merged by a pairwise tree over
// the block index. The summation order is a function of (n_items,
// block_size) only.
std::vector<double> blocked_vector_sum(
    int n_items, int block_size, std::size_t len,
    const std::function<void(int item, std::vector<double>& acc)>& accumulate);

}  // namespace sqg

#endif
