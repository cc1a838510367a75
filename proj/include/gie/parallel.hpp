#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gie {

/// Worker-count policy handed down from the runner. Modules never pick a
/// thread count on their own.
struct Parallelism {
    unsigned threads = 1;

    /// Reads GIE_THREADS, falling back to `fallback` when unset or invalid.
    static Parallelism from_env(unsigned fallback = 1);
};

/// Runs fn(i) for i in [0, n) over `policy.threads` workers. Each index is
/// visited exactly once; fn must only write to storage owned by index i.
void parallel_for(std::size_t n, const Parallelism& policy,
                  const std::function<void(std::size_t)>& fn);

/// Sum of term(i) for i in [0, n) whose bits do not depend on the thread
/// count: terms are summed sequentially inside fixed-size blocks and the
/// block partials are then summed in block order.
double deterministic_sum(std::size_t n, const Parallelism& policy,
                         const std::function<double(std::size_t)>& term,
                         std::size_t block = 4096);

} // namespace gie
