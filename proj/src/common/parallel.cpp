#include "gie/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace gie {

Parallelism Parallelism::from_env(unsigned fallback)
{
    Parallelism p{fallback};
    if (const char* env = std::getenv("GIE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1 && v <= 1024)
                p.threads = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            // keep fallback
        }
    }
    return p;
}

void parallel_for(std::size_t n, const Parallelism& policy,
                  const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min<std::size_t>(std::max(1u, policy.threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

double deterministic_sum(std::size_t n, const Parallelism& policy,
                         const std::function<double(std::size_t)>& term, std::size_t block)
{
    if (n == 0)
        return 0.0;
    block = std::max<std::size_t>(block, 1);
    const std::size_t nblocks = (n + block - 1) / block;
    std::vector<double> partial(nblocks, 0.0);
    parallel_for(nblocks, policy, [&](std::size_t b) {
        const std::size_t lo = b * block;
        const std::size_t hi = std::min(n, lo + block);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            s += term(i);
        partial[b] = s;
    });
    double total = 0.0;
    for (double p : partial)
        total += p;
    return total;
}

} // namespace gie
