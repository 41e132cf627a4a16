#include "asymlink/parallel.hpp"

#include <exception>
#include <mutex>
#include <stdexcept>

namespace asymlink {

namespace {
int g_workers = 1;
}

int worker_count() { return g_workers; }

void set_worker_count(int w) { g_workers = w < 1 ? 1 : w; }

void parallel_blocks(int nblocks, const std::function<void(int)>& fn) {
    const int workers = std::min(g_workers, nblocks);
    if (workers <= 1) {
        for (int b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errs(nblocks);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int b = next.fetch_add(1);
                if (b >= nblocks) return;
                try {
                    fn(b);
                } catch (...) {
                    errs[b] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

double pairwise_sum(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    while (xs.size() > 1) {
        std::vector<double> next((xs.size() + 1) / 2, 0.0);
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) next[i / 2] = xs[i] + xs[i + 1];
        if (xs.size() % 2) next.back() = xs.back();
        xs = std::move(next);
    }
    return xs[0];
}

}  // namespace asymlink
