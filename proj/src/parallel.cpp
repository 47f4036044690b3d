#include "retina/parallel.hpp"

#include <atomic>
#include <exception>

namespace retina {

namespace {
unsigned g_max_threads = 0;
}

void set_max_threads(unsigned n) { g_max_threads = n; }

unsigned max_threads() {
    if (g_max_threads > 0) return g_max_threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& fn) {
    if (end <= begin) return;
    const std::size_t count = end - begin;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(max_threads(), count));
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{begin};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= end || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failed.load() && first_error) std::rethrow_exception(first_error);
}

} // namespace retina
