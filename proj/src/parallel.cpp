#include "qnr/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qnr::parallel {

namespace {

std::atomic<std::size_t> g_max_threads{0};
thread_local bool t_in_region = false;

struct RegionGuard {
    RegionGuard() { t_in_region = true; }
    ~RegionGuard() { t_in_region = false; }
};

}  // namespace

void set_max_threads(std::size_t count) noexcept { g_max_threads.store(count); }

std::size_t max_threads() noexcept {
    const std::size_t cap = g_max_threads.load();
    if (cap != 0) return cap;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(max_threads(), count);
    if (t_in_region || workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = count;
    std::exception_ptr error;

    auto worker = [&] {
        RegionGuard guard;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace qnr::parallel
