#include <grasp/parallel.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace grasp {

std::size_t worker_count(std::size_t requested)
{
    std::size_t n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GRASP_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap > 0) {
                n = std::min(n, static_cast<std::size_t>(cap));
            }
        } catch (const std::exception&) {
            // ignore malformed values
        }
    }
    return std::max<std::size_t>(n, 1);
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body)
{
    workers = std::min(std::max<std::size_t>(workers, 1), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace grasp
