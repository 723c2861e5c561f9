#include "talbot/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace talbot {

unsigned thread_count() {
    if (const char* env = std::getenv("TALBOT_THREADS")) {
        try {
            long v = std::stol(env);
            if (v < 1) v = 1;
            if (v > 256) v = 256;
            return static_cast<unsigned>(v);
        } catch (const std::logic_error&) {
            // fall through to hardware default
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([=, &fn] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace talbot
