#include "gfl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace gfl {

namespace {

std::atomic<int> g_override{-1};

}  // namespace

int worker_count() {
    int n = g_override.load();
    if (n < 0) {
        n = 0;
        if (const char* env = std::getenv("GF_LATTICE_THREADS")) {
            try {
                n = std::max(0, std::stoi(env));
            } catch (const std::exception&) {
                n = 0;
            }
        }
    }
    if (n == 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return n;
}

void set_worker_count(int n) { g_override.store(n > 0 ? n : -1); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::mutex mu;
    std::size_t failed_index = count;
    std::exception_ptr failure;

    auto run_chunk = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_chunk, begin, end);
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace gfl
