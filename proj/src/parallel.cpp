#include "jolo/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace jolo {

void parallel_for(int count, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(count));
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace jolo
