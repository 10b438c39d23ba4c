#include "liegan/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace liegan {

int worker_cap() {
    static const int cap = [] {
        if (const char* env = std::getenv("LIEGAN_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? static_cast<int>(hw) : 1;
    }();
    return cap;
}

void parallel_rows(int rows, int min_rows_per_worker, const std::function<void(int, int)>& fn) {
    const int workers = std::min(worker_cap(), std::max(1, rows / std::max(1, min_rows_per_worker)));
    if (workers <= 1) {
        fn(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const int chunk = (rows + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int r0 = w * chunk;
        const int r1 = std::min(rows, r0 + chunk);
        if (r0 >= r1) break;
        pool.emplace_back(fn, r0, r1);
    }
    for (std::thread& t : pool) t.join();
}

} // namespace liegan
