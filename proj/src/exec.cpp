#include "pixad/exec.hpp"

#include <thread>
#include <vector>

namespace pixad {

void parallel_for(i64 count, int threads, const std::function<void(i64, i64)>& fn) {
    if (count <= 0) return;
    if (threads <= 1 || count == 1) {
        fn(0, count);
        return;
    }
    const i64 workers = std::min<i64>(threads, count);
    const i64 chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (i64 t = 0; t < workers; ++t) {
        const i64 begin = t * chunk;
        const i64 end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace pixad
