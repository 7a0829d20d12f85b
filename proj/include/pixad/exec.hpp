#pragma once

#include <cstddef>
#include <functional>

#include "pixad/common.hpp"
#include "pixad/simd.hpp"

namespace pixad {

// Analytic live-set accounting. Kernels declare materializations as they make
// them; the tracker keeps the running live total and its maximum. No allocator
// hooks: the declared set is the contract.
class MemTracker {
public:
    void on_alloc(size_t bytes) {
        live_ += bytes;
        if (live_ > peak_) peak_ = live_;
    }
    void on_free(size_t bytes) { live_ -= bytes; }
    size_t live() const { return live_; }
    size_t peak() const { return peak_; }
    void reset() { live_ = peak_ = 0; }

private:
    size_t live_ = 0;
    size_t peak_ = 0;
};

struct ExecOptions {
    int threads = 1;        // worker count for row-parallel kernels
    Isa isa = Isa::Auto;    // kernel variant; values are ISA-independent
    MemTracker* tracker = nullptr;

    void track_alloc(size_t bytes) const {
        if (tracker) tracker->on_alloc(bytes);
    }
    void track_free(size_t bytes) const {
        if (tracker) tracker->on_free(bytes);
    }
};

// Deterministic contiguous partition of [0, count) over `threads` workers.
// Each index is owned by exactly one worker, so per-output reduction order --
// and therefore every output bit -- is independent of the thread count.
void parallel_for(i64 count, int threads, const std::function<void(i64, i64)>& fn);

}  // namespace pixad
