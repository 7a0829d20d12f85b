#pragma once

#include <iosfwd>
#include <vector>

#include "pixad/attention.hpp"

namespace pixad {

enum class Precision { F32, F64 };

struct BenchRecord {
    std::string kernel;
    i64 b = 0, c = 0, h = 0, w = 0, k = 0;
    int reps = 0;
    u64 wall_ns_median = 0;
    u64 peak_bytes = 0;
    u64 flops_est = 0;
};

inline constexpr const char* kCsvHeader =
    "kernel,b,c,h,w,k,reps,wall_ns_median,peak_bytes,flops_est";

struct BenchConfig {
    std::vector<i64> sizes = {16, 32, 64, 128};  // square side lengths
    i64 channels = 16;
    i64 k = 3;
    std::vector<KernelKind> kernels = {KernelKind::Pam, KernelKind::Pga,
                                       KernelKind::Halo, KernelKind::Global};
    int reps = 5;
    u64 seed = 42;
    Precision precision = Precision::F32;
    int threads = 1;
    Isa isa = Isa::Auto;
    bool allow_large = false;
    i64 pga_cap = 128 * 128;  // pga skipped at n >= cap unless allow_large
    i64 halo_block = 8;
    i64 halo_halo = 1;
};

// One warm-up plus reps timed runs per (kernel, size); median wall time.
// Skipped combinations (pga over the cap) are reported through `notes`.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg,
                                   std::vector<std::string>* notes = nullptr);

void write_csv(const std::vector<BenchRecord>& records, std::ostream& os);
// Throws std::invalid_argument naming the offending line on malformed input.
std::vector<BenchRecord> read_csv(std::istream& is);

// Least-squares slope of log(wall_ns_median) vs log(n) for one kernel's rows.
double loglog_slope(const std::vector<BenchRecord>& records, const std::string& kernel);

}  // namespace pixad
