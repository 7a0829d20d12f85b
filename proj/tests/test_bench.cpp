#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pixad/bench.hpp"

using namespace pixad;

TEST_CASE("mem tracker keeps a running live set and its peak") {
    MemTracker t;
    t.on_alloc(100);
    t.on_alloc(50);
    CHECK(t.live() == 150);
    CHECK(t.peak() == 150);
    t.on_free(100);
    CHECK(t.live() == 50);
    CHECK(t.peak() == 150);
    t.on_alloc(60);
    CHECK(t.peak() == 150);  // 110 live never exceeds the old peak
    t.on_alloc(200);
    CHECK(t.peak() == 310);
    t.reset();
    CHECK(t.live() == 0);
    CHECK(t.peak() == 0);
}

TEST_CASE("csv writes a fixed header and round-trips records") {
    std::vector<BenchRecord> recs(2);
    recs[0] = {"pam", 1, 16, 64, 64, 3, 5, 123456789ull, 987654ull, 42ull};
    recs[1] = {"global", 2, 8, 32, 32, 1, 7, 1ull, 2ull, 3ull};
    std::stringstream ss;
    write_csv(recs, ss);
    const std::string text = ss.str();
    CHECK(text.substr(0, text.find('\n')) == kCsvHeader);

    std::stringstream in(text);
    const std::vector<BenchRecord> back = read_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].kernel == "pam");
    CHECK(back[0].wall_ns_median == 123456789ull);
    CHECK(back[0].peak_bytes == 987654ull);
    CHECK(back[1].kernel == "global");
    CHECK(back[1].b == 2);
    CHECK(back[1].reps == 7);
    CHECK(back[1].flops_est == 3ull);
}

TEST_CASE("csv rejects malformed input with a line number") {
    auto expect_throw = [](const std::string& text, const char* needle) {
        std::stringstream in(text);
        try {
            read_csv(in);
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_throw("bogus header\n", "csv line 1");
    expect_throw(std::string(kCsvHeader) + "\npam,1,2,3\n", "csv line 2");
    expect_throw(std::string(kCsvHeader) + "\npam,1,16,8,8,3,5,x,1,1\n", "csv line 2");
    std::stringstream ok(std::string(kCsvHeader) + "\n");
    CHECK(read_csv(ok).empty());
}

TEST_CASE("run_bench: tiny pam sweep produces stable accounting") {
    BenchConfig cfg;
    cfg.sizes = {8};
    cfg.kernels = {KernelKind::Pam};
    cfg.reps = 3;
    const std::vector<BenchRecord> a = run_bench(cfg);
    const std::vector<BenchRecord> b = run_bench(cfg);
    REQUIRE(a.size() == 1);
    CHECK(a[0].kernel == "pam");
    CHECK(a[0].h == 8);
    CHECK(a[0].w == 8);
    CHECK(a[0].reps == 3);
    CHECK(a[0].wall_ns_median >= 1);
    // Wall time jitters; the analytic accounting and flops must not.
    CHECK(a[0].peak_bytes == b[0].peak_bytes);
    CHECK(a[0].flops_est == b[0].flops_est);
    CHECK(a[0].flops_est == flops_estimate(KernelKind::Pam, 1, 16, 8, 8, WindowConfig(3)));
    // Peak covers at least the input and output maps.
    CHECK(a[0].peak_bytes >= 2ull * 16 * 8 * 8 * sizeof(float));
}

TEST_CASE("run_bench: peak grows with resolution") {
    BenchConfig cfg;
    cfg.sizes = {8, 16};
    cfg.kernels = {KernelKind::Pam, KernelKind::Halo};
    cfg.reps = 3;
    const std::vector<BenchRecord> recs = run_bench(cfg);
    REQUIRE(recs.size() == 4);  // kernel-major, size-minor
    CHECK(recs[0].kernel == "pam");
    CHECK(recs[1].kernel == "pam");
    CHECK(recs[2].kernel == "halo");
    CHECK(recs[0].peak_bytes < recs[1].peak_bytes);
    CHECK(recs[2].peak_bytes < recs[3].peak_bytes);
}

TEST_CASE("run_bench: pga honours the size cap") {
    BenchConfig cfg;
    cfg.sizes = {12};
    cfg.kernels = {KernelKind::Pga};
    cfg.reps = 3;
    cfg.pga_cap = 144;  // 12 * 12 hits the cap exactly
    std::vector<std::string> notes;
    const std::vector<BenchRecord> skipped = run_bench(cfg, &notes);
    CHECK(skipped.empty());
    REQUIRE(notes.size() == 1);
    CHECK(notes[0] ==
          "pga skipped at 12x12: dense n^2 over the size cap "
          "(pass --allow-large to run)");

    cfg.allow_large = true;
    notes.clear();
    const std::vector<BenchRecord> ran = run_bench(cfg, &notes);
    CHECK(notes.empty());
    REQUIRE(ran.size() == 1);
    CHECK(ran[0].kernel == "pga");
}

TEST_CASE("run_bench: f64 doubles the accounted footprint") {
    BenchConfig cfg;
    cfg.sizes = {8};
    cfg.kernels = {KernelKind::Global};
    cfg.reps = 3;
    const u64 peak32 = run_bench(cfg)[0].peak_bytes;
    cfg.precision = Precision::F64;
    const u64 peak64 = run_bench(cfg)[0].peak_bytes;
    CHECK(peak64 == 2 * peak32);
}

TEST_CASE("run_bench validates its config") {
    BenchConfig cfg;
    cfg.reps = 2;
    CHECK_THROWS(run_bench(cfg));
    cfg.reps = 3;
    cfg.sizes = {};
    CHECK_THROWS(run_bench(cfg));
    cfg.sizes = {0};
    CHECK_THROWS(run_bench(cfg));
    cfg.sizes = {8};
    cfg.kernels = {};
    CHECK_THROWS(run_bench(cfg));
}

TEST_CASE("loglog_slope recovers synthetic power laws") {
    std::vector<BenchRecord> recs;
    for (i64 side : {8, 16, 32, 64}) {
        BenchRecord r;
        r.kernel = "pam";
        r.h = r.w = side;
        const double n = static_cast<double>(side) * side;
        r.wall_ns_median = static_cast<u64>(50.0 * n);  // slope 1
        recs.push_back(r);
        r.kernel = "global";
        r.wall_ns_median = static_cast<u64>(0.25 * n * n);  // slope 2
        recs.push_back(r);
    }
    CHECK(loglog_slope(recs, "pam") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(loglog_slope(recs, "global") == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS(loglog_slope(recs, "halo"));  // no rows
    std::vector<BenchRecord> one(recs.begin(), recs.begin() + 1);
    CHECK_THROWS(loglog_slope(one, "pam"));  // needs two sizes
}
