#include "pixad/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "pixad/pixel_graph.hpp"

namespace pixad {

namespace {

u64 median_ns(std::vector<u64> times) {
    std::sort(times.begin(), times.end());
    const size_t n = times.size();
    const u64 m = n % 2 ? times[n / 2] : (times[n / 2 - 1] + times[n / 2]) / 2;
    return m > 0 ? m : 1;
}

template <typename T>
BenchRecord bench_one(KernelKind kind, i64 side, const BenchConfig& cfg) {
    const i64 b = 1, c = cfg.channels, h = side, w = side, n = h * w;
    const WindowConfig wc{cfg.k};
    const size_t es = sizeof(T);
    FeatureMapT<T> f = random_map<T>(cfg.seed, b, c, h, w);
    PamWeightsT<T> wts = PamWeightsT<T>::random(cfg.seed + 1, c);

    MemTracker tracker;
    ExecOptions opts;
    opts.threads = cfg.threads;
    opts.isa = cfg.isa;
    opts.tracker = &tracker;

    PgaGraph graph;
    size_t graph_bytes = 0;
    if (kind == KernelKind::Pga) {
        graph = build_pixel_graph(h, w, wc);
        graph_bytes = graph.dense_mask.size() +
                      graph.neighbors.size() * sizeof(std::int32_t);
    }

    auto run = [&]() {
        switch (kind) {
            case KernelKind::Pam: {
                auto out = pam_forward_out(f, wts, wc, opts);
            }
                opts.track_free(f.bytes());
                break;
            case KernelKind::Pga: {
                auto r = pga_reference(f, wts, graph, opts);
            }
                opts.track_free(f.bytes() +
                                static_cast<size_t>(n * wc.k * wc.k) * es);
                break;
            case KernelKind::Halo: {
                auto out = halo_attention(f, wts, cfg.halo_block, cfg.halo_halo, opts);
            }
                opts.track_free(f.bytes());
                break;
            case KernelKind::Global: {
                auto out = global_attention(f, wts, opts);
            }
                opts.track_free(f.bytes());
                break;
        }
    };

    tracker.reset();
    opts.track_alloc(f.bytes());
    if (kind == KernelKind::Pga) opts.track_alloc(graph_bytes);

    run();  // warm-up
    std::vector<u64> times(static_cast<size_t>(cfg.reps));
    for (auto& t : times) {
        const auto t0 = std::chrono::steady_clock::now();
        run();
        const auto t1 = std::chrono::steady_clock::now();
        t = static_cast<u64>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }

    BenchRecord rec;
    rec.kernel = kernel_name(kind);
    rec.b = b;
    rec.c = c;
    rec.h = h;
    rec.w = w;
    rec.k = cfg.k;
    rec.reps = cfg.reps;
    rec.wall_ns_median = median_ns(std::move(times));
    rec.peak_bytes = tracker.peak();
    rec.flops_est = flops_estimate(kind, b, c, h, w, wc);
    return rec;
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& cfg,
                                   std::vector<std::string>* notes) {
    PIXAD_CHECK(cfg.reps >= 3, "reps must be >= 3");
    PIXAD_CHECK(!cfg.sizes.empty(), "at least one size required");
    PIXAD_CHECK(!cfg.kernels.empty(), "at least one kernel required");
    for (i64 side : cfg.sizes) PIXAD_CHECK(side >= 1, "sizes must be >= 1");

    std::vector<BenchRecord> records;
    for (KernelKind kind : cfg.kernels)
        for (i64 side : cfg.sizes) {
            if (kind == KernelKind::Pga && side * side >= cfg.pga_cap &&
                !cfg.allow_large) {
                if (notes) {
                    std::ostringstream os;
                    os << "pga skipped at " << side << "x" << side
                       << ": dense n^2 over the size cap (pass --allow-large to run)";
                    notes->push_back(os.str());
                }
                continue;
            }
            records.push_back(cfg.precision == Precision::F32
                                  ? bench_one<float>(kind, side, cfg)
                                  : bench_one<double>(kind, side, cfg));
        }
    return records;
}

void write_csv(const std::vector<BenchRecord>& records, std::ostream& os) {
    os << kCsvHeader << "\n";
    for (const auto& r : records)
        os << r.kernel << "," << r.b << "," << r.c << "," << r.h << "," << r.w << ","
           << r.k << "," << r.reps << "," << r.wall_ns_median << "," << r.peak_bytes
           << "," << r.flops_est << "\n";
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

u64 parse_u64_field(const std::string& s, int line_no, const char* what) {
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        PIXAD_CHECK(!s.empty() && used == s.size(),
                    "csv line " + std::to_string(line_no) + ": malformed " + what);
        return static_cast<u64>(v);
    } catch (const std::invalid_argument&) {
        fail("csv line " + std::to_string(line_no) + ": malformed " + std::string(what));
    } catch (const std::out_of_range&) {
        fail("csv line " + std::to_string(line_no) + ": out-of-range " +
             std::string(what));
    }
}

}  // namespace

std::vector<BenchRecord> read_csv(std::istream& is) {
    std::string line;
    PIXAD_CHECK(std::getline(is, line), "csv line 1: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    PIXAD_CHECK(line == kCsvHeader, "csv line 1: bad header");
    std::vector<BenchRecord> records;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        PIXAD_CHECK(fields.size() == 10,
                    "csv line " + std::to_string(line_no) + ": expected 10 fields");
        BenchRecord r;
        r.kernel = fields[0];
        PIXAD_CHECK(!r.kernel.empty(),
                    "csv line " + std::to_string(line_no) + ": empty kernel");
        r.b = static_cast<i64>(parse_u64_field(fields[1], line_no, "b"));
        r.c = static_cast<i64>(parse_u64_field(fields[2], line_no, "c"));
        r.h = static_cast<i64>(parse_u64_field(fields[3], line_no, "h"));
        r.w = static_cast<i64>(parse_u64_field(fields[4], line_no, "w"));
        r.k = static_cast<i64>(parse_u64_field(fields[5], line_no, "k"));
        r.reps = static_cast<int>(parse_u64_field(fields[6], line_no, "reps"));
        r.wall_ns_median = parse_u64_field(fields[7], line_no, "wall_ns_median");
        r.peak_bytes = parse_u64_field(fields[8], line_no, "peak_bytes");
        r.flops_est = parse_u64_field(fields[9], line_no, "flops_est");
        records.push_back(std::move(r));
    }
    return records;
}

double loglog_slope(const std::vector<BenchRecord>& records, const std::string& kernel) {
    std::vector<double> xs, ys;
    for (const auto& r : records)
        if (r.kernel == kernel) {
            PIXAD_CHECK(r.wall_ns_median > 0, "nonpositive wall time");
            xs.push_back(std::log(static_cast<double>(r.h * r.w)));
            ys.push_back(std::log(static_cast<double>(r.wall_ns_median)));
        }
    PIXAD_CHECK(xs.size() >= 2, "slope needs at least two records for " + kernel);
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    PIXAD_CHECK(den > 0.0, "slope needs at least two distinct sizes for " + kernel);
    return num / den;
}

}  // namespace pixad
