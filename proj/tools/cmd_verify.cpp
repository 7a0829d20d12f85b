#include <fstream>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "pixad/verify.hpp"

namespace pixad::cli {

namespace {

struct Flags {
    int cases = 20;
    int threads = 1;
    double perturb = 0.0;
    std::string isa = "auto";
    std::string precision = "f64";
    std::string out;
};

}  // namespace

void setup_verify(CLI::App& app, Global& g) {
    auto f = std::make_shared<Flags>();
    CLI::App* sub =
        app.add_subcommand("verify", "pam vs dense-oracle equivalence suite");
    sub->fallthrough();
    sub->add_option("--cases", f->cases, "pam/pga sweep cases")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", f->threads, "worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--perturb", f->perturb,
                    "offset one oracle theta weight (failure injection)")
        ->capture_default_str();
    sub->add_option("--isa", f->isa, "kernel variant")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
    sub->add_option("--precision", f->precision, "f64 only")
        ->capture_default_str()
        ->check(CLI::IsMember({"f32", "f64"}));
    sub->add_option("--out", f->out, "also write the report to this file");
    sub->callback([&g, f] {
        if (f->precision != "f64")
            throw CLI::ValidationError("--precision", "verify runs f64 only");
        VerifyOptions opts;
        opts.seed = g.seed;
        opts.cases = f->cases;
        opts.threads = f->threads;
        opts.isa = parse_isa_flag(f->isa);
        opts.perturb = f->perturb;
        const VerifyReport rep = run_verify(opts);
        std::cout << rep.text;
        if (!f->out.empty()) {
            std::ofstream os(f->out);
            if (!os) throw std::runtime_error("cannot open " + f->out);
            os << rep.text;
        }
        g.rc = rep.pass ? 0 : 1;
    });
}

}  // namespace pixad::cli
