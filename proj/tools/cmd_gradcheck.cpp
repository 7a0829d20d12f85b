#include <iostream>
#include <memory>

#include "commands.hpp"
#include "pixad/verify.hpp"

namespace pixad::cli {

namespace {

struct Flags {
    double eps = 1e-5;
    double tol = 1e-6;
    std::string precision = "f64";
};

}  // namespace

void setup_gradcheck(CLI::App& app, Global& g) {
    auto f = std::make_shared<Flags>();
    CLI::App* sub =
        app.add_subcommand("gradcheck", "central-difference check of pam_backward");
    sub->fallthrough();
    sub->add_option("--eps", f->eps, "finite-difference step")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol", f->tol, "relative-error bound")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--precision", f->precision, "f64 only")
        ->capture_default_str()
        ->check(CLI::IsMember({"f32", "f64"}));
    sub->callback([&g, f] {
        if (f->precision != "f64")
            throw CLI::ValidationError("--precision", "gradcheck runs f64 only");
        GradcheckOptions opts;
        opts.seed = g.seed;
        opts.eps = f->eps;
        opts.tol = f->tol;
        const GradcheckReport rep = run_gradcheck(opts);
        std::cout << rep.text;
        g.rc = rep.pass ? 0 : 1;
    });
}

}  // namespace pixad::cli
