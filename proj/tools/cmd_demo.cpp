#include <iostream>
#include <memory>
#include <string>

#include "commands.hpp"
#include "pixad/attention.hpp"
#include "pixad/pgm.hpp"
#include "pixad/tensor_ops.hpp"

namespace pixad::cli {

namespace {

struct Flags {
    std::string in;
    std::string prefix;
};

}  // namespace

// Reads a plain PGM, lifts it to r*r seeded channels, then writes two
// artifacts: the r=2 sub-pixel rearrangement and the k=3 pam output.
void setup_demo(CLI::App& app, Global& g) {
    auto f = std::make_shared<Flags>();
    CLI::App* sub = app.add_subcommand("demo", "pgm in, shuffle + pam pgm out");
    sub->fallthrough();
    sub->add_option("in", f->in, "input pgm (plain P2)")->required();
    sub->add_option("prefix", f->prefix, "output path prefix")->required();
    sub->callback([&g, f] {
        const i64 r = 2;
        const FeatureMap gray = pgm_to_map(read_pgm_file(f->in));

        LinearWeights lift(r * r, 1);
        SeededRng rng(g.seed);
        rng.fill(lift);
        const FeatureMap lifted = pointwise_linear(gray, lift);

        const FeatureMap shuffled = pixel_shuffle(lifted, r);
        const std::string shuffle_path = f->prefix + "_shuffle.pgm";
        write_pgm_file(map_to_pgm(shuffled), shuffle_path);
        std::cout << "wrote " << shuffle_path << " (" << shuffled.h << "x"
                  << shuffled.w << ")\n";

        const PamWeights wts = PamWeights::random(g.seed + 1, lifted.c);
        const FeatureMap out = pam_forward(lifted, wts, WindowConfig{3}).out;
        const std::string pam_path = f->prefix + "_pam.pgm";
        write_pgm_file(map_to_pgm(out), pam_path);
        std::cout << "wrote " << pam_path << " (" << out.h << "x" << out.w << ")\n";
    });
}

}  // namespace pixad::cli
