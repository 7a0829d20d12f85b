#include <exception>
#include <iostream>

#include "commands.hpp"

namespace pixad::cli {

Isa parse_isa_flag(const std::string& name) {
    if (name == "auto") return Isa::Auto;
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2") return Isa::Avx2;
    throw CLI::ValidationError("--isa", "unknown variant '" + name + "'");
}

}  // namespace pixad::cli

int main(int argc, char** argv) {
    CLI::App app{"pixel-graph attention workbench"};
    app.require_subcommand(1);
    app.fallthrough();

    pixad::cli::Global g;
    app.add_option("--seed", g.seed, "rng seed")->capture_default_str();

    pixad::cli::setup_verify(app, g);
    pixad::cli::setup_gradcheck(app, g);
    pixad::cli::setup_bench(app, g);
    pixad::cli::setup_plot(app, g);
    pixad::cli::setup_demo(app, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "pixad: error: " << e.what() << "\n";
        return 2;
    }
    return g.rc;
}
