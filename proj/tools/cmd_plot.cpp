#include <fstream>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "pixad/plot.hpp"

namespace pixad::cli {

namespace {

struct Flags {
    std::string in;
    std::string out;
};

}  // namespace

void setup_plot(CLI::App& app, Global& g) {
    (void)g;
    auto f = std::make_shared<Flags>();
    CLI::App* sub = app.add_subcommand("plot", "render a bench csv as a scaling svg");
    sub->fallthrough();
    sub->add_option("in", f->in, "bench csv")->required();
    sub->add_option("out", f->out, "svg output path")->required();
    sub->callback([f] {
        std::ifstream is(f->in);
        if (!is) throw std::runtime_error("cannot open " + f->in);
        const std::vector<BenchRecord> records = read_csv(is);
        std::ofstream os(f->out);
        if (!os) throw std::runtime_error("cannot open " + f->out);
        os << render_bench_svg(records);
        std::cout << "wrote " << f->out << " (" << records.size() << " rows)\n";
    });
}

}  // namespace pixad::cli
