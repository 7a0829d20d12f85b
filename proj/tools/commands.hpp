#pragma once

#include <CLI11.hpp>

#include "pixad/common.hpp"
#include "pixad/simd.hpp"

namespace pixad::cli {

struct Global {
    u64 seed = 42;
    int rc = 0;  // process exit code set by subcommand callbacks
};

Isa parse_isa_flag(const std::string& name);

void setup_verify(CLI::App& app, Global& g);
void setup_gradcheck(CLI::App& app, Global& g);
void setup_bench(CLI::App& app, Global& g);
void setup_plot(CLI::App& app, Global& g);
void setup_demo(CLI::App& app, Global& g);

}  // namespace pixad::cli
