#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace uncert::cli;

    CLI::App app{"Error-bar and resolution widths for joint position-momentum measurements"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opt;
    double hbar = 1.0;
    auto* hbar_flag = app.add_option("--hbar", hbar, "Reduced Planck constant (default 1; overrides config)");
    app.add_option("--out", opt.out_dir, "Report directory")->capture_default_str();
    app.add_option("--grid-n", opt.grid_n, "Grid points for auto-sized grids")->capture_default_str();

    std::string config_path;
    auto* verify = app.add_subcommand("verify", "Check width products of every configured scenario");
    verify->add_option("config", config_path, "Scenario config (JSON)")->required();

    std::string state;
    std::string eps = "0.05";
    double x_max = 0.0;
    auto* widths = app.add_subcommand("widths", "Overall widths of one state");
    widths->add_option("--state", state, "kind:key=val,... (gaussian, box, cat, mixture)")->required();
    widths->add_option("--eps", eps, "e or e1,e2")->capture_default_str();
    widths->add_option("--x-max", x_max, "Fixed window [-x_max, x_max) instead of the auto grid");

    auto* scan = app.add_subcommand("scan", "Width products over a 1-D or 2-D parameter lattice");
    scan->add_option("config", config_path, "Scan config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfigError;
    }
    if (hbar_flag->count() > 0) opt.hbar = hbar;

    if (verify->parsed()) return run_verify(config_path, opt, std::cout, std::cerr);
    if (widths->parsed()) return run_widths(state, eps, x_max, opt, std::cout, std::cerr);
    return run_scan(config_path, opt, std::cout, std::cerr);
}
