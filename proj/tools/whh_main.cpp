#include <iostream>

#include "CLI11.hpp"
#include "whh/cli.hpp"

int main(int argc, char** argv)
{
    whh::RunConfig config;
    std::string grid;
    std::string free_f;

    CLI::App app{"Kernels and cokernels of W(a) +- H(b) for matching symbol pairs"};
    app.add_option("--a", config.a_path, "JSON symbol file for a")->required();
    app.add_option("--b", config.b_path, "JSON symbol file for b")->required();
    app.add_option("--sign", config.sign, "operator sign")
        ->check(CLI::IsMember({"plus", "minus", "both"}))
        ->capture_default_str();
    app.add_option("--op", config.op, "operation")
        ->check(CLI::IsMember({"analyze", "kernel", "cokernel", "verify", "oracle", "sample"}))
        ->capture_default_str();
    app.add_option("--galerkin-n", config.galerkin_n, "Galerkin section size")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--svd-tol", config.svd_tol, "relative singular value cut")->capture_default_str();
    app.add_option("--residual-tol", config.residual_tol, "relative residual bound")->capture_default_str();
    app.add_option("--grid", grid, "sample grid start:stop:count");
    app.add_option("--free-f", free_f, "piecewise function on the free window (JSON)");
    app.add_option("--out", config.out, "report path (stdout if omitted; .bin writes the oracle matrix)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (!grid.empty())
        config.grid = grid;
    if (!free_f.empty())
        config.free_f = free_f;

    whh::RunResult r = whh::run(config);
    if (!r.written)
        std::cout << r.report;
    if (!r.diagnostic.empty())
        std::cerr << "whh: " << r.diagnostic << "\n";
    return r.exit_code;
}
