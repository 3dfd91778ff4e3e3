#include "fcvide/fcvide.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Closed-form solver for fuzzy convolution Volterra integro-differential equations"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "solve a problem file and report the closed forms");
    std::string problem_path;
    std::string csv_path;
    bool no_oracle = false;
    int r_points = -1;
    int steps = -1;
    solve->add_option("problem-file", problem_path, "problem description file")->required();
    solve->add_option("--csv", csv_path, "write the t,r,lower,upper table here (overrides csv_out)");
    solve->add_flag("--no-oracle", no_oracle, "skip the numeric cross-check");
    solve->add_option("--r-points", r_points, "number of r-grid points (overrides r_points)");
    solve->add_option("--steps", steps, "oracle step count (overrides steps)");

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(problem_path);
    if (!in) {
        std::cerr << "error: cannot read " << problem_path << "\n";
        return fcvide::kExitParseError;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    fcvide::ProblemFile file;
    try {
        file = fcvide::parse_problem(buffer.str());
    } catch (const fcvide::ParseError& err) {
        std::cerr << problem_path << ":" << err.line << ":" << err.column
                  << ": parse error: " << err.what() << "\n";
        return fcvide::kExitParseError;
    }

    if (!csv_path.empty()) file.options.csv_out = csv_path;
    if (no_oracle) file.options.oracle = false;
    if (r_points > 0) file.options.r_points = r_points;
    if (steps > 0) {
        if (steps < 16) {
            std::cerr << "error: --steps must be at least 16\n";
            return fcvide::kExitParseError;
        }
        file.options.steps = steps;
    }

    std::cout << "problem: " << problem_path << "\n";
    try {
        return fcvide::run(file, std::cout);
    } catch (const fcvide::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return fcvide::kExitSolverError;
    }
}
