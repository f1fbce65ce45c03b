#include <iostream>

#include "lmpivot_cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lmpivot::cli::run(args, std::cout, std::cerr);
}
