#include <iostream>

#include "bibscreen/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bibscreen::cli::run(args, std::cout, std::cerr, bibscreen::cli::environment());
}
