#include <iostream>

#include "aos/tools/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return aos::cli::run(args, std::cout, std::cerr);
}
