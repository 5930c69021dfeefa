#include <iostream>
#include <string>
#include <vector>

#include "vtsynth/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return vtsynth::run_cli(args, std::cin, std::cout, std::cerr);
}
