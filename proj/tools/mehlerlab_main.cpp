#include <iostream>
#include <string>
#include <vector>

#include "mehlerlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mehler::run_cli(args, std::cout, std::cerr);
}
