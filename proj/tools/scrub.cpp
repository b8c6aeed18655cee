#include <iostream>
#include <string>
#include <vector>

#include "scrub/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return scrub::run_cli(args, std::cout);
}
